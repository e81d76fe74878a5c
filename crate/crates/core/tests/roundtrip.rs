mod common;

use metacrysl::emit::{render, render_abstract};
use metacrysl::{parse_abstract, parse_crysl, pretty_print, validate_spec, SourceFile};
use proptest::prelude::*;

fn reparse(text: &str) -> metacrysl::CrySLSpec {
    parse_crysl(&SourceFile::new("mem.crysl", text)).unwrap_or_else(|d| panic!("re-parse failed: {d:?}\n{text}"))
}

#[test]
fn corpus_rules_round_trip() {
    let mut files = common::corpus_rule_files();
    assert_eq!(files.len(), 16, "{files:?}");
    files.push(common::golden("SHA256.crysl"));
    files.push(common::golden("SHA512.crysl"));
    for path in files {
        let file = SourceFile::read(&path).unwrap();
        let spec = parse_abstract(&file).unwrap_or_else(|d| panic!("{}: {d:?}", path.display()));
        let text = render_abstract(&spec);
        let again = parse_abstract(&SourceFile::new(path.display().to_string(), text.clone())).unwrap();
        assert_eq!(again, spec, "{}", path.display());
        assert_eq!(render_abstract(&again), text, "{}", path.display());
    }
}

#[test]
fn generated_corpus_round_trips() {
    let dir = common::corpus("jca-android");
    let conf = SourceFile::read(&dir.join("android25plus.conf")).unwrap();
    let config = metacrysl::parse_config(&conf).unwrap().remove(0);
    let result = metacrysl::build(&config, &metacrysl::OsFs::new(&dir)).unwrap();
    assert!(!result.has_errors(), "{:?}", result.diagnostics);
    for (_, spec) in &result.generated {
        let text = pretty_print(spec).unwrap();
        let again = reparse(&text);
        assert_eq!(&again, spec);
        assert_eq!(pretty_print(&again).unwrap(), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn random_specs_round_trip(spec in common::crysl_spec()) {
        prop_assert!(validate_spec(&spec).iter().all(|d| !d.is_error()), "generator produced an invalid rule: {:?}", validate_spec(&spec));
        let text = pretty_print(&spec).unwrap();
        let again = reparse(&text);
        prop_assert_eq!(&again, &spec);
        prop_assert_eq!(pretty_print(&again).unwrap(), text);
    }

    #[test]
    fn abstract_parser_accepts_concrete_text(spec in common::crysl_spec()) {
        let text = render(&spec);
        let a = parse_abstract(&SourceFile::new("mem.mcsl", text)).unwrap();
        prop_assert!(!a.has_variation_points());
        prop_assert_eq!(a.into_concrete().unwrap(), spec);
    }
}
