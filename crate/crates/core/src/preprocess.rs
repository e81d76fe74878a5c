//! Loading, refinement and resolution of rule families.
//!
//! A [`BuildConfig`] is loaded into a [`SpecRegistry`]; [`resolve`] then
//! applies every refinement to its base and yields the concrete rules of
//! one generation run.

use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};

use indexmap::IndexMap;

use crate::diagnostic::{has_errors, Diagnostic};
use crate::emit::constraint_text;
use crate::model::*;
use crate::source::{normalize, FileSource, Language, SourceFile};
use crate::syntax::{parse_abstract, parse_crysl, parse_refinement};
use crate::validate::{validate_rule_set, validate_spec};

/// Loaded specs and refinements, keyed by name, in load order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpecRegistry {
    specs: IndexMap<String, AbstractSpec>,
    refinements: IndexMap<String, RefinementSpec>,
}

impl SpecRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a spec under [`AbstractSpec::name`]. Duplicate names are
    /// rejected.
    pub fn insert_spec(&mut self, spec: AbstractSpec) -> Result<(), Diagnostic> {
        if let Some(prev) = self.specs.get(&spec.name) {
            return Err(Diagnostic::error(
                &spec.spec.origin.0,
                spec.spec.span,
                format!("duplicate spec name `{}` (first loaded from {})", spec.name, prev.spec.origin.0),
            ));
        }
        self.specs.insert(spec.name.clone(), spec);
        Ok(())
    }

    pub fn insert_refinement(&mut self, r: RefinementSpec) -> Result<(), Diagnostic> {
        if let Some(prev) = self.refinements.get(&r.name) {
            return Err(Diagnostic::error(
                &r.origin.0,
                r.span,
                format!("duplicate refinement name `{}` (first loaded from {})", r.name, prev.origin.0),
            ));
        }
        self.refinements.insert(r.name.clone(), r);
        Ok(())
    }

    pub fn specs(&self) -> impl Iterator<Item = &AbstractSpec> {
        self.specs.values()
    }

    pub fn refinements(&self) -> impl Iterator<Item = &RefinementSpec> {
        self.refinements.values()
    }

    pub fn spec(&self, name: &str) -> Option<&AbstractSpec> {
        self.specs.get(name)
    }

    pub fn refinement(&self, name: &str) -> Option<&RefinementSpec> {
        self.refinements.get(name)
    }

    pub fn spec_count(&self) -> usize {
        self.specs.len()
    }

    pub fn refinement_count(&self) -> usize {
        self.refinements.len()
    }

    /// Finds the spec a refinement targets. A qualified reference must
    /// equal the registered class name.
    pub fn base_of(&self, base: &BaseRef) -> Option<&AbstractSpec> {
        let spec = self.specs.get(simple_name(&base.name))?;
        if base.name.contains('.') && spec.spec.class_name != base.name {
            return None;
        }
        Some(spec)
    }
}

/// Output of one generation run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BuildResult {
    /// Output file name and rule, in emission order.
    pub generated: Vec<(String, CrySLSpec)>,
    pub diagnostics: Vec<Diagnostic>,
    pub stats: BuildStats,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct BuildStats {
    pub specs_loaded: usize,
    pub refinements_applied: usize,
    pub specs_emitted: usize,
}

impl BuildResult {
    pub fn has_errors(&self) -> bool {
        has_errors(&self.diagnostics)
    }

    pub fn spec(&self, file_name: &str) -> Option<&CrySLSpec> {
        self.generated.iter().find(|(n, _)| n == file_name).map(|(_, s)| s)
    }
}

/// Reads every file named by the config's load directives. Paths are
/// relative to the file source root: `src` first, loads relative to `src`.
/// Directory loads take the directory's direct children with the expected
/// extension, sorted by name.
pub fn load(config: &BuildConfig, fs: &dyn FileSource) -> Result<SpecRegistry, Vec<Diagnostic>> {
    let conf_path = config.origin.0.as_str();
    let src = normalize(Path::new(&config.src));
    if !fs.is_dir(&src) {
        return Err(vec![Diagnostic::error(
            conf_path,
            config.span,
            format!("missing path: src `{}` is not a directory", config.src),
        )]);
    }

    let mut registry = SpecRegistry::new();
    let mut diags = Vec::new();
    for directive in &config.loads {
        let files = match directive_files(&src, directive, fs) {
            Ok(files) => files,
            Err(msg) => {
                diags.push(Diagnostic::error(conf_path, directive.span, msg));
                continue;
            }
        };
        for file in files {
            let display = file.to_string_lossy().replace('\\', "/");
            let text = match fs.read_to_string(&file) {
                Ok(text) => text,
                Err(e) => {
                    diags.push(Diagnostic::error(conf_path, directive.span, format!("cannot read {display}: {e}")));
                    continue;
                }
            };
            let source = SourceFile::new(display, text);
            match directive.kind {
                LoadKind::Spec => {
                    let parsed = if source.language == Some(Language::CrySL) {
                        parse_crysl(&source).map(AbstractSpec::from_concrete)
                    } else {
                        parse_abstract(&source)
                    };
                    match parsed {
                        Ok(spec) => {
                            if let Err(d) = registry.insert_spec(spec) {
                                diags.push(d);
                            }
                        }
                        Err(errs) => diags.extend(errs),
                    }
                }
                LoadKind::Refinement => match parse_refinement(&source) {
                    Ok(refs) => {
                        for r in refs {
                            if let Err(d) = registry.insert_refinement(r) {
                                diags.push(d);
                            }
                        }
                    }
                    Err(errs) => diags.extend(errs),
                },
            }
        }
    }
    if has_errors(&diags) {
        Err(diags)
    } else {
        Ok(registry)
    }
}

fn directive_files(src: &Path, directive: &LoadDirective, fs: &dyn FileSource) -> Result<Vec<PathBuf>, String> {
    let path = normalize(&src.join(&directive.path));
    let wanted: &[Language] = match directive.kind {
        LoadKind::Spec => &[Language::AbstractCrySL, Language::CrySL],
        LoadKind::Refinement => &[Language::Refinement],
    };
    let fits = |p: &Path| Language::from_path(p).is_some_and(|l| wanted.contains(&l));
    if fs.is_dir(&path) {
        let files = fs.list_files(&path).map_err(|e| format!("cannot list {}: {e}", path.display()))?;
        Ok(files.into_iter().filter(|p| fits(p)).collect())
    } else if fs.is_file(&path) {
        if fits(&path) {
            Ok(vec![path])
        } else {
            Err(format!("`{}` is not a {} file", directive.path, directive.kind))
        }
    } else {
        Err(format!("missing path `{}` (resolved to {})", directive.path, path.display()))
    }
}

/// Applies one refinement to a copy of `base`. Ops run in order; type and
/// meta-variable bindings are substituted once all ops have run.
pub fn apply_refinement(base: &AbstractSpec, r: &RefinementSpec) -> Result<AbstractSpec, Vec<Diagnostic>> {
    let path = r.origin.0.as_str();
    let mut errs: Vec<Diagnostic> = Vec::new();
    let targets = simple_name(&r.base.name) == base.name
        && (!r.base.name.contains('.') || r.base.name == base.spec.class_name);
    if !targets {
        errs.push(Diagnostic::error(
            path,
            r.base.span,
            format!("refinement `{}` targets `{}`, not `{}`", r.name, r.base.name, base.name),
        ));
        return Err(errs);
    }
    let type_args = r.type_arguments();
    if type_args.len() != base.type_params.len() {
        errs.push(Diagnostic::error(
            path,
            r.base.span,
            format!(
                "`{}` takes {} type argument(s), refinement `{}` supplies {}",
                base.name,
                base.type_params.len(),
                r.name,
                type_args.len()
            ),
        ));
        return Err(errs);
    }

    let mut spec = base.spec.clone();
    let mut sets: IndexMap<String, (LiteralSet, Span)> = IndexMap::new();
    let mut removed_labels: Vec<(String, Span)> = Vec::new();
    let err = |errs: &mut Vec<Diagnostic>, span: Span, msg: String| errs.push(Diagnostic::error(path, span, msg));

    for op in &r.ops {
        match op {
            RefinementOp::DefineQualifiedType { .. } => {}
            RefinementOp::DefineLiteralSet { metavar, set, span } => {
                if sets.contains_key(metavar) {
                    err(&mut errs, *span, format!("conflicting definition: meta-variable ${metavar} is already bound"));
                } else {
                    sets.insert(metavar.clone(), (set.clone(), *span));
                }
            }
            RefinementOp::AddEvent { event, aggregate } => {
                if spec.event(&event.label).is_some() || spec.aggregate(&event.label).is_some() {
                    err(&mut errs, event.span, format!("duplicate label `{}`", event.label));
                    continue;
                }
                if let Some(agg) = aggregate {
                    match spec.aggregates.iter_mut().find(|a| &a.name == agg) {
                        Some(a) => a.alternatives.push(event.label.clone()),
                        None => {
                            err(&mut errs, event.span, format!("unknown aggregate `{agg}`"));
                            continue;
                        }
                    }
                }
                spec.events.push(event.clone());
            }
            RefinementOp::RemoveEvent { label, span } => {
                let before = spec.events.len();
                spec.events.retain(|e| &e.label != label);
                if spec.events.len() == before {
                    err(&mut errs, *span, format!("unknown event label `{label}`"));
                    continue;
                }
                for a in &mut spec.aggregates {
                    a.alternatives.retain(|alt| alt != label);
                }
                removed_labels.push((label.clone(), *span));
            }
            RefinementOp::AddConstraint(c) => spec.constraints.push(c.clone()),
            RefinementOp::RemoveConstraint(c) => match spec.constraints.iter().position(|x| x == c) {
                Some(i) => {
                    spec.constraints.remove(i);
                }
                None => err(&mut errs, c.span(), format!("no constraint matches `{}`", constraint_text(c))),
            },
            RefinementOp::ReplaceOrder(o) => spec.order = o.clone(),
            RefinementOp::AddEnsures(p) => spec.ensures.push(p.clone()),
            RefinementOp::AddRequires(p) => spec.requires.push(p.clone()),
            RefinementOp::RemovePredicate { kind, name, span } => {
                let preds = spec.predicates_mut(*kind);
                let before = preds.len();
                preds.retain(|p| &p.name != name);
                if preds.len() == before {
                    err(&mut errs, *span, format!("no {kind} predicate named `{name}`"));
                }
            }
        }
    }

    for (label, span) in &removed_labels {
        if spec.order.atoms().contains(&label.as_str()) {
            err(&mut errs, *span, format!("removed event `{label}` is still referenced in ORDER"));
        }
        if let Some(a) = spec.aggregates.iter().find(|a| a.alternatives.is_empty()) {
            err(&mut errs, *span, format!("removing `{label}` leaves aggregate `{}` empty", a.name));
        }
    }

    // meta-variables that never occur are reported before substitution
    let present: HashSet<String> = spec.meta_vars().into_iter().map(str::to_string).collect();
    for (name, (_, span)) in &sets {
        if !present.contains(name) {
            err(&mut errs, *span, format!("unknown meta-variable ${name} in `{}`", base.name));
        }
    }
    for c in &mut spec.constraints {
        for set in c.literal_sets_mut() {
            if let LiteralSet::MetaVar(name) = set {
                if let Some((bound, _)) = sets.get(name.as_str()) {
                    *set = bound.clone();
                }
            }
        }
    }

    let bindings: BTreeMap<&str, &str> = base.type_params.iter().map(String::as_str).zip(type_args.iter().copied()).collect();
    substitute_types(&mut spec, &bindings);
    if let Some(first) = base.type_params.first() {
        spec.class_name = bindings[first.as_str()].to_string();
    }

    if !errs.is_empty() {
        return Err(errs);
    }
    Ok(AbstractSpec { name: r.name.clone(), is_abstract: false, type_params: Vec::new(), spec })
}

/// Object types take the fully qualified name, method names (constructor
/// events) the simple name.
fn substitute_types(spec: &mut CrySLSpec, bindings: &BTreeMap<&str, &str>) {
    for o in &mut spec.objects {
        if let TypeRef::Param(p) = &o.type_name {
            if let Some(fqn) = bindings.get(p.as_str()) {
                o.type_name = TypeRef::Named(fqn.to_string());
            }
        }
    }
    for e in &mut spec.events {
        if let MethodName::Param(p) = &e.method_name {
            if let Some(fqn) = bindings.get(p.as_str()) {
                e.method_name = MethodName::Named(simple_name(fqn).to_string());
            }
        }
    }
}

fn variation_points(spec: &AbstractSpec) -> Vec<String> {
    let mut points: Vec<String> = spec.spec.meta_vars().iter().map(|m| format!("${m}")).collect();
    points.extend(spec.spec.type_param_uses().iter().map(|(p, _)| format!("<{p}>")));
    for p in &spec.type_params {
        let tok = format!("<{p}>");
        if !points.contains(&tok) {
            points.push(tok);
        }
    }
    points
}

/// Applies every refinement in load order, then passes through the
/// untargeted concrete specs.
pub fn resolve(registry: &SpecRegistry) -> BuildResult {
    let mut result = BuildResult::default();
    result.stats.specs_loaded = registry.spec_count();
    let mut targeted: HashSet<&str> = HashSet::new();
    let mut names: BTreeMap<String, String> = BTreeMap::new();

    let mut add = |result: &mut BuildResult, file: String, spec: CrySLSpec, what: &str| {
        let diags = validate_spec(&spec);
        let failed = has_errors(&diags);
        for d in diags {
            result.diagnostics.push(Diagnostic { message: format!("{} (in {what})", d.message), ..d });
        }
        if failed {
            return;
        }
        if let Some(prev) = names.get(&file) {
            result.diagnostics.push(Diagnostic::error(
                &spec.origin.0,
                spec.span,
                format!("output file `{file}` would be produced by both {prev} and {what}"),
            ));
            return;
        }
        names.insert(file.clone(), what.to_string());
        result.generated.push((file, spec));
    };

    for r in registry.refinements() {
        let Some(base) = registry.base_of(&r.base) else {
            result.diagnostics.push(Diagnostic::error(
                &r.origin.0,
                r.base.span,
                format!("base spec `{}` not found for refinement `{}`", r.base.name, r.name),
            ));
            continue;
        };
        targeted.insert(base.name.as_str());
        let refined = match apply_refinement(base, r) {
            Ok(s) => s,
            Err(errs) => {
                result.diagnostics.extend(errs);
                continue;
            }
        };
        if refined.has_variation_points() {
            result.diagnostics.push(Diagnostic::error(
                &r.origin.0,
                r.span,
                format!("unbound {} in {}", variation_points(&refined).join(", "), r.name),
            ));
            continue;
        }
        if base.type_params.is_empty() && refined.spec == base.spec {
            result.diagnostics.push(Diagnostic::warning(&r.origin.0, r.span, format!("refinement `{}` has no effect", r.name)));
        }
        result.stats.refinements_applied += 1;
        add(&mut result, format!("{}.crysl", r.name), refined.spec, &format!("refinement {}", r.name));
    }

    for spec in registry.specs() {
        if targeted.contains(spec.name.as_str()) {
            continue;
        }
        if spec.has_variation_points() {
            result.diagnostics.push(Diagnostic::error(
                &spec.spec.origin.0,
                spec.spec.span,
                format!("unbound {} in {}", variation_points(spec).join(", "), spec.name),
            ));
            continue;
        }
        if spec.is_abstract {
            result.diagnostics.push(Diagnostic::warning(
                &spec.spec.origin.0,
                spec.spec.span,
                format!("abstract spec `{}` is never refined and is not emitted", spec.name),
            ));
            continue;
        }
        add(&mut result, format!("{}.crysl", spec.spec.simple_name()), spec.spec.clone(), &format!("spec {}", spec.name));
    }

    let rules: Vec<CrySLSpec> = result.generated.iter().map(|(_, s)| s.clone()).collect();
    result.diagnostics.extend(validate_rule_set(&rules));
    result.stats.specs_emitted = result.generated.len();
    result
}

/// Loads and resolves in one step.
pub fn build(config: &BuildConfig, fs: &dyn FileSource) -> Result<BuildResult, Vec<Diagnostic>> {
    load(config, fs).map(|registry| resolve(&registry))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::MemFs;
    use crate::syntax::parse_config;

    const DIGEST: &str = "ABSTRACT SPEC Digest<T>\nOBJECTS\n  byte input;\n  byte[] out;\n  int outOff;\nEVENTS\n  c : <T>();\n  u : update(input);\n  f : doFinal(out, outOff);\nORDER\n  c, u+, f\nENSURES\n  digested[out];\n";
    const MD: &str = "SPEC java.security.MessageDigest\nOBJECTS\n  java.lang.String algorithm;\n  byte[] out;\nEVENTS\n  g1 : getInstance(algorithm);\n  g2 : getInstance(algorithm, _);\n  Gets := g1 | g2;\n  u1 : update(_);\n  d1 : out = digest();\nORDER\n  Gets, u1+, d1\nCONSTRAINTS\n  algorithm in $AlgSet;\nENSURES\n  digested[out];\n";

    fn abs(path: &str, text: &str) -> AbstractSpec {
        parse_abstract(&SourceFile::new(path, text)).unwrap()
    }

    fn refs(text: &str) -> Vec<RefinementSpec> {
        parse_refinement(&SourceFile::new("t.ref", text)).unwrap()
    }

    fn registry(specs: &[(&str, &str)], refinements: &str) -> SpecRegistry {
        let mut reg = SpecRegistry::new();
        for (p, t) in specs {
            reg.insert_spec(abs(p, t)).unwrap();
        }
        for r in refs(refinements) {
            reg.insert_refinement(r).unwrap();
        }
        reg
    }

    #[test]
    fn type_parameter_binding() {
        let r = &refs("SPEC SHA256 REFINES Digest<org.bouncycastle.crypto.digests.SHA256Digest>;")[0];
        let out = apply_refinement(&abs("d.mcsl", DIGEST), r).unwrap();
        assert_eq!(out.name, "SHA256");
        assert_eq!(out.spec.class_name, "org.bouncycastle.crypto.digests.SHA256Digest");
        assert_eq!(out.spec.events[0].method_name, MethodName::Named("SHA256Digest".into()));
        assert!(out.spec.is_concrete());
    }

    #[test]
    fn rebinding_is_a_conflict() {
        let r = &refs("SPEC M REFINES MessageDigest { define AlgSet = {\"A\"}; define AlgSet = {\"B\"}; }")[0];
        let errs = apply_refinement(&abs("m.mcsl", MD), r).unwrap_err();
        assert_eq!(errs.len(), 1);
        assert!(errs[0].message.contains("conflicting definition"), "{errs:?}");
    }

    #[test]
    fn unknown_meta_variable() {
        let r = &refs("SPEC M REFINES MessageDigest { define AlgSet = {\"A\"}; define Other = {\"B\"}; }")[0];
        let errs = apply_refinement(&abs("m.mcsl", MD), r).unwrap_err();
        assert!(errs[0].message.contains("unknown meta-variable $Other"));
    }

    #[test]
    fn wrong_type_argument_count() {
        let r = &refs("SPEC X REFINES Digest;")[0];
        assert!(apply_refinement(&abs("d.mcsl", DIGEST), r).is_err());
    }

    #[test]
    fn event_ops() {
        let text = "SPEC M REFINES MessageDigest {\n define AlgSet = {\"SHA-256\"};\n add event g3 : getInstance(algorithm, algorithm) to Gets;\n remove event g2;\n}";
        let out = apply_refinement(&abs("m.mcsl", MD), &refs(text)[0]).unwrap();
        assert_eq!(out.spec.aggregate("Gets").unwrap().alternatives, ["g1", "g3"]);
        assert!(out.spec.event("g2").is_none());

        let dup = "SPEC M REFINES MessageDigest { define AlgSet = {\"x\"}; add event u1 : update(_); }";
        let errs = apply_refinement(&abs("m.mcsl", MD), &refs(dup)[0]).unwrap_err();
        assert!(errs[0].message.contains("duplicate label `u1`"));

        let dangling = "SPEC M REFINES MessageDigest { define AlgSet = {\"x\"}; remove event u1; }";
        let errs = apply_refinement(&abs("m.mcsl", MD), &refs(dangling)[0]).unwrap_err();
        assert!(errs[0].message.contains("still referenced in ORDER"));
    }

    #[test]
    fn constraint_and_predicate_ops() {
        let text = "SPEC M REFINES MessageDigest {\n remove constraint algorithm in $AlgSet;\n add constraint algorithm in {\"b\", \"a\"};\n remove ensures digested;\n add ensures hashed[out];\n}";
        let out = apply_refinement(&abs("m.mcsl", MD), &refs(text)[0]).unwrap();
        assert_eq!(out.spec.constraints, vec![ConstraintExpr::membership("algorithm", LiteralSet::of(["a", "b"]))]);
        assert_eq!(out.spec.ensures, vec![PredicateRef::new("hashed", &["out"])]);

        let missing = "SPEC M REFINES MessageDigest { remove constraint algorithm in {\"zz\"}; remove requires nope; }";
        let errs = apply_refinement(&abs("m.mcsl", MD), &refs(missing)[0]).unwrap_err();
        assert_eq!(errs.len(), 2);
    }

    #[test]
    fn resolve_template_family() {
        let r = "SPEC SHA256 REFINES Digest<a.SHA256Digest>;\nSPEC SHA384 REFINES Digest<a.SHA384Digest>;";
        let out = resolve(&registry(&[("d.mcsl", DIGEST)], r));
        assert!(out.diagnostics.is_empty(), "{:?}", out.diagnostics);
        let names: Vec<&str> = out.generated.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["SHA256.crysl", "SHA384.crysl"]);
        assert_eq!(out.stats, BuildStats { specs_loaded: 1, refinements_applied: 2, specs_emitted: 2 });
    }

    #[test]
    fn unrefined_meta_variable_is_reported_once() {
        let out = resolve(&registry(&[("m.mcsl", MD)], ""));
        assert!(out.generated.is_empty());
        assert_eq!(out.diagnostics.len(), 1);
        assert_eq!(out.diagnostics[0].message, "unbound $AlgSet in MessageDigest");
    }

    #[test]
    fn missing_base() {
        let out = resolve(&registry(&[], "SPEC X REFINES Nowhere;"));
        assert!(out.diagnostics[0].message.contains("base spec `Nowhere` not found"));
    }

    #[test]
    fn no_effect_warning() {
        let concrete = "SPEC a.B\nOBJECTS\n int x;\nEVENTS\n c : B(x);\nORDER\n c\n";
        let out = resolve(&registry(&[("b.crysl", concrete)], "SPEC B2 REFINES B { }"));
        assert_eq!(out.generated.len(), 1);
        assert_eq!(out.diagnostics.len(), 1);
        assert!(!out.diagnostics[0].is_error());
        assert!(out.diagnostics[0].message.contains("has no effect"));
    }

    fn fs_with_config(conf: &str) -> (BuildConfig, MemFs) {
        let c = parse_config(&SourceFile::new("build.conf", conf)).unwrap().remove(0);
        let fs = MemFs::new()
            .with("rules/base/MessageDigest.mcsl", MD)
            .with("rules/base/notes.txt", "ignored")
            .with("rules/bsi/md.ref", "SPEC MessageDigest REFINES java.security.MessageDigest { define AlgSet = {\"SHA-256\"}; }");
        (c, fs)
    }

    #[test]
    fn load_reads_directories_and_files() {
        let (c, fs) = fs_with_config("config c { src = rules; out = target; load spec base/; load refinement bsi/md.ref; }");
        let reg = load(&c, &fs).unwrap();
        assert_eq!((reg.spec_count(), reg.refinement_count()), (1, 1));
        let out = resolve(&reg);
        assert!(!out.has_errors(), "{:?}", out.diagnostics);
        assert_eq!(out.generated[0].0, "MessageDigest.crysl");
    }

    #[test]
    fn load_errors() {
        let (c, fs) = fs_with_config("config c { src = nope; out = t; load spec base/; }");
        assert!(load(&c, &fs).unwrap_err()[0].message.contains("missing path"));

        let (c, fs) = fs_with_config("config c { src = rules; out = t; load spec base/; load refinement bsi/; load refinement bsi/; }");
        assert!(load(&c, &fs).unwrap_err()[0].message.contains("duplicate refinement name"));

        let (c, fs) = fs_with_config("config c { src = rules; out = t; load spec absent/; }");
        assert!(load(&c, &fs).unwrap_err()[0].message.contains("missing path"));
    }
}
