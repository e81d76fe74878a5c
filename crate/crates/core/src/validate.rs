//! Structural validation of rules and rule sets.
//!
//! Validation never stops at the first problem; diagnostics come back
//! sorted by source position.

use std::collections::{BTreeMap, HashSet};

use crate::diagnostic::{sort_by_location, Diagnostic};
use crate::model::*;

/// Checks a concrete rule. Remaining variation points are errors.
pub fn validate_spec(spec: &CrySLSpec) -> Vec<Diagnostic> {
    let mut diags = structural(spec);
    let path = &spec.origin.0;
    for c in &spec.constraints {
        for set in c.literal_sets() {
            if let LiteralSet::MetaVar(name) = set {
                diags.push(Diagnostic::error(path, c.span(), format!("unbound meta-variable ${name}")));
            }
        }
    }
    for (param, span) in spec.type_param_uses() {
        diags.push(Diagnostic::error(path, span, format!("unbound type parameter <{param}>")));
    }
    sort_by_location(&mut diags);
    diags
}

/// Checks an abstract rule; declared variation points are allowed.
pub fn validate_abstract(spec: &AbstractSpec) -> Vec<Diagnostic> {
    let mut diags = structural(&spec.spec);
    let path = &spec.spec.origin.0;
    for (param, span) in spec.spec.type_param_uses() {
        if !spec.type_params.iter().any(|p| p == param) {
            diags.push(Diagnostic::error(path, span, format!("type parameter <{param}> used without declaration")));
        }
    }
    sort_by_location(&mut diags);
    diags
}

fn structural(spec: &CrySLSpec) -> Vec<Diagnostic> {
    let path = spec.origin.0.as_str();
    let mut diags = Vec::new();
    let err = |diags: &mut Vec<Diagnostic>, span: Span, msg: String| diags.push(Diagnostic::error(path, span, msg));

    let mut vars = HashSet::new();
    for o in &spec.objects {
        if !vars.insert(o.var_name.as_str()) {
            err(&mut diags, o.span, format!("duplicate object `{}`", o.var_name));
        }
    }

    let mut labels = HashSet::new();
    for e in &spec.events {
        if !labels.insert(e.label.as_str()) {
            err(&mut diags, e.span, format!("duplicate label `{}`", e.label));
        }
        if let Some(ret) = &e.return_binding {
            if !spec.is_declared_var(ret) {
                err(&mut diags, e.span, format!("return binding `{ret}` of event `{}` is not a declared object", e.label));
            }
        }
        for p in &e.params {
            if let ParamRef::Var(v) = p {
                if !spec.is_declared_var(v) {
                    err(&mut diags, e.span, format!("undeclared variable `{v}` in event `{}`", e.label));
                }
            }
        }
    }
    for a in &spec.aggregates {
        if !labels.insert(a.name.as_str()) {
            err(&mut diags, a.span, format!("duplicate label `{}`", a.name));
        }
        if a.alternatives.is_empty() {
            err(&mut diags, a.span, format!("aggregate `{}` has no alternatives", a.name));
        }
        for alt in &a.alternatives {
            if spec.event(alt).is_none() {
                err(&mut diags, a.span, format!("unresolved label `{alt}` in aggregate `{}`", a.name));
            }
        }
    }

    if let Some(bad) = spec.order.find_malformed() {
        let span = if bad.span().is_synthetic() { spec.span } else { bad.span() };
        err(&mut diags, span, "malformed ORDER: sequences and alternatives need at least two operands".into());
    }
    if spec.order.atoms().is_empty() {
        err(&mut diags, spec.span, "ORDER is empty".into());
    }
    spec.order.for_each_atom(&mut |label, span| {
        if spec.event(label).is_none() && spec.aggregate(label).is_none() {
            diags.push(Diagnostic::error(path, span, format!("unresolved label `{label}` in ORDER")));
        }
    });

    for c in &spec.constraints {
        if let ConstraintExpr::Implication { lhs, rhs } = c {
            if matches!(**lhs, ConstraintExpr::Implication { .. }) || matches!(**rhs, ConstraintExpr::Implication { .. }) {
                err(&mut diags, c.span(), "nested implication: each side must be a membership".into());
            }
        }
        for v in c.variables() {
            if !spec.is_declared_var(v) {
                err(&mut diags, c.span(), format!("undeclared variable `{v}` in constraint"));
            }
        }
        for set in c.literal_sets() {
            if set.literals().is_some_and(|l| l.is_empty()) {
                err(&mut diags, c.span(), "empty literal set".into());
            }
        }
    }

    for kind in [PredicateKind::Requires, PredicateKind::Ensures] {
        for p in spec.predicates(kind) {
            if p.args.is_empty() {
                err(&mut diags, p.span, format!("predicate `{}` has no arguments", p.name));
            }
            for a in &p.args {
                if !spec.is_declared_var(a) {
                    err(&mut diags, p.span, format!("undeclared variable `{a}` in predicate `{}`", p.name));
                }
            }
        }
    }
    diags
}

/// Cross-rule checks: duplicate classes are errors; a REQUIRES predicate
/// (name and arity) that no rule ENSURES is a warning.
pub fn validate_rule_set(specs: &[CrySLSpec]) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let mut classes: BTreeMap<&str, &CrySLSpec> = BTreeMap::new();
    for s in specs {
        if let Some(first) = classes.get(s.class_name.as_str()) {
            diags.push(Diagnostic::error(
                &s.origin.0,
                s.span,
                format!("duplicate rule for class {} (also in {})", s.class_name, first.origin.0),
            ));
        } else {
            classes.insert(&s.class_name, s);
        }
    }
    let ensured: HashSet<(&str, usize)> =
        specs.iter().flat_map(|s| s.ensures.iter().map(|p| (p.name.as_str(), p.args.len()))).collect();
    for s in specs {
        for p in &s.requires {
            if !ensured.contains(&(p.name.as_str(), p.args.len())) {
                diags.push(Diagnostic::warning(
                    &s.origin.0,
                    p.span,
                    format!("required predicate {}/{} is not ensured by any rule", p.name, p.args.len()),
                ));
            }
        }
    }
    diags
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostic::Severity;
    use crate::source::SourceFile;
    use crate::syntax::parse_crysl;

    fn spec(text: &str) -> CrySLSpec {
        parse_crysl(&SourceFile::new("t.crysl", text)).unwrap()
    }

    const BASE: &str = "SPEC a.B\nOBJECTS\n int x;\n int y;\nEVENTS\n c : B(x);\n d : y = go();\nORDER\n c, d\n";

    #[test]
    fn valid_rule_has_no_diagnostics() {
        assert!(validate_spec(&spec(BASE)).is_empty());
    }

    #[test]
    fn unresolved_order_label() {
        let s = spec(&BASE.replace("c, d", "c, x9"));
        let d = validate_spec(&s);
        assert_eq!(d.len(), 1);
        assert!(d[0].message.contains("unresolved label `x9`"));
        assert_eq!((d[0].line, d[0].column), (9, 5));
    }

    #[test]
    fn duplicate_event_label() {
        let s = spec(&BASE.replace(" d : y = go();", " c : y = go();").replace("c, d", "c, c"));
        let d = validate_spec(&s);
        assert_eq!(d.len(), 1, "{d:?}");
        assert!(d[0].message.contains("duplicate label `c`"));
    }

    #[test]
    fn diagnostics_are_sorted_and_complete() {
        let text = "SPEC a.B\nOBJECTS\n int x;\nEVENTS\n c : B(q);\n d : r = go();\nORDER\n c, e\nENSURES\n p[z];\n";
        let d = validate_spec(&spec(text));
        let lines: Vec<u32> = d.iter().map(|d| d.line).collect();
        assert_eq!(lines, vec![5, 6, 8, 10]);
        assert!(d.iter().all(|d| d.severity == Severity::Error));
    }

    #[test]
    fn this_is_implicitly_declared() {
        let s = spec("SPEC a.B\nOBJECTS\nEVENTS\n c : B();\nORDER\n c\nENSURES\n made[this];\n");
        assert!(validate_spec(&s).is_empty());
    }

    #[test]
    fn synthesized_malformed_order_is_caught() {
        let mut s = spec(BASE);
        s.order = OrderExpr::Seq(vec![OrderExpr::atom("c")]);
        assert!(validate_spec(&s).iter().any(|d| d.message.contains("malformed ORDER")));
    }

    #[test]
    fn rule_set_duplicates_and_unmatched_requires() {
        let a = spec("SPEC a.B\nOBJECTS\n int k;\nEVENTS\n c : B(k);\nORDER\n c\nREQUIRES\n generatedKeySet[k];\n");
        let d = validate_rule_set(std::slice::from_ref(&a));
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].severity, Severity::Warning);

        let d = validate_rule_set(&[a.clone(), a]);
        assert_eq!(d.iter().filter(|d| d.is_error()).count(), 1);
    }
}
