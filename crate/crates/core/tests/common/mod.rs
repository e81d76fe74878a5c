#![allow(dead_code)]

use std::path::{Path, PathBuf};

use metacrysl::model::*;
use proptest::prelude::*;

pub fn corpus(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(rel)
}

pub fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Labels `a`, `b`, ... used by the random ORDER expressions.
pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
}

/// Random well-formed ORDER expressions over the first `alphabet` labels.
pub fn order_expr(alphabet: usize, depth: u32) -> impl Strategy<Value = OrderExpr> {
    let leaf = (0..alphabet).prop_map(move |i| OrderExpr::atom(labels(alphabet)[i].clone()));
    leaf.prop_recursive(depth.saturating_sub(1), 24, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..=3).prop_map(OrderExpr::Seq),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(OrderExpr::Alt),
            inner.clone().prop_map(|e| OrderExpr::Opt(Box::new(e))),
            inner.clone().prop_map(|e| OrderExpr::Star(Box::new(e))),
            inner.prop_map(|e| OrderExpr::Plus(Box::new(e))),
        ]
    })
}

/// Every word over `alphabet` of length at most `max_len`, shortest first.
pub fn all_words(alphabet: &[String], max_len: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for l in alphabet {
                let mut w2: Vec<String> = w.clone();
                w2.push(l.clone());
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Backtracking membership: the set of positions where a match of `e`
/// starting at `start` can end.
pub fn match_ends(e: &OrderExpr, word: &[String], start: usize) -> Vec<usize> {
    let mut ends = match e {
        OrderExpr::Atom(l, _) => {
            if word.get(start) == Some(l) {
                vec![start + 1]
            } else {
                vec![]
            }
        }
        OrderExpr::Seq(items) => {
            let mut pos = vec![start];
            for it in items {
                pos = pos.iter().flat_map(|&p| match_ends(it, word, p)).collect();
                pos.sort_unstable();
                pos.dedup();
            }
            pos
        }
        OrderExpr::Alt(items) => items.iter().flat_map(|it| match_ends(it, word, start)).collect(),
        OrderExpr::Opt(inner) => {
            let mut v = vec![start];
            v.extend(match_ends(inner, word, start));
            v
        }
        OrderExpr::Star(inner) | OrderExpr::Plus(inner) => {
            let mut seen = if matches!(e, OrderExpr::Star(_)) { vec![start] } else { vec![] };
            let mut todo = match_ends(inner, word, start);
            while let Some(p) = todo.pop() {
                if !seen.contains(&p) {
                    seen.push(p);
                    todo.extend(match_ends(inner, word, p));
                }
            }
            seen
        }
    };
    ends.sort_unstable();
    ends.dedup();
    ends
}

pub fn in_language(e: &OrderExpr, word: &[String]) -> bool {
    match_ends(e, word, 0).contains(&word.len())
}

/// Regular expressions for Brzozowski derivatives.
#[derive(Clone, Debug, PartialEq)]
pub enum Re {
    Empty,
    Eps,
    Sym(String),
    Cat(Box<Re>, Box<Re>),
    Or(Box<Re>, Box<Re>),
    Rep(Box<Re>),
}

impl Re {
    pub fn from_order(e: &OrderExpr) -> Re {
        fn fold(items: &[OrderExpr], f: fn(Re, Re) -> Re) -> Re {
            let mut it = items.iter().map(Re::from_order);
            let first = it.next().expect("non-empty");
            it.fold(first, f)
        }
        match e {
            OrderExpr::Atom(l, _) => Re::Sym(l.clone()),
            OrderExpr::Seq(items) => fold(items, |a, b| Re::Cat(Box::new(a), Box::new(b))),
            OrderExpr::Alt(items) => fold(items, |a, b| Re::Or(Box::new(a), Box::new(b))),
            OrderExpr::Opt(x) => Re::Or(Box::new(Re::Eps), Box::new(Re::from_order(x))),
            OrderExpr::Star(x) => Re::Rep(Box::new(Re::from_order(x))),
            OrderExpr::Plus(x) => {
                let r = Re::from_order(x);
                Re::Cat(Box::new(r.clone()), Box::new(Re::Rep(Box::new(r))))
            }
        }
    }

    pub fn nullable(&self) -> bool {
        match self {
            Re::Empty | Re::Sym(_) => false,
            Re::Eps | Re::Rep(_) => true,
            Re::Cat(a, b) => a.nullable() && b.nullable(),
            Re::Or(a, b) => a.nullable() || b.nullable(),
        }
    }

    /// True if the language is empty.
    pub fn is_void(&self) -> bool {
        match self {
            Re::Empty => true,
            Re::Eps | Re::Sym(_) | Re::Rep(_) => false,
            Re::Cat(a, b) => a.is_void() || b.is_void(),
            Re::Or(a, b) => a.is_void() && b.is_void(),
        }
    }

    pub fn derive(&self, c: &str) -> Re {
        let cat = |a: Re, b: Re| if a.is_void() || b.is_void() { Re::Empty } else { Re::Cat(Box::new(a), Box::new(b)) };
        let or = |a: Re, b: Re| match (a.is_void(), b.is_void()) {
            (true, _) => b,
            (_, true) => a,
            _ => Re::Or(Box::new(a), Box::new(b)),
        };
        match self {
            Re::Empty | Re::Eps => Re::Empty,
            Re::Sym(s) => {
                if s == c {
                    Re::Eps
                } else {
                    Re::Empty
                }
            }
            Re::Cat(a, b) => {
                let left = cat(a.derive(c), (**b).clone());
                if a.nullable() {
                    or(left, b.derive(c))
                } else {
                    left
                }
            }
            Re::Or(a, b) => or(a.derive(c), b.derive(c)),
            Re::Rep(a) => cat(a.derive(c), self.clone()),
        }
    }
}

/// The verdict the automaton should give, from derivatives alone.
pub fn expected_verdict(e: &OrderExpr, word: &[String]) -> metacrysl::Verdict {
    let mut r = Re::from_order(e);
    for (i, l) in word.iter().enumerate() {
        r = r.derive(l);
        if r.is_void() {
            return metacrysl::Verdict::RejectedAt(i);
        }
    }
    if r.nullable() {
        metacrysl::Verdict::Accepted
    } else {
        metacrysl::Verdict::Incomplete
    }
}

fn ident(prefix: &'static str) -> impl Strategy<Value = String> {
    (0u32..40).prop_map(move |n| format!("{prefix}{n}"))
}

fn literal() -> impl Strategy<Value = Literal> {
    prop_oneof![(0i64..5000).prop_map(Literal::Int), "[A-Za-z][A-Za-z0-9/_-]{0,12}".prop_map(Literal::Str)]
}

fn literal_set() -> impl Strategy<Value = LiteralSet> {
    prop::collection::btree_set(literal(), 1..5).prop_map(LiteralSet::Literals)
}

const TYPES: &[&str] = &["int", "byte", "byte[]", "char[]", "java.lang.String", "java.security.Key", "javax.crypto.SecretKey"];

/// Random concrete rules that satisfy every rule invariant.
pub fn crysl_spec() -> impl Strategy<Value = CrySLSpec> {
    let class = prop::collection::vec("[a-z]{1,6}", 1..4)
        .prop_flat_map(|pkgs| ("[A-Z][A-Za-z0-9]{0,8}", Just(pkgs)))
        .prop_map(|(simple, pkgs)| format!("{}.{simple}", pkgs.join(".")));
    let vars = prop::collection::btree_set(ident("v"), 1..6);
    (class, vars).prop_flat_map(|(class, vars)| {
        let vars: Vec<String> = vars.into_iter().collect();
        let objects = prop::collection::vec(prop::sample::select(TYPES), vars.len()).prop_map({
            let vars = vars.clone();
            move |types| {
                vars.iter()
                    .zip(types)
                    .map(|(v, t)| ObjectDecl { type_name: TypeRef::Named(t.to_string()), var_name: v.clone(), span: Span::default() })
                    .collect::<Vec<_>>()
            }
        });
        let param = prop_oneof![
            3 => prop::sample::select(vars.clone()).prop_map(ParamRef::Var),
            1 => literal().prop_map(ParamRef::Literal),
            1 => Just(ParamRef::Wildcard),
        ];
        let event = (
            prop::option::of(prop::sample::select(vars.clone())),
            "[a-z][A-Za-z]{0,8}",
            prop::collection::vec(param, 0..4),
        );
        let events = prop::collection::vec(event, 1..6);
        let membership = (prop::sample::select(vars.clone()), literal_set()).prop_map(|(v, s)| ConstraintExpr::membership(v, s)).boxed();
        let constraint = prop_oneof![
            2 => membership.clone(),
            1 => (membership.clone(), membership).prop_map(|(a, b)| ConstraintExpr::implies(a, b)),
        ];
        let mut pred_args = vars.clone();
        pred_args.push("this".into());
        let pred = ("[a-z][A-Za-z]{0,10}", prop::collection::vec(prop::sample::select(pred_args), 1..3))
            .prop_map(|(name, args)| PredicateRef { name, args, span: Span::default() });
        (
            Just(class.clone()),
            objects,
            events,
            prop::collection::vec(constraint, 0..3),
            prop::collection::vec(pred.clone(), 0..3),
            prop::collection::vec(pred, 0..3),
            prop::collection::vec(any::<prop::sample::Index>(), 0..2),
        )
            .prop_flat_map(|(class, objects, events, constraints, requires, ensures, agg_picks)| {
                let events: Vec<EventDecl> = events
                    .into_iter()
                    .enumerate()
                    .map(|(i, (ret, name, params))| EventDecl {
                        label: format!("e{i}"),
                        return_binding: ret,
                        method_name: MethodName::Named(name),
                        params,
                        span: Span::default(),
                    })
                    .collect();
                let labels: Vec<String> = events.iter().map(|e| e.label.clone()).collect();
                let aggregates: Vec<AggregateDecl> = if labels.len() >= 2 {
                    agg_picks
                        .iter()
                        .enumerate()
                        .map(|(i, pick)| {
                            let start = pick.index(labels.len() - 1);
                            AggregateDecl { name: format!("Agg{i}"), alternatives: labels[start..].to_vec(), span: Span::default() }
                        })
                        .collect()
                } else {
                    Vec::new()
                };
                let mut atoms = labels.clone();
                atoms.extend(aggregates.iter().map(|a| a.name.clone()));
                let order = order_over(atoms);
                (Just((class, objects, events, aggregates, constraints, requires, ensures)), order)
            })
            .prop_map(|((class_name, objects, events, aggregates, constraints, requires, ensures), order)| CrySLSpec {
                class_name,
                objects,
                events,
                aggregates,
                order,
                constraints,
                requires,
                ensures,
                span: Span::default(),
                origin: Origin::default(),
            })
    })
}

fn order_over(atoms: Vec<String>) -> impl Strategy<Value = OrderExpr> {
    let leaf = prop::sample::select(atoms).prop_map(OrderExpr::atom);
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..=3).prop_map(OrderExpr::Seq),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(OrderExpr::Alt),
            inner.clone().prop_map(|e| OrderExpr::Opt(Box::new(e))),
            inner.clone().prop_map(|e| OrderExpr::Star(Box::new(e))),
            inner.prop_map(|e| OrderExpr::Plus(Box::new(e))),
        ]
    })
}

/// Every .crysl and .mcsl file under the bundled corpus, generated output excluded.
pub fn corpus_rule_files() -> Vec<PathBuf> {
    fn walk(dir: &Path, out: &mut Vec<PathBuf>) {
        for entry in std::fs::read_dir(dir).expect("corpus dir") {
            let p = entry.expect("dir entry").path();
            if p.is_dir() {
                if p.file_name().is_some_and(|n| n != "target") {
                    walk(&p, out);
                }
            } else if matches!(p.extension().and_then(|e| e.to_str()), Some("crysl" | "mcsl")) {
                out.push(p);
            }
        }
    }
    let mut out = Vec::new();
    walk(&corpus(""), &mut out);
    out.sort();
    out
}
