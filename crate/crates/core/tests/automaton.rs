mod common;

use std::time::Instant;

use metacrysl::automaton::Nfa;
use metacrysl::model::OrderExpr;
use metacrysl::syntax::parse_order;
use metacrysl::{compile_order, to_dot, Verdict};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, TestRunner};

fn random_exprs(n: usize, seed: u8) -> Vec<(OrderExpr, usize)> {
    let mut runner = TestRunner::new_with_rng(Config::default(), proptest::test_runner::TestRng::from_seed(
        proptest::test_runner::RngAlgorithm::ChaCha,
        &[seed; 32],
    ));
    (0..n)
        .map(|i| {
            let alphabet = 1 + i % 4;
            let strat = common::order_expr(alphabet, 4).prop_filter("depth", |e| e.depth() <= 4);
            (strat.new_tree(&mut runner).unwrap().current(), alphabet)
        })
        .collect()
}

#[test]
fn dfa_matches_regex_oracles() {
    let start = Instant::now();
    let mut checked = 0usize;
    for (expr, alphabet) in random_exprs(200, 7) {
        let dfa = compile_order(&expr, &[]);
        let sigma = common::labels(alphabet);
        for word in common::all_words(&sigma, 6) {
            let got = dfa.accepts(&word);
            assert_eq!(got == Verdict::Accepted, common::in_language(&expr, &word), "{expr:?} on {word:?}");
            assert_eq!(got, common::expected_verdict(&expr, &word), "{expr:?} on {word:?}");
            checked += 1;
        }
    }
    assert!(checked > 200_000);
    assert!(start.elapsed().as_secs() < 30);
}

#[test]
fn nfa_and_dfa_agree() {
    for (expr, alphabet) in random_exprs(100, 11) {
        let nfa = Nfa::from_order(&expr, &[]);
        let dfa = nfa.determinize();
        for word in common::all_words(&common::labels(alphabet), 5) {
            let w: Vec<&str> = word.iter().map(String::as_str).collect();
            assert_eq!(nfa.accepts(&w), dfa.accepts(&w) == Verdict::Accepted, "{expr:?} on {word:?}");
        }
    }
}

#[test]
fn every_state_is_reachable_and_numbered_breadth_first() {
    for (expr, _) in random_exprs(100, 3) {
        let dfa = compile_order(&expr, &[]);
        let mut order = vec![0];
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            for (from, _, to) in dfa.transitions() {
                if from == s && !order.contains(&to) {
                    order.push(to);
                }
            }
            i += 1;
        }
        assert_eq!(order, (0..dfa.num_states()).collect::<Vec<_>>(), "{expr:?}");
    }
}

#[test]
fn labels_outside_the_alphabet_reject() {
    let dfa = compile_order(&parse_order("a, b*").unwrap(), &[]);
    assert_eq!(dfa.accepts(&["a", "z"]), Verdict::RejectedAt(1));
}

/// Checks the emitted DOT against the subset of the grammar it uses.
fn check_dot(text: &str) -> Result<(), String> {
    let id = r"[A-Za-z_][A-Za-z0-9_]*";
    let attr = r#"[A-Za-z]+=(?:[A-Za-z0-9_]+|"(?:[^"\\]|\\.)*")"#;
    let attrs = format!(r"\[{attr}(?:, {attr})*\]");
    let node = regex::Regex::new(&format!(r"^\s*{id}(?: {attrs})?;$")).unwrap();
    let edge = regex::Regex::new(&format!(r"^\s*{id} -> {id}(?: {attrs})?;$")).unwrap();
    let stmt = regex::Regex::new(&format!(r"^\s*(?:rankdir=LR|node {attrs});$")).unwrap();
    let mut lines = text.lines();
    if lines.next() != Some("digraph typestate {") {
        return Err("header".into());
    }
    let mut closed = false;
    for line in lines {
        if closed {
            return Err(format!("text after closing brace: {line}"));
        }
        if line == "}" {
            closed = true;
        } else if !(node.is_match(line) || edge.is_match(line) || stmt.is_match(line)) {
            return Err(format!("bad statement: {line}"));
        }
    }
    if closed {
        Ok(())
    } else {
        Err("unclosed graph".into())
    }
}

#[test]
fn dot_output_is_well_formed_and_stable() {
    let order = parse_order("Gets, u1+, d1").unwrap();
    let aggs = vec![metacrysl::model::AggregateDecl {
        name: "Gets".into(),
        alternatives: vec!["g1".into(), "g2".into()],
        span: Default::default(),
    }];
    let a = compile_order(&order, &aggs);
    let dot = to_dot(&a);
    check_dot(&dot).unwrap();
    assert_eq!(dot, to_dot(&compile_order(&order, &aggs)));
    assert_eq!(dot.matches("doublecircle").count(), a.accepting_states().count());
    for (expr, _) in random_exprs(50, 5) {
        check_dot(&to_dot(&compile_order(&expr, &[]))).unwrap();
    }
}

#[test]
fn single_atom_graph_has_two_nodes() {
    let dot = to_dot(&compile_order(&parse_order("c").unwrap(), &[]));
    assert_eq!(dot.lines().filter(|l| l.trim_start().starts_with('s') && l.contains("label=") && !l.contains("->")).count(), 2);
}
