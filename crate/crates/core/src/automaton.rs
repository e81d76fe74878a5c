//! ORDER expressions compiled to typestate automata.
//!
//! Aggregates are inlined as alternations, the expression goes through a
//! Thompson construction, and subset construction yields a DFA whose states
//! are numbered breadth-first from the initial state. Only reachable subsets
//! are materialized; the empty subset is the implicit error sink.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::model::{AggregateDecl, OrderExpr};

pub type StateId = usize;

/// Result of running a word through an automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    /// The label at this index had no transition.
    RejectedAt(usize),
    /// Every label consumed, final state not accepting.
    Incomplete,
}

#[derive(Debug, Clone, Default)]
struct NfaState {
    eps: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

/// Thompson NFA over interned labels.
#[derive(Debug, Clone)]
pub struct Nfa {
    alphabet: Vec<String>,
    states: Vec<NfaState>,
    start: usize,
    accept: usize,
}

/// Inlines aggregates, recursively, into plain atom alternations.
pub fn expand_aggregates(order: &OrderExpr, aggregates: &[AggregateDecl]) -> OrderExpr {
    fn go(o: &OrderExpr, aggs: &HashMap<&str, &AggregateDecl>, active: &mut Vec<String>) -> OrderExpr {
        match o {
            OrderExpr::Atom(label, span) => match aggs.get(label.as_str()) {
                Some(agg) if !active.contains(label) => {
                    active.push(label.clone());
                    let alts: Vec<OrderExpr> =
                        agg.alternatives.iter().map(|a| go(&OrderExpr::Atom(a.clone(), *span), aggs, active)).collect();
                    active.pop();
                    if alts.len() == 1 {
                        alts.into_iter().next().unwrap()
                    } else {
                        OrderExpr::Alt(alts)
                    }
                }
                _ => o.clone(),
            },
            OrderExpr::Seq(c) => OrderExpr::Seq(c.iter().map(|x| go(x, aggs, active)).collect()),
            OrderExpr::Alt(c) => OrderExpr::Alt(c.iter().map(|x| go(x, aggs, active)).collect()),
            OrderExpr::Opt(c) => OrderExpr::Opt(Box::new(go(c, aggs, active))),
            OrderExpr::Star(c) => OrderExpr::Star(Box::new(go(c, aggs, active))),
            OrderExpr::Plus(c) => OrderExpr::Plus(Box::new(go(c, aggs, active))),
        }
    }
    let map: HashMap<&str, &AggregateDecl> = aggregates.iter().map(|a| (a.name.as_str(), a)).collect();
    go(order, &map, &mut Vec::new())
}

impl Nfa {
    pub fn from_order(order: &OrderExpr, aggregates: &[AggregateDecl]) -> Nfa {
        let expanded = expand_aggregates(order, aggregates);
        let alphabet: BTreeSet<String> = expanded.atoms().into_iter().map(str::to_string).collect();
        let mut nfa = Nfa { alphabet: alphabet.into_iter().collect(), states: Vec::new(), start: 0, accept: 0 };
        let (start, accept) = nfa.fragment(&expanded);
        nfa.start = start;
        nfa.accept = accept;
        nfa
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    fn new_state(&mut self) -> usize {
        self.states.push(NfaState::default());
        self.states.len() - 1
    }

    fn eps(&mut self, from: usize, to: usize) {
        self.states[from].eps.push(to);
    }

    fn fragment(&mut self, o: &OrderExpr) -> (usize, usize) {
        match o {
            OrderExpr::Atom(label, _) => {
                let (s, f) = (self.new_state(), self.new_state());
                let sym = self.alphabet.binary_search(label).expect("alphabet built from atoms");
                self.states[s].edges.push((sym, f));
                (s, f)
            }
            OrderExpr::Seq(items) => {
                let frags: Vec<_> = items.iter().map(|c| self.fragment(c)).collect();
                if frags.is_empty() {
                    let s = self.new_state();
                    return (s, s);
                }
                for w in frags.windows(2) {
                    self.eps(w[0].1, w[1].0);
                }
                (frags[0].0, frags[frags.len() - 1].1)
            }
            OrderExpr::Alt(items) => {
                let (s, f) = (self.new_state(), self.new_state());
                for c in items {
                    let (cs, cf) = self.fragment(c);
                    self.eps(s, cs);
                    self.eps(cf, f);
                }
                (s, f)
            }
            OrderExpr::Opt(c) => {
                let (s, f) = (self.new_state(), self.new_state());
                let (cs, cf) = self.fragment(c);
                self.eps(s, cs);
                self.eps(s, f);
                self.eps(cf, f);
                (s, f)
            }
            OrderExpr::Star(c) => {
                let (s, f) = (self.new_state(), self.new_state());
                let (cs, cf) = self.fragment(c);
                self.eps(s, cs);
                self.eps(s, f);
                self.eps(cf, cs);
                self.eps(cf, f);
                (s, f)
            }
            OrderExpr::Plus(c) => {
                let (s, f) = (self.new_state(), self.new_state());
                let (cs, cf) = self.fragment(c);
                self.eps(s, cs);
                self.eps(cf, cs);
                self.eps(cf, f);
                (s, f)
            }
        }
    }

    fn closure(&self, seed: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
        let mut set = BTreeSet::new();
        let mut stack: Vec<usize> = seed.into_iter().collect();
        while let Some(s) = stack.pop() {
            if set.insert(s) {
                stack.extend(self.states[s].eps.iter().copied());
            }
        }
        set
    }

    fn step(&self, set: &BTreeSet<usize>, sym: usize) -> BTreeSet<usize> {
        let targets = set
            .iter()
            .flat_map(|&s| self.states[s].edges.iter().filter(move |(l, _)| *l == sym).map(|(_, t)| *t));
        self.closure(targets)
    }

    /// Direct NFA simulation.
    pub fn accepts(&self, word: &[&str]) -> bool {
        let mut current = self.closure([self.start]);
        for label in word {
            let Ok(sym) = self.alphabet.binary_search_by(|l| l.as_str().cmp(label)) else {
                return false;
            };
            current = self.step(&current, sym);
            if current.is_empty() {
                return false;
            }
        }
        current.contains(&self.accept)
    }

    pub fn determinize(&self) -> TypestateAutomaton {
        let initial = self.closure([self.start]);
        let mut index: BTreeMap<BTreeSet<usize>, StateId> = BTreeMap::new();
        let mut subsets = vec![initial.clone()];
        index.insert(initial, 0);
        let mut transitions: Vec<BTreeMap<usize, StateId>> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(id) = queue.pop_front() {
            let mut row = BTreeMap::new();
            for sym in 0..self.alphabet.len() {
                let next = self.step(&subsets[id], sym);
                if next.is_empty() {
                    continue;
                }
                let target = match index.get(&next) {
                    Some(&t) => t,
                    None => {
                        let t = subsets.len();
                        subsets.push(next.clone());
                        index.insert(next, t);
                        queue.push_back(t);
                        t
                    }
                };
                row.insert(sym, target);
            }
            if transitions.len() <= id {
                transitions.resize(id + 1, BTreeMap::new());
            }
            transitions[id] = row;
        }
        transitions.resize(subsets.len(), BTreeMap::new());
        let accepting = subsets.iter().map(|s| s.contains(&self.accept)).collect();
        TypestateAutomaton { alphabet: self.alphabet.clone(), transitions, accepting }
    }
}

/// A DFA over event labels; state 0 is initial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypestateAutomaton {
    alphabet: Vec<String>,
    transitions: Vec<BTreeMap<usize, StateId>>,
    accepting: Vec<bool>,
}

/// Compiles an ORDER expression, inlining the given aggregates.
pub fn compile_order(order: &OrderExpr, aggregates: &[AggregateDecl]) -> TypestateAutomaton {
    Nfa::from_order(order, aggregates).determinize()
}

impl TypestateAutomaton {
    pub const INITIAL: StateId = 0;

    /// Sorted event labels.
    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_accepting(&self, state: StateId) -> bool {
        self.accepting[state]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.num_states()).filter(|&s| self.accepting[s])
    }

    /// `None` is the error sink; labels outside the alphabet lead there.
    pub fn step(&self, state: StateId, label: &str) -> Option<StateId> {
        let sym = self.alphabet.binary_search_by(|l| l.as_str().cmp(label)).ok()?;
        self.transitions[state].get(&sym).copied()
    }

    /// `(from, label, to)` in state then label order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, &str, StateId)> + '_ {
        self.transitions
            .iter()
            .enumerate()
            .flat_map(move |(from, row)| row.iter().map(move |(&sym, &to)| (from, self.alphabet[sym].as_str(), to)))
    }

    pub fn accepts<S: AsRef<str>>(&self, word: &[S]) -> Verdict {
        let mut state = Self::INITIAL;
        for (i, label) in word.iter().enumerate() {
            match self.step(state, label.as_ref()) {
                Some(next) => state = next,
                None => return Verdict::RejectedAt(i),
            }
        }
        if self.is_accepting(state) {
            Verdict::Accepted
        } else {
            Verdict::Incomplete
        }
    }
}

/// Graphviz rendering. Accepting states are double circles; the sink is
/// omitted.
pub fn to_dot(a: &TypestateAutomaton) -> String {
    let mut out = String::from("digraph typestate {\n    rankdir=LR;\n    node [shape=circle];\n    start [shape=point];\n");
    for s in 0..a.num_states() {
        if a.is_accepting(s) {
            let _ = writeln!(out, "    s{s} [label=\"{s}\", shape=doublecircle];");
        } else {
            let _ = writeln!(out, "    s{s} [label=\"{s}\"];");
        }
    }
    let _ = writeln!(out, "    start -> s{};", TypestateAutomaton::INITIAL);
    for (from, label, to) in a.transitions() {
        let _ = writeln!(out, "    s{from} -> s{to} [label=\"{}\"];", label.replace('\\', "\\\\").replace('"', "\\\""));
    }
    out.push_str("}\n");
    out
}
