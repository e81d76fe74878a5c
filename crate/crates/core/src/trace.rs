//! Checking recorded event traces against a concrete rule set.
//!
//! Input is JSON lines, one [`TraceEvent`] per line. Events are replayed in
//! `seq` order; each object id runs its rule's typestate automaton, binds
//! argument values to rule variables, and evaluates constraints as soon as
//! all their variables are bound.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{self, Write as _};
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::automaton::{compile_order, StateId, TypestateAutomaton};
use crate::diagnostic::Diagnostic;
use crate::emit::literal_set_text;
use crate::model::*;
use crate::source::SourceFile;
use crate::syntax::parse_crysl;
use crate::validate::validate_spec;

/// Spelling of an argument whose value the recorder could not determine.
pub const UNKNOWN: &str = "?";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArgValue {
    Str(String),
    Int(i64),
    /// Identity of another traced object.
    Ref(String),
    Unknown,
}

impl fmt::Display for ArgValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArgValue::Str(s) => write!(f, "{}", Literal::Str(s.clone())),
            ArgValue::Int(i) => write!(f, "{i}"),
            ArgValue::Ref(id) => write!(f, "@{id}"),
            ArgValue::Unknown => f.write_str(UNKNOWN),
        }
    }
}

impl ArgValue {
    fn literal(&self) -> Option<Literal> {
        match self {
            ArgValue::Str(s) => Some(Literal::Str(s.clone())),
            ArgValue::Int(i) => Some(Literal::Int(*i)),
            ArgValue::Ref(_) | ArgValue::Unknown => None,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RefArg {
    #[serde(rename = "ref")]
    id: String,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawArg {
    Int(i64),
    Str(String),
    Ref(RefArg),
}

impl Serialize for ArgValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ArgValue::Str(v) => RawArg::Str(v.clone()),
            ArgValue::Int(i) => RawArg::Int(*i),
            ArgValue::Ref(id) => RawArg::Ref(RefArg { id: id.clone() }),
            ArgValue::Unknown => RawArg::Str(UNKNOWN.into()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ArgValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(match RawArg::deserialize(d)? {
            RawArg::Int(i) => ArgValue::Int(i),
            RawArg::Str(s) if s == UNKNOWN => ArgValue::Unknown,
            RawArg::Str(s) => ArgValue::Str(s),
            RawArg::Ref(r) => ArgValue::Ref(r.id),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceEvent {
    pub seq: u64,
    pub object_id: String,
    pub class_name: String,
    pub method_name: String,
    #[serde(default)]
    pub args: Vec<ArgValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub return_id: Option<String>,
}

/// Parses JSON lines. Blank lines are skipped; malformed lines and
/// non-increasing `seq` values are reported and dropped.
pub fn parse_trace(path: &str, text: &str) -> (Vec<TraceEvent>, Vec<Diagnostic>) {
    let mut events: Vec<TraceEvent> = Vec::new();
    let mut diags = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let span = Span::new(i as u32 + 1, 1);
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<TraceEvent>(line) {
            Ok(ev) => match events.last() {
                Some(prev) if ev.seq <= prev.seq => diags.push(Diagnostic::error(
                    path,
                    span,
                    format!("seq {} does not increase (previous event has seq {})", ev.seq, prev.seq),
                )),
                _ => events.push(ev),
            },
            Err(e) => diags.push(Diagnostic::error(path, span, format!("malformed trace event: {e}"))),
        }
    }
    (events, diags)
}

pub fn trace_to_jsonl(events: &[TraceEvent]) -> String {
    let mut out = String::new();
    for ev in events {
        out.push_str(&serde_json::to_string(ev).expect("trace events serialize"));
        out.push('\n');
    }
    out
}

/// A rule together with its compiled ORDER.
#[derive(Debug, Clone)]
pub struct CompiledRule {
    pub spec: CrySLSpec,
    pub automaton: TypestateAutomaton,
}

#[derive(Debug, Clone, Default)]
pub struct RuleSet {
    rules: Vec<CompiledRule>,
    by_class: HashMap<String, usize>,
}

impl RuleSet {
    /// Later rules for an already present class are ignored.
    pub fn new(specs: impl IntoIterator<Item = CrySLSpec>) -> Self {
        let mut set = RuleSet::default();
        for spec in specs {
            if set.by_class.contains_key(&spec.class_name) {
                continue;
            }
            let automaton = compile_order(&spec.order, &spec.aggregates);
            set.by_class.insert(spec.class_name.clone(), set.rules.len());
            set.rules.push(CompiledRule { spec, automaton });
        }
        set
    }

    /// Reads and validates every `.crysl` file directly inside `dir`.
    pub fn from_dir(dir: &Path) -> Result<Self, Vec<Diagnostic>> {
        let mut diags = Vec::new();
        let mut specs = Vec::new();
        let entries = std::fs::read_dir(dir).map_err(|e| {
            vec![Diagnostic::error(dir.display().to_string(), Span::default(), format!("cannot read rule directory: {e}"))]
        })?;
        let mut paths: Vec<_> = entries
            .filter_map(Result::ok)
            .map(|e| e.path())
            .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "crysl"))
            .collect();
        paths.sort();
        for p in paths {
            let file = match SourceFile::read(&p) {
                Ok(f) => f,
                Err(e) => {
                    diags.push(Diagnostic::error(p.display().to_string(), Span::default(), format!("cannot read: {e}")));
                    continue;
                }
            };
            match parse_crysl(&file) {
                Ok(spec) => {
                    let errs = validate_spec(&spec);
                    if errs.iter().any(Diagnostic::is_error) {
                        diags.extend(errs);
                    } else {
                        specs.push(spec);
                    }
                }
                Err(errs) => diags.extend(errs),
            }
        }
        if diags.iter().any(Diagnostic::is_error) {
            Err(diags)
        } else {
            Ok(RuleSet::new(specs))
        }
    }

    pub fn rules(&self) -> &[CompiledRule] {
        &self.rules
    }

    pub fn rule_for(&self, class_name: &str) -> Option<&CompiledRule> {
        self.by_class.get(class_name).map(|&i| &self.rules[i])
    }

    fn index_of(&self, class_name: &str) -> Option<usize> {
        self.by_class.get(class_name).copied()
    }
}

fn event_matches(spec: &CrySLSpec, decl: &EventDecl, ev: &TraceEvent) -> bool {
    let name_ok = match &decl.method_name {
        MethodName::Named(m) => {
            m == &ev.method_name || (ev.method_name == "<init>" && m == spec.simple_name())
        }
        MethodName::Param(_) => false,
    };
    name_ok
        && decl.params.len() == ev.args.len()
        && decl.params.iter().zip(&ev.args).all(|(p, a)| match p {
            ParamRef::Literal(lit) => a.literal().is_none_or(|v| &v == lit),
            ParamRef::Var(v) => arg_fits(spec.objects.iter().find(|o| &o.var_name == v).map(|o| &o.type_name), a),
            ParamRef::Wildcard => true,
        })
}

/// Integral types take integers, `String` takes strings, every other type
/// takes object references. Unknown values fit anything.
fn arg_fits(ty: Option<&TypeRef>, a: &ArgValue) -> bool {
    let Some(TypeRef::Named(t)) = ty else { return true };
    match (t.as_str(), a) {
        (_, ArgValue::Unknown) => true,
        ("int" | "long" | "short" | "byte" | "char", v) => matches!(v, ArgValue::Int(_)),
        ("java.lang.String" | "String", v) => matches!(v, ArgValue::Str(_)),
        ("boolean", _) => true,
        (_, v) => matches!(v, ArgValue::Ref(_)),
    }
}

/// The rule for the event's class and, if one matches by method name and
/// arity, the first such event label. A matched rule without a label means
/// an undeclared call.
pub fn match_event<'r>(rules: &'r RuleSet, ev: &TraceEvent) -> Option<(&'r CompiledRule, Option<&'r str>)> {
    let rule = rules.rule_for(&ev.class_name)?;
    let label = rule.spec.events.iter().find(|d| event_matches(&rule.spec, d, ev)).map(|d| d.label.as_str());
    Some((rule, label))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Order,
    Incomplete,
    Constraint,
    MissingPredicate,
}

impl ViolationKind {
    pub const ALL: [ViolationKind; 4] =
        [ViolationKind::Order, ViolationKind::Incomplete, ViolationKind::Constraint, ViolationKind::MissingPredicate];

    pub fn as_str(self) -> &'static str {
        match self {
            ViolationKind::Order => "order",
            ViolationKind::Incomplete => "incomplete",
            ViolationKind::Constraint => "constraint",
            ViolationKind::MissingPredicate => "missing-predicate",
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub object_id: String,
    /// Offending event; `None` for end of trace.
    pub seq: Option<u64>,
    pub class_name: String,
    pub message: String,
}

/// Something the checker could not decide.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceWarning {
    pub seq: u64,
    pub object_id: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum ValueKey {
    Ref(String),
    Lit(Literal),
}

impl ValueKey {
    fn of(v: &ArgValue) -> Option<ValueKey> {
        match v {
            ArgValue::Ref(id) => Some(ValueKey::Ref(id.clone())),
            ArgValue::Unknown => None,
            other => other.literal().map(ValueKey::Lit),
        }
    }
}

/// Predicates established so far: name plus the values of its arguments.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PredicateStore {
    facts: BTreeSet<(String, Vec<ValueKey>)>,
}

impl PredicateStore {
    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    /// True if `name` holds for an object with this id as its only argument.
    pub fn holds_for(&self, name: &str, object_id: &str) -> bool {
        self.facts.contains(&(name.to_string(), vec![ValueKey::Ref(object_id.to_string())]))
    }

    fn insert(&mut self, name: &str, keys: Vec<ValueKey>) {
        self.facts.insert((name.to_string(), keys));
    }

    fn contains(&self, name: &str, keys: &[ValueKey]) -> bool {
        self.facts.contains(&(name.to_string(), keys.to_vec()))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckResult {
    pub violations: Vec<Violation>,
    pub warnings: Vec<TraceWarning>,
    pub predicates: PredicateStore,
}

struct ObjectRun {
    rule: usize,
    /// `None` once an order violation sent the object to the sink.
    state: Option<StateId>,
    labels: Vec<String>,
    bindings: HashMap<String, ArgValue>,
    violated: bool,
    requires_checked: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Truth {
    True,
    False,
    Unknown,
}

fn eval(c: &ConstraintExpr, bindings: &HashMap<String, ArgValue>) -> Truth {
    match c {
        ConstraintExpr::Membership { var, set, .. } => {
            let (Some(value), Some(lits)) = (bindings.get(var).and_then(ArgValue::literal), set.literals()) else {
                return Truth::Unknown;
            };
            if lits.contains(&value) {
                Truth::True
            } else {
                Truth::False
            }
        }
        ConstraintExpr::Implication { lhs, rhs } => match eval(lhs, bindings) {
            Truth::False => Truth::True,
            Truth::True => eval(rhs, bindings),
            Truth::Unknown => Truth::Unknown,
        },
    }
}

fn describe_failure(c: &ConstraintExpr, bindings: &HashMap<String, ArgValue>) -> String {
    match c {
        ConstraintExpr::Membership { var, set, .. } => {
            format!("`{var}` is {}, not in {}", bindings[var], literal_set_text(set))
        }
        ConstraintExpr::Implication { lhs, rhs } => {
            format!("{} requires {}", crate::emit::constraint_text(lhs), describe_failure(rhs, bindings))
        }
    }
}

/// Replays the trace in the given order (which `parse_trace` guarantees to
/// be increasing `seq`).
pub fn check_trace(rules: &RuleSet, trace: &[TraceEvent]) -> CheckResult {
    let mut result = CheckResult::default();
    let mut objects: Vec<(String, ObjectRun)> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();

    for ev in trace {
        let Some((rule, label)) = match_event(rules, ev) else { continue };
        let rule_idx = rules.index_of(&ev.class_name).expect("matched rule is indexed");
        let slot = *index.entry(ev.object_id.clone()).or_insert_with(|| {
            let mut bindings = HashMap::new();
            bindings.insert(THIS.to_string(), ArgValue::Ref(ev.object_id.clone()));
            objects.push((
                ev.object_id.clone(),
                ObjectRun {
                    rule: rule_idx,
                    state: Some(TypestateAutomaton::INITIAL),
                    labels: Vec::new(),
                    bindings,
                    violated: false,
                    requires_checked: false,
                },
            ));
            objects.len() - 1
        });
        let run = &mut objects[slot].1;
        if run.rule != rule_idx {
            result.warnings.push(TraceWarning {
                seq: ev.seq,
                object_id: ev.object_id.clone(),
                message: format!("object was first seen as {}, ignoring call on {}", rules.rules[run.rule].spec.class_name, ev.class_name),
            });
            continue;
        }
        let spec = &rule.spec;
        let violation = |kind, message: String| Violation {
            kind,
            object_id: ev.object_id.clone(),
            seq: Some(ev.seq),
            class_name: spec.class_name.clone(),
            message,
        };

        if let Some(state) = run.state {
            let next = label.and_then(|l| rule.automaton.step(state, l));
            match next {
                Some(n) => run.state = Some(n),
                None => {
                    let what = match label {
                        Some(l) => format!("event `{l}` ({})", ev.method_name),
                        None => format!("undeclared call `{}`/{}", ev.method_name, ev.args.len()),
                    };
                    let after = if run.labels.is_empty() { "at start".to_string() } else { format!("after {}", run.labels.join(", ")) };
                    result.violations.push(violation(ViolationKind::Order, format!("{what} not allowed {after}")));
                    run.state = None;
                    run.violated = true;
                }
            }
        }
        let Some(label) = label else { continue };
        if run.state.is_some() {
            run.labels.push(label.to_string());
        }

        let decl = spec.event(label).expect("label comes from the rule");
        let mut bound_now: Vec<&str> = Vec::new();
        for (p, a) in decl.params.iter().zip(&ev.args) {
            if let ParamRef::Var(v) = p {
                run.bindings.insert(v.clone(), a.clone());
                bound_now.push(v);
            }
        }
        if let (Some(ret), Some(id)) = (&decl.return_binding, &ev.return_id) {
            run.bindings.insert(ret.clone(), ArgValue::Ref(id.clone()));
            bound_now.push(ret);
        }

        for c in &spec.constraints {
            let vars = c.variables();
            if !vars.iter().any(|v| bound_now.contains(v)) || !vars.iter().all(|v| run.bindings.contains_key(*v)) {
                continue;
            }
            match eval(c, &run.bindings) {
                Truth::True => {}
                Truth::False => {
                    result.violations.push(violation(ViolationKind::Constraint, describe_failure(c, &run.bindings)));
                    run.violated = true;
                }
                Truth::Unknown => result.warnings.push(TraceWarning {
                    seq: ev.seq,
                    object_id: ev.object_id.clone(),
                    message: format!("cannot decide `{}`: value not known", crate::emit::constraint_text(c)),
                }),
            }
        }

        let accepting = run.state.is_some_and(|s| rule.automaton.is_accepting(s));
        if !accepting || run.violated {
            continue;
        }
        if !run.requires_checked {
            run.requires_checked = true;
            for p in &spec.requires {
                match predicate_keys(p, &run.bindings) {
                    Some(keys) if !result.predicates.contains(&p.name, &keys) => {
                        let args: Vec<String> = p.args.iter().map(|a| run.bindings[a].to_string()).collect();
                        result.violations.push(violation(
                            ViolationKind::MissingPredicate,
                            format!("required predicate {}[{}] was never ensured", p.name, args.join(", ")),
                        ));
                        run.violated = true;
                    }
                    Some(_) => {}
                    None => result.warnings.push(TraceWarning {
                        seq: ev.seq,
                        object_id: ev.object_id.clone(),
                        message: format!("cannot check required predicate {}: argument not known", p.name),
                    }),
                }
            }
        }
        if run.violated {
            continue;
        }
        for p in &spec.ensures {
            if let Some(keys) = predicate_keys(p, &run.bindings) {
                result.predicates.insert(&p.name, keys);
            }
        }
    }

    for (id, run) in &objects {
        let rule = &rules.rules[run.rule];
        if let Some(state) = run.state {
            if !rule.automaton.is_accepting(state) {
                let after = if run.labels.is_empty() { "no events".to_string() } else { run.labels.join(", ") };
                result.violations.push(Violation {
                    kind: ViolationKind::Incomplete,
                    object_id: id.clone(),
                    seq: None,
                    class_name: rule.spec.class_name.clone(),
                    message: format!("usage ends after {after} without completing the protocol"),
                });
            }
        }
    }
    result
}

fn predicate_keys(p: &PredicateRef, bindings: &HashMap<String, ArgValue>) -> Option<Vec<ValueKey>> {
    p.args.iter().map(|a| bindings.get(a).and_then(ValueKey::of)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Table,
}

#[derive(Serialize)]
struct KindCounts {
    order: usize,
    incomplete: usize,
    constraint: usize,
    #[serde(rename = "missing-predicate")]
    missing_predicate: usize,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    total: usize,
    by_kind: KindCounts,
    by_rule: BTreeMap<&'a str, usize>,
    violations: &'a [Violation],
}

pub fn count_by_kind(violations: &[Violation], kind: ViolationKind) -> usize {
    violations.iter().filter(|v| v.kind == kind).count()
}

/// JSON (one object, trailing newline) or an aligned text table.
pub fn report(violations: &[Violation], format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut by_rule: BTreeMap<&str, usize> = BTreeMap::new();
            for v in violations {
                *by_rule.entry(v.class_name.as_str()).or_default() += 1;
            }
            let r = JsonReport {
                total: violations.len(),
                by_kind: KindCounts {
                    order: count_by_kind(violations, ViolationKind::Order),
                    incomplete: count_by_kind(violations, ViolationKind::Incomplete),
                    constraint: count_by_kind(violations, ViolationKind::Constraint),
                    missing_predicate: count_by_kind(violations, ViolationKind::MissingPredicate),
                },
                by_rule,
                violations,
            };
            let mut out = serde_json::to_string(&r).expect("report serializes");
            out.push('\n');
            out
        }
        ReportFormat::Table => table(violations),
    }
}

fn table(violations: &[Violation]) -> String {
    let header = ["KIND", "RULE", "OBJECT", "SEQ", "MESSAGE"];
    let rows: Vec<[String; 5]> = violations
        .iter()
        .map(|v| {
            [
                v.kind.to_string(),
                v.class_name.clone(),
                v.object_id.clone(),
                v.seq.map_or_else(|| "end".to_string(), |s| s.to_string()),
                v.message.clone(),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: [&str; 5]| {
        let mut l = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i + 1 == cells.len() {
                l.push_str(cell);
            } else {
                let _ = write!(l, "{cell:<w$}  ", w = widths[i]);
            }
        }
        out.push_str(l.trim_end());
        out.push('\n');
    };
    line(header);
    for row in &rows {
        line([&row[0], &row[1], &row[2], &row[3], &row[4]]);
    }
    let kinds: Vec<String> = ViolationKind::ALL.iter().map(|k| format!("{k} {}", count_by_kind(violations, *k))).collect();
    let _ = writeln!(out, "total: {} ({})", violations.len(), kinds.join(", "));
    out
}
