//! ASTs shared by the four surface languages.
//!
//! Concrete and abstract rules share one representation: [`CrySLSpec`] may
//! carry variation points (meta-variables in literal-set positions and
//! type-parameter placeholders in types and method names). A spec is
//! *concrete* when it carries none; [`AbstractSpec`] wraps a spec together
//! with its declared type parameters.
//!
//! Every node that can be cited by a diagnostic carries a [`Span`]. Spans
//! never participate in equality or hashing, so two ASTs parsed from
//! differently formatted text compare equal when their structure does.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

/// A 1-based source position. `Span::default()` marks synthesized nodes.
#[derive(Debug, Clone, Copy, Default)]
pub struct Span {
    pub line: u32,
    pub column: u32,
}

impl Span {
    pub fn new(line: u32, column: u32) -> Self {
        Span { line, column }
    }

    pub fn is_synthetic(&self) -> bool {
        self.line == 0
    }
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

impl Eq for Span {}

impl Hash for Span {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

/// A string or integer literal.
///
/// Integers order before strings; integers compare numerically and strings
/// by byte order. The emitter relies on this order for canonical sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Literal {
    Int(i64),
    Str(String),
}

impl Literal {
    pub fn str(s: impl Into<String>) -> Self {
        Literal::Str(s.into())
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Int(i) => write!(f, "{i}"),
            Literal::Str(s) => {
                f.write_str("\"")?;
                for ch in s.chars() {
                    match ch {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        '\n' => f.write_str("\\n")?,
                        '\t' => f.write_str("\\t")?,
                        c => write!(f, "{c}")?,
                    }
                }
                f.write_str("\"")
            }
        }
    }
}

/// The right-hand side of a membership constraint.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LiteralSet {
    /// Set semantics: element order in the source is irrelevant.
    Literals(BTreeSet<Literal>),
    /// `$Name`, bound by a refinement.
    MetaVar(String),
}

impl LiteralSet {
    pub fn of<I, L>(items: I) -> Self
    where
        I: IntoIterator<Item = L>,
        L: Into<Literal>,
    {
        LiteralSet::Literals(items.into_iter().map(Into::into).collect())
    }

    pub fn literals(&self) -> Option<&BTreeSet<Literal>> {
        match self {
            LiteralSet::Literals(set) => Some(set),
            LiteralSet::MetaVar(_) => None,
        }
    }
}

impl From<&str> for Literal {
    fn from(s: &str) -> Self {
        Literal::Str(s.to_string())
    }
}

impl From<i64> for Literal {
    fn from(i: i64) -> Self {
        Literal::Int(i)
    }
}

/// A (possibly array) type name, or a `<T>` placeholder.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TypeRef {
    Named(String),
    Param(String),
}

impl fmt::Display for TypeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeRef::Named(n) => f.write_str(n),
            TypeRef::Param(p) => write!(f, "<{p}>"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ObjectDecl {
    pub type_name: TypeRef,
    pub var_name: String,
    pub span: Span,
}

/// Method name of an event. `Param` is a constructor of the bound type.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MethodName {
    Named(String),
    Param(String),
}

impl fmt::Display for MethodName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MethodName::Named(n) => f.write_str(n),
            MethodName::Param(p) => write!(f, "<{p}>"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ParamRef {
    Var(String),
    Literal(Literal),
    Wildcard,
}

impl fmt::Display for ParamRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamRef::Var(v) => f.write_str(v),
            ParamRef::Literal(l) => write!(f, "{l}"),
            ParamRef::Wildcard => f.write_str("_"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EventDecl {
    pub label: String,
    pub return_binding: Option<String>,
    pub method_name: MethodName,
    pub params: Vec<ParamRef>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AggregateDecl {
    pub name: String,
    pub alternatives: Vec<String>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OrderExpr {
    Atom(String, Span),
    Seq(Vec<OrderExpr>),
    Alt(Vec<OrderExpr>),
    Opt(Box<OrderExpr>),
    Star(Box<OrderExpr>),
    Plus(Box<OrderExpr>),
}

impl OrderExpr {
    pub fn atom(label: impl Into<String>) -> Self {
        OrderExpr::Atom(label.into(), Span::default())
    }

    /// Visits every atom left to right.
    pub fn for_each_atom<'a>(&'a self, f: &mut impl FnMut(&'a str, Span)) {
        match self {
            OrderExpr::Atom(label, span) => f(label, *span),
            OrderExpr::Seq(children) | OrderExpr::Alt(children) => {
                for child in children {
                    child.for_each_atom(f);
                }
            }
            OrderExpr::Opt(child) | OrderExpr::Star(child) | OrderExpr::Plus(child) => {
                child.for_each_atom(f)
            }
        }
    }

    pub fn atoms(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.for_each_atom(&mut |label, _| out.push(label));
        out
    }

    pub fn depth(&self) -> usize {
        match self {
            OrderExpr::Atom(..) => 1,
            OrderExpr::Seq(c) | OrderExpr::Alt(c) => 1 + c.iter().map(Self::depth).max().unwrap_or(0),
            OrderExpr::Opt(c) | OrderExpr::Star(c) | OrderExpr::Plus(c) => 1 + c.depth(),
        }
    }

    /// First Seq/Alt node with fewer than two children, if any.
    pub fn find_malformed(&self) -> Option<&OrderExpr> {
        match self {
            OrderExpr::Atom(..) => None,
            OrderExpr::Seq(c) | OrderExpr::Alt(c) => {
                if c.len() < 2 {
                    Some(self)
                } else {
                    c.iter().find_map(Self::find_malformed)
                }
            }
            OrderExpr::Opt(c) | OrderExpr::Star(c) | OrderExpr::Plus(c) => c.find_malformed(),
        }
    }

    /// Span of the leftmost atom; synthetic when none is located.
    pub fn span(&self) -> Span {
        let mut first = None;
        self.for_each_atom(&mut |_, span| {
            if first.is_none() {
                first = Some(span);
            }
        });
        first.unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConstraintExpr {
    Membership {
        var: String,
        set: LiteralSet,
        span: Span,
    },
    Implication {
        lhs: Box<ConstraintExpr>,
        rhs: Box<ConstraintExpr>,
    },
}

impl ConstraintExpr {
    pub fn membership(var: impl Into<String>, set: LiteralSet) -> Self {
        ConstraintExpr::Membership { var: var.into(), set, span: Span::default() }
    }

    pub fn implies(lhs: ConstraintExpr, rhs: ConstraintExpr) -> Self {
        ConstraintExpr::Implication { lhs: Box::new(lhs), rhs: Box::new(rhs) }
    }

    pub fn span(&self) -> Span {
        match self {
            ConstraintExpr::Membership { span, .. } => *span,
            ConstraintExpr::Implication { lhs, .. } => lhs.span(),
        }
    }

    /// Variables in left-to-right order, duplicates kept.
    pub fn variables(&self) -> Vec<&str> {
        match self {
            ConstraintExpr::Membership { var, .. } => vec![var.as_str()],
            ConstraintExpr::Implication { lhs, rhs } => {
                let mut v = lhs.variables();
                v.extend(rhs.variables());
                v
            }
        }
    }

    pub fn literal_sets(&self) -> Vec<&LiteralSet> {
        match self {
            ConstraintExpr::Membership { set, .. } => vec![set],
            ConstraintExpr::Implication { lhs, rhs } => {
                let mut v = lhs.literal_sets();
                v.extend(rhs.literal_sets());
                v
            }
        }
    }

    pub fn literal_sets_mut(&mut self) -> Vec<&mut LiteralSet> {
        match self {
            ConstraintExpr::Membership { set, .. } => vec![set],
            ConstraintExpr::Implication { lhs, rhs } => {
                let mut v = lhs.literal_sets_mut();
                v.extend(rhs.literal_sets_mut());
                v
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PredicateKind {
    Requires,
    Ensures,
}

impl fmt::Display for PredicateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PredicateKind::Requires => "requires",
            PredicateKind::Ensures => "ensures",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PredicateRef {
    pub name: String,
    pub args: Vec<String>,
    pub span: Span,
}

impl PredicateRef {
    pub fn new(name: impl Into<String>, args: &[&str]) -> Self {
        PredicateRef {
            name: name.into(),
            args: args.iter().map(|a| a.to_string()).collect(),
            span: Span::default(),
        }
    }
}

/// Path of the file a spec was parsed from. Ignored by equality.
#[derive(Debug, Clone, Default)]
pub struct Origin(pub String);

impl PartialEq for Origin {
    fn eq(&self, _: &Origin) -> bool {
        true
    }
}

impl Eq for Origin {}

impl Hash for Origin {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

/// The variable name every rule may use for the object under specification.
pub const THIS: &str = "this";

/// One usage rule.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CrySLSpec {
    pub class_name: String,
    pub objects: Vec<ObjectDecl>,
    pub events: Vec<EventDecl>,
    pub aggregates: Vec<AggregateDecl>,
    pub order: OrderExpr,
    pub constraints: Vec<ConstraintExpr>,
    pub requires: Vec<PredicateRef>,
    pub ensures: Vec<PredicateRef>,
    pub span: Span,
    pub origin: Origin,
}

impl CrySLSpec {
    /// Last dot-separated segment of the class name.
    pub fn simple_name(&self) -> &str {
        simple_name(&self.class_name)
    }

    pub fn event(&self, label: &str) -> Option<&EventDecl> {
        self.events.iter().find(|e| e.label == label)
    }

    pub fn aggregate(&self, name: &str) -> Option<&AggregateDecl> {
        self.aggregates.iter().find(|a| a.name == name)
    }

    pub fn predicates(&self, kind: PredicateKind) -> &[PredicateRef] {
        match kind {
            PredicateKind::Requires => &self.requires,
            PredicateKind::Ensures => &self.ensures,
        }
    }

    pub fn predicates_mut(&mut self, kind: PredicateKind) -> &mut Vec<PredicateRef> {
        match kind {
            PredicateKind::Requires => &mut self.requires,
            PredicateKind::Ensures => &mut self.ensures,
        }
    }

    /// Meta-variables in first-occurrence order.
    pub fn meta_vars(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for c in &self.constraints {
            for set in c.literal_sets() {
                if let LiteralSet::MetaVar(name) = set {
                    if !out.contains(&name.as_str()) {
                        out.push(name);
                    }
                }
            }
        }
        out
    }

    /// Type-parameter placeholders in first-occurrence order.
    pub fn type_param_uses(&self) -> Vec<(&str, Span)> {
        fn push<'a>(name: &'a str, span: Span, out: &mut Vec<(&'a str, Span)>) {
            if !out.iter().any(|(n, _)| *n == name) {
                out.push((name, span));
            }
        }
        let mut out: Vec<(&str, Span)> = Vec::new();
        for o in &self.objects {
            if let TypeRef::Param(p) = &o.type_name {
                push(p, o.span, &mut out);
            }
        }
        for e in &self.events {
            if let MethodName::Param(p) = &e.method_name {
                push(p, e.span, &mut out);
            }
        }
        out
    }

    /// True when no meta-variable or type placeholder remains.
    pub fn is_concrete(&self) -> bool {
        self.meta_vars().is_empty() && self.type_param_uses().is_empty()
    }

    /// All variables a rule may reference: declared objects plus `this`.
    pub fn is_declared_var(&self, name: &str) -> bool {
        name == THIS || self.objects.iter().any(|o| o.var_name == name)
    }
}

pub fn simple_name(qualified: &str) -> &str {
    qualified.rsplit('.').next().unwrap_or(qualified)
}

/// A rule with variation points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbstractSpec {
    /// Registry identity: the declared template name for parameterized
    /// specs, otherwise the simple class name.
    pub name: String,
    pub is_abstract: bool,
    pub type_params: Vec<String>,
    pub spec: CrySLSpec,
}

impl AbstractSpec {
    /// Wraps a concrete spec; the result has no variation points.
    pub fn from_concrete(spec: CrySLSpec) -> Self {
        AbstractSpec {
            name: spec.simple_name().to_string(),
            is_abstract: false,
            type_params: Vec::new(),
            spec,
        }
    }

    pub fn has_variation_points(&self) -> bool {
        !self.type_params.is_empty() || !self.spec.is_concrete()
    }

    /// Drops the (absent) variation points; `None` if any remain.
    pub fn into_concrete(self) -> Option<CrySLSpec> {
        if self.is_abstract || self.has_variation_points() {
            None
        } else {
            Some(self.spec)
        }
    }
}

/// Reference to the spec a refinement targets. Type arguments live in the
/// refinement's [`RefinementOp::DefineQualifiedType`] ops.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaseRef {
    pub name: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RefinementOp {
    DefineLiteralSet { metavar: String, set: LiteralSet, span: Span },
    /// Binds the base's type parameter at `position`.
    DefineQualifiedType { position: usize, fqn: String, span: Span },
    AddEvent { event: EventDecl, aggregate: Option<String> },
    RemoveEvent { label: String, span: Span },
    AddConstraint(ConstraintExpr),
    RemoveConstraint(ConstraintExpr),
    ReplaceOrder(OrderExpr),
    AddEnsures(PredicateRef),
    AddRequires(PredicateRef),
    RemovePredicate { kind: PredicateKind, name: String, span: Span },
}

impl RefinementOp {
    pub fn span(&self) -> Span {
        match self {
            RefinementOp::DefineLiteralSet { span, .. }
            | RefinementOp::DefineQualifiedType { span, .. }
            | RefinementOp::RemoveEvent { span, .. }
            | RefinementOp::RemovePredicate { span, .. } => *span,
            RefinementOp::AddEvent { event, .. } => event.span,
            RefinementOp::AddConstraint(c) | RefinementOp::RemoveConstraint(c) => c.span(),
            RefinementOp::ReplaceOrder(o) => o.span(),
            RefinementOp::AddEnsures(p) | RefinementOp::AddRequires(p) => p.span,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RefinementSpec {
    pub name: String,
    pub base: BaseRef,
    pub ops: Vec<RefinementOp>,
    pub span: Span,
    pub origin: Origin,
}

impl RefinementSpec {
    /// Concrete type arguments in position order.
    pub fn type_arguments(&self) -> Vec<&str> {
        let mut args: Vec<(usize, &str)> = self
            .ops
            .iter()
            .filter_map(|op| match op {
                RefinementOp::DefineQualifiedType { position, fqn, .. } => Some((*position, fqn.as_str())),
                _ => None,
            })
            .collect();
        args.sort_by_key(|(p, _)| *p);
        args.into_iter().map(|(_, f)| f).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LoadKind {
    Spec,
    Refinement,
}

impl fmt::Display for LoadKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LoadKind::Spec => "spec",
            LoadKind::Refinement => "refinement",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LoadDirective {
    pub kind: LoadKind,
    pub path: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BuildConfig {
    pub name: String,
    pub src: String,
    pub out: String,
    pub loads: Vec<LoadDirective>,
    pub span: Span,
    pub origin: Origin,
}

impl BuildConfig {
    pub fn spec_loads(&self) -> impl Iterator<Item = &LoadDirective> {
        self.loads.iter().filter(|l| l.kind == LoadKind::Spec)
    }

    pub fn refinement_loads(&self) -> impl Iterator<Item = &LoadDirective> {
        self.loads.iter().filter(|l| l.kind == LoadKind::Refinement)
    }
}
