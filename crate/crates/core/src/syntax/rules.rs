//! Concrete (`.crysl`) and abstract (`.mcsl`) rule syntax.

use std::collections::BTreeSet;

use super::lexer::{Mode, Tok};
use super::{check_language, PResult, ParseResult, Parser};
use crate::diagnostic::Diagnostic;
use crate::model::*;
use crate::source::{Language, SourceFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Dialect {
    Concrete,
    Abstract,
}

const SECTIONS: [&str; 6] = ["OBJECTS", "EVENTS", "ORDER", "CONSTRAINTS", "REQUIRES", "ENSURES"];
const REQUIRED: [&str; 3] = ["OBJECTS", "EVENTS", "ORDER"];

/// Reserved: an all-capitals word of two or more letters.
fn is_section_word(tok: &Tok) -> bool {
    matches!(tok, Tok::Ident(s) if s.len() >= 2 && s.chars().all(|c| c.is_ascii_uppercase()))
}

fn ends_item(tok: &Tok) -> bool {
    is_section_word(tok) || matches!(tok, Tok::Eof)
}

/// Parses a concrete CrySL rule.
pub fn parse_crysl(file: &SourceFile) -> ParseResult<CrySLSpec> {
    check_language(file, &[Language::CrySL])?;
    let spec = parse_spec_text(&file.path, &file.text, Dialect::Concrete)?;
    Ok(spec.spec)
}

/// Parses an abstract rule. Accepts every concrete rule as well.
pub fn parse_abstract(file: &SourceFile) -> ParseResult<AbstractSpec> {
    check_language(file, &[Language::AbstractCrySL, Language::CrySL])?;
    parse_spec_text(&file.path, &file.text, Dialect::Abstract)
}

/// Parses a standalone ORDER expression (abstract dialect).
pub fn parse_order(text: &str) -> ParseResult<OrderExpr> {
    let mut p = Parser::new("<order>", text, Mode::Rules).map_err(|d| vec![d])?;
    let order = p.order_expr().map_err(|d| vec![d])?;
    if !p.at_eof() {
        return Err(vec![p.unexpected("end of ORDER expression")]);
    }
    p.finish(order)
}

/// Parses a standalone constraint (meta-variables allowed).
pub fn parse_constraint(text: &str) -> ParseResult<ConstraintExpr> {
    let mut p = Parser::new("<constraint>", text, Mode::Rules).map_err(|d| vec![d])?;
    let c = p.constraint(Dialect::Abstract).map_err(|d| vec![d])?;
    p.eat(&Tok::Semi);
    if !p.at_eof() {
        return Err(vec![p.unexpected("end of constraint")]);
    }
    p.finish(c)
}

pub(crate) fn parse_spec_text(path: &str, text: &str, dialect: Dialect) -> ParseResult<AbstractSpec> {
    let mut p = Parser::new(path, text, Mode::Rules).map_err(|d| vec![d])?;
    let spec = p.spec(dialect);
    match spec {
        Some(spec) => {
            let spec = AbstractSpec { spec: CrySLSpec { origin: Origin(path.to_string()), ..spec.spec }, ..spec };
            p.finish(spec)
        }
        None => Err(p.diags),
    }
}

impl Parser<'_> {
    fn spec(&mut self, dialect: Dialect) -> Option<AbstractSpec> {
        let abstract_kw = self.at_keyword("ABSTRACT");
        if abstract_kw {
            if dialect == Dialect::Concrete {
                let d = self.error_here("`ABSTRACT` is only allowed in abstract rules (.mcsl)");
                self.push(d);
            }
            self.bump();
        }
        if !self.at_keyword("SPEC") {
            let d = self.error_here("missing SPEC header");
            self.push(d);
            return None;
        }
        let header_span = self.bump().span;
        let (class_name, _) = match self.qualified_name("a class name after SPEC") {
            Ok(n) => n,
            Err(d) => {
                self.push(d);
                return None;
            }
        };
        let mut type_params = Vec::new();
        if *self.peek() == Tok::Lt {
            if dialect == Dialect::Concrete {
                let d = self.error_here("type parameters are only allowed in abstract rules (.mcsl)");
                self.push(d);
            }
            self.bump();
            loop {
                match self.ident("a type parameter name") {
                    Ok((name, span)) => {
                        if type_params.contains(&name) {
                            self.push(Diagnostic::error(self.path, span, format!("duplicate type parameter <{name}>")));
                        } else {
                            type_params.push(name);
                        }
                    }
                    Err(d) => {
                        self.push(d);
                        return None;
                    }
                }
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            if let Err(d) = self.expect(Tok::Gt, "`>` closing the type parameter list") {
                self.push(d);
                return None;
            }
        }

        let mut spec = CrySLSpec {
            class_name,
            objects: Vec::new(),
            events: Vec::new(),
            aggregates: Vec::new(),
            order: OrderExpr::Seq(Vec::new()),
            constraints: Vec::new(),
            requires: Vec::new(),
            ensures: Vec::new(),
            span: header_span,
            origin: Origin::default(),
        };
        let mut seen: Vec<usize> = Vec::new();
        let mut have_order = false;
        let ctx = SpecContext { dialect, type_params: Some(&type_params) };

        while !self.at_eof() {
            let span = self.span();
            let word = match self.peek() {
                Tok::Ident(w) if is_section_word(self.peek()) => w.clone(),
                _ => {
                    let d = self.unexpected("a section keyword");
                    self.push(d);
                    self.bump();
                    self.skip_to_section();
                    continue;
                }
            };
            self.bump();
            let Some(index) = SECTIONS.iter().position(|s| *s == word) else {
                self.push(Diagnostic::error(self.path, span, format!("unknown section keyword {word}")));
                self.skip_to_section();
                continue;
            };
            if let Some(&last) = seen.last() {
                if index <= last {
                    let msg = if seen.contains(&index) {
                        format!("duplicate {word} section")
                    } else {
                        format!("{word} section out of order: expected after {}", SECTIONS[last])
                    };
                    self.push(Diagnostic::error(self.path, span, msg));
                }
            }
            seen.push(index);
            match word.as_str() {
                "OBJECTS" => self.items(|p| p.object_decl(&ctx).map(|o| spec.objects.push(o))),
                "EVENTS" => self.items(|p| {
                    p.event_item(&ctx).map(|item| match item {
                        EventItem::Event(e) => spec.events.push(e),
                        EventItem::Aggregate(a) => spec.aggregates.push(a),
                    })
                }),
                "ORDER" => {
                    match self.order_expr() {
                        Ok(order) => {
                            spec.order = order;
                            have_order = true;
                        }
                        Err(d) => {
                            self.push(d);
                            self.skip_to_section();
                            have_order = true;
                            continue;
                        }
                    }
                    self.eat(&Tok::Semi);
                    if !ends_item(self.peek()) {
                        let d = self.unexpected("end of ORDER expression");
                        self.push(d);
                        self.skip_to_section();
                    }
                }
                "CONSTRAINTS" => self.items(|p| {
                    let c = p.constraint(dialect)?;
                    p.expect(Tok::Semi, "`;` after constraint")?;
                    spec.constraints.push(c);
                    Ok(())
                }),
                "REQUIRES" => self.items(|p| p.predicate().map(|pr| spec.requires.push(pr))),
                "ENSURES" => self.items(|p| p.predicate().map(|pr| spec.ensures.push(pr))),
                _ => unreachable!(),
            }
        }

        for required in REQUIRED {
            let index = SECTIONS.iter().position(|s| *s == required).unwrap();
            if !seen.contains(&index) {
                self.push(Diagnostic::error(self.path, header_span, format!("missing {required} section")));
            }
        }
        if seen.contains(&2) && !have_order {
            self.push(Diagnostic::error(self.path, header_span, "empty ORDER section"));
        }

        let name = if type_params.is_empty() {
            simple_name(&spec.class_name).to_string()
        } else {
            spec.class_name.clone()
        };
        Some(AbstractSpec { name, is_abstract: abstract_kw || !type_params.is_empty(), type_params, spec })
    }

    fn skip_to_section(&mut self) {
        while !ends_item(self.peek()) {
            self.bump();
        }
    }

    /// Parses `;`-terminated items until the next section keyword.
    fn items(&mut self, mut item: impl FnMut(&mut Self) -> PResult<()>) {
        while !ends_item(self.peek()) {
            if let Err(d) = item(self) {
                self.push(d);
                self.recover_to_semi(is_section_word);
            }
        }
    }

    fn type_ref(&mut self, ctx: &SpecContext) -> PResult<TypeRef> {
        if *self.peek() == Tok::Lt {
            return Ok(TypeRef::Param(self.placeholder(ctx)?.0));
        }
        let (mut name, _) = self.qualified_name("a type name")?;
        while *self.peek() == Tok::LBracket {
            self.bump();
            self.expect(Tok::RBracket, "`]`")?;
            name.push_str("[]");
        }
        Ok(TypeRef::Named(name))
    }

    /// `<T>`; checks the dialect and that `T` is declared.
    fn placeholder(&mut self, ctx: &SpecContext) -> PResult<(String, crate::model::Span)> {
        let span = self.expect(Tok::Lt, "`<`")?;
        if ctx.dialect == Dialect::Concrete {
            return Err(Diagnostic::error(self.path, span, "type parameters are only allowed in abstract rules (.mcsl)"));
        }
        let (name, _) = self.ident("a type parameter name")?;
        self.expect(Tok::Gt, "`>`")?;
        if let Some(params) = ctx.declared() {
            if !params.contains(&name) {
                return Err(Diagnostic::error(self.path, span, format!("type parameter <{name}> used without declaration")));
            }
        }
        Ok((name, span))
    }

    fn object_decl(&mut self, ctx: &SpecContext) -> PResult<ObjectDecl> {
        let span = self.span();
        let type_name = self.type_ref(ctx)?;
        let (var_name, _) = self.ident("a variable name")?;
        self.expect(Tok::Semi, "`;` after object declaration")?;
        Ok(ObjectDecl { type_name, var_name, span })
    }

    fn event_item(&mut self, ctx: &SpecContext) -> PResult<EventItem> {
        let (label, span) = self.ident("an event label")?;
        match self.peek() {
            Tok::Define => {
                self.bump();
                let mut alternatives = vec![self.ident("an event label")?.0];
                while self.eat(&Tok::Pipe) {
                    alternatives.push(self.ident("an event label")?.0);
                }
                self.expect(Tok::Semi, "`;` after aggregate")?;
                Ok(EventItem::Aggregate(AggregateDecl { name: label, alternatives, span }))
            }
            Tok::Colon => {
                self.bump();
                let event = self.event_body(label, span, ctx)?;
                self.expect(Tok::Semi, "`;` after event")?;
                Ok(EventItem::Event(event))
            }
            _ => Err(self.unexpected("`:` or `:=` after label")),
        }
    }

    /// Everything after `label :` up to, not including, the `;`.
    pub(crate) fn event_body(&mut self, label: String, span: crate::model::Span, ctx: &SpecContext) -> PResult<EventDecl> {
        let mut return_binding = None;
        if matches!(self.peek(), Tok::Ident(_)) && *self.peek_at(1) == Tok::Eq {
            return_binding = Some(self.ident("a variable name")?.0);
            self.bump();
        }
        let method_name = if *self.peek() == Tok::Lt {
            MethodName::Param(self.placeholder(ctx)?.0)
        } else {
            MethodName::Named(self.ident("a method name")?.0)
        };
        self.expect(Tok::LParen, "`(`")?;
        let mut params = Vec::new();
        if *self.peek() != Tok::RParen {
            loop {
                params.push(self.param()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(EventDecl { label, return_binding, method_name, params, span })
    }

    fn param(&mut self) -> PResult<ParamRef> {
        match self.peek().clone() {
            Tok::Underscore => {
                self.bump();
                Ok(ParamRef::Wildcard)
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(ParamRef::Var(name))
            }
            Tok::Str(s) => {
                self.bump();
                Ok(ParamRef::Literal(Literal::Str(s)))
            }
            Tok::Int(i) => {
                self.bump();
                Ok(ParamRef::Literal(Literal::Int(i)))
            }
            _ => Err(self.unexpected("a parameter")),
        }
    }

    /// seq := alt ("," alt)*
    pub(crate) fn order_expr(&mut self) -> PResult<OrderExpr> {
        let first = self.order_alt()?;
        if *self.peek() != Tok::Comma {
            return Ok(first);
        }
        let mut items = vec![first];
        while self.eat(&Tok::Comma) {
            items.push(self.order_alt()?);
        }
        Ok(OrderExpr::Seq(items))
    }

    /// alt := unary ("|" unary)*
    fn order_alt(&mut self) -> PResult<OrderExpr> {
        let first = self.order_unary()?;
        if *self.peek() != Tok::Pipe {
            return Ok(first);
        }
        let mut items = vec![first];
        while self.eat(&Tok::Pipe) {
            items.push(self.order_unary()?);
        }
        Ok(OrderExpr::Alt(items))
    }

    fn order_unary(&mut self) -> PResult<OrderExpr> {
        let mut e = match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let inner = self.order_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                inner
            }
            Tok::Ident(label) if !is_section_word(self.peek()) => OrderExpr::Atom(label, self.bump().span),
            _ => return Err(self.unexpected("an event label or `(`")),
        };
        loop {
            e = match self.peek() {
                Tok::Question => OrderExpr::Opt(Box::new(e)),
                Tok::Star => OrderExpr::Star(Box::new(e)),
                Tok::Plus => OrderExpr::Plus(Box::new(e)),
                _ => return Ok(e),
            };
            self.bump();
        }
    }

    /// membership ["=>" membership]
    pub(crate) fn constraint(&mut self, dialect: Dialect) -> PResult<ConstraintExpr> {
        let lhs = self.membership(dialect)?;
        if self.eat(&Tok::Implies) {
            let rhs = self.membership(dialect)?;
            return Ok(ConstraintExpr::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn membership(&mut self, dialect: Dialect) -> PResult<ConstraintExpr> {
        let (var, span) = self.ident("a constraint variable")?;
        self.expect_keyword("in")?;
        let set = self.literal_set(dialect)?;
        Ok(ConstraintExpr::Membership { var, set, span })
    }

    pub(crate) fn literal_set(&mut self, dialect: Dialect) -> PResult<LiteralSet> {
        match self.peek().clone() {
            Tok::MetaVar(name) => {
                if dialect == Dialect::Concrete {
                    return Err(self.error_here(format!("meta-variable `${name}` is only allowed in abstract rules (.mcsl)")));
                }
                self.bump();
                Ok(LiteralSet::MetaVar(name))
            }
            Tok::LBrace => Ok(LiteralSet::Literals(self.literal_braces()?)),
            _ => Err(self.error_here(format!("malformed literal set: expected `{{` or a meta-variable, found {}", self.peek()))),
        }
    }

    pub(crate) fn literal_braces(&mut self) -> PResult<BTreeSet<Literal>> {
        let open = self.expect(Tok::LBrace, "`{`")?;
        let mut set = BTreeSet::new();
        if *self.peek() == Tok::RBrace {
            return Err(Diagnostic::error(self.path, open, "malformed literal set: empty set"));
        }
        loop {
            match self.peek().clone() {
                Tok::Str(s) => set.insert(Literal::Str(s)),
                Tok::Int(i) => set.insert(Literal::Int(i)),
                _ => return Err(self.error_here(format!("malformed literal set: expected a literal, found {}", self.peek()))),
            };
            self.bump();
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        if *self.peek() != Tok::RBrace {
            return Err(self.error_here(format!("malformed literal set: expected `,` or `}}`, found {}", self.peek())));
        }
        self.bump();
        Ok(set)
    }

    pub(crate) fn predicate(&mut self) -> PResult<PredicateRef> {
        let (name, span) = self.ident("a predicate name")?;
        self.expect(Tok::LBracket, "`[`")?;
        let mut args = vec![self.ident("a predicate argument")?.0];
        while self.eat(&Tok::Comma) {
            args.push(self.ident("a predicate argument")?.0);
        }
        self.expect(Tok::RBracket, "`]`")?;
        self.expect(Tok::Semi, "`;` after predicate")?;
        Ok(PredicateRef { name, args, span })
    }
}

pub(crate) struct SpecContext<'p> {
    pub dialect: Dialect,
    /// Declared type parameters; `None` defers the check (refinement
    /// bodies are checked against the base at application time).
    pub type_params: Option<&'p [String]>,
}

impl SpecContext<'_> {
    pub(crate) fn unchecked() -> SpecContext<'static> {
        SpecContext { dialect: Dialect::Abstract, type_params: None }
    }

    fn declared(&self) -> Option<&[String]> {
        self.type_params
    }
}

enum EventItem {
    Event(EventDecl),
    Aggregate(AggregateDecl),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn concrete(text: &str) -> ParseResult<CrySLSpec> {
        parse_crysl(&SourceFile::new("t.crysl", text))
    }

    fn abstract_(text: &str) -> ParseResult<AbstractSpec> {
        parse_abstract(&SourceFile::new("t.mcsl", text))
    }

    const MINIMAL: &str = "SPEC a.B\nOBJECTS\n int x;\nEVENTS\n c : B(x);\nORDER\n c\n";

    #[test]
    fn empty_file_reports_missing_header() {
        let errs = concrete("").unwrap_err();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].message, "missing SPEC header");
        assert_eq!((errs[0].line, errs[0].column), (1, 1));
    }

    #[test]
    fn comment_only_file_reports_missing_header() {
        let errs = concrete("// nothing here\n").unwrap_err();
        assert_eq!(errs[0].message, "missing SPEC header");
    }

    #[test]
    fn minimal_rule() {
        let s = concrete(MINIMAL).unwrap();
        assert_eq!(s.class_name, "a.B");
        assert_eq!(s.order, OrderExpr::atom("c"));
        assert_eq!(s.events[0].method_name, MethodName::Named("B".into()));
    }

    #[test]
    fn unknown_section_keyword() {
        let errs = concrete(&format!("{MINIMAL}FORBIDDEN\n foo();\n")).unwrap_err();
        assert_eq!(errs.len(), 1);
        assert!(errs[0].message.contains("unknown section keyword FORBIDDEN"), "{errs:?}");
        assert_eq!(errs[0].line, 8);
    }

    #[test]
    fn section_order_is_enforced() {
        let text = "SPEC a.B\nOBJECTS\n int x;\nEVENTS\n c : B(x);\nENSURES\n p[x];\nORDER\n c\n";
        let errs = concrete(text).unwrap_err();
        assert!(errs.iter().any(|d| d.message.contains("ORDER section out of order")), "{errs:?}");
    }

    #[test]
    fn missing_order_section() {
        let errs = concrete("SPEC a.B\nOBJECTS\n int x;\nEVENTS\n c : B(x);\n").unwrap_err();
        assert!(errs.iter().any(|d| d.message == "missing ORDER section"));
    }

    #[test]
    fn statement_level_recovery_reports_every_bad_statement() {
        let text = "SPEC a.B\nOBJECTS\n int ;\n int y;\n byte[] ;\nEVENTS\n c : B(y);\nORDER\n c\n";
        let errs = concrete(text).unwrap_err();
        assert_eq!(errs.len(), 2, "{errs:?}");
        assert_eq!(errs[0].line, 3);
        assert_eq!(errs[1].line, 5);
    }

    #[test]
    fn order_precedence_sequence_loosest() {
        let o = parse_order("a, b | c+, (d, e)?").unwrap();
        assert_eq!(
            o,
            OrderExpr::Seq(vec![
                OrderExpr::atom("a"),
                OrderExpr::Alt(vec![OrderExpr::atom("b"), OrderExpr::Plus(Box::new(OrderExpr::atom("c")))]),
                OrderExpr::Opt(Box::new(OrderExpr::Seq(vec![OrderExpr::atom("d"), OrderExpr::atom("e")]))),
            ])
        );
    }

    #[test]
    fn parenthesized_groups_stay_nested() {
        let o = parse_order("(a, b), c").unwrap();
        assert_eq!(
            o,
            OrderExpr::Seq(vec![OrderExpr::Seq(vec![OrderExpr::atom("a"), OrderExpr::atom("b")]), OrderExpr::atom("c")])
        );
    }

    #[test]
    fn concrete_rejects_variation_points() {
        let text = "SPEC a.B\nOBJECTS\n String alg;\nEVENTS\n c : B(alg);\nORDER\n c\nCONSTRAINTS\n alg in $Algs;\n";
        let errs = concrete(text).unwrap_err();
        assert!(errs[0].message.contains("only allowed in abstract"));
        assert!(abstract_(text).is_ok());
    }

    #[test]
    fn metavar_outside_set_position() {
        let text = "SPEC a.B\nOBJECTS\n String alg;\nEVENTS\n c : B($Alg);\nORDER\n c\n";
        let errs = abstract_(text).unwrap_err();
        assert!(errs[0].message.contains("outside a literal-set position"), "{errs:?}");
        assert_eq!((errs[0].line, errs[0].column), (5, 8));
    }

    #[test]
    fn undeclared_type_parameter() {
        let text = "ABSTRACT SPEC F<T>\nOBJECTS\n <U> p;\nEVENTS\n c : get();\nORDER\n c\n";
        let errs = abstract_(text).unwrap_err();
        assert!(errs[0].message.contains("<U> used without declaration"), "{errs:?}");
    }

    #[test]
    fn type_parameters_mark_spec_abstract() {
        let s = abstract_("SPEC F<T>\nOBJECTS\n <T> p;\nEVENTS\n c : <T>();\nORDER\n c\n").unwrap();
        assert!(s.is_abstract);
        assert_eq!(s.name, "F");
        assert_eq!(s.type_params, vec!["T".to_string()]);
        assert_eq!(s.spec.events[0].method_name, MethodName::Param("T".into()));
    }

    #[test]
    fn empty_literal_set_is_malformed() {
        let text = "SPEC a.B\nOBJECTS\n String alg;\nEVENTS\n c : B(alg);\nORDER\n c\nCONSTRAINTS\n alg in {};\n";
        let errs = concrete(text).unwrap_err();
        assert!(errs[0].message.contains("malformed literal set"));
    }

    #[test]
    fn implication_constraint() {
        let c = parse_constraint(r#"alg in {"AES"} => keySize in {128, 192, 256}"#).unwrap();
        assert_eq!(
            c,
            ConstraintExpr::implies(
                ConstraintExpr::membership("alg", LiteralSet::of(["AES"])),
                ConstraintExpr::membership("keySize", LiteralSet::of([128i64, 192, 256])),
            )
        );
    }

    #[test]
    fn wrong_extension_is_rejected() {
        let errs = parse_crysl(&SourceFile::new("x.ref", MINIMAL)).unwrap_err();
        assert!(errs[0].message.contains("expected a .crysl file"));
    }
}
