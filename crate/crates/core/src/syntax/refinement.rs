//! Refinement syntax (`.ref`). A file holds any number of refinements:
//!
//! ```text
//! SPEC SHA256 REFINES Digest<org.bouncycastle.crypto.digests.SHA256Digest>;
//! SPEC KeyGenerator REFINES javax.crypto.KeyGenerator {
//!   define AlgSet = {"AES", "HmacSHA256"};
//!   add constraint alg in {"AES"} => keySize in {128, 192, 256};
//! }
//! ```

use super::lexer::{Mode, Tok};
use super::rules::{Dialect, SpecContext};
use super::{check_language, PResult, ParseResult, Parser};
use crate::diagnostic::Diagnostic;
use crate::model::*;
use crate::source::{Language, SourceFile};

pub fn parse_refinement(file: &SourceFile) -> ParseResult<Vec<RefinementSpec>> {
    check_language(file, &[Language::Refinement])?;
    let mut p = Parser::new(&file.path, &file.text, Mode::Rules).map_err(|d| vec![d])?;
    let mut out: Vec<RefinementSpec> = Vec::new();
    while !p.at_eof() {
        match p.refinement() {
            Ok(r) => {
                if out.iter().any(|prev| prev.name == r.name) {
                    p.push(Diagnostic::error(&file.path, r.span, format!("duplicate refinement name `{}`", r.name)));
                }
                out.push(RefinementSpec { origin: Origin(file.path.clone()), ..r });
            }
            Err(d) => {
                p.push(d);
                p.skip_to_next_refinement();
            }
        }
    }
    p.finish(out)
}

impl Parser<'_> {
    fn skip_to_next_refinement(&mut self) {
        self.bump();
        while !self.at_eof() && !(self.at_keyword("SPEC") && matches!(self.peek_at(2), Tok::Ident(k) if k == "REFINES")) {
            self.bump();
        }
    }

    fn refinement(&mut self) -> PResult<RefinementSpec> {
        let span = self.expect_keyword("SPEC")?;
        let (name, _) = self.ident("a refinement name")?;
        self.expect_keyword("REFINES")?;
        let (base_name, base_span) = self.qualified_name("a base spec name")?;
        let mut ops = Vec::new();
        if *self.peek() == Tok::Lt {
            self.bump();
            let mut position = 0;
            loop {
                let arg_span = self.span();
                let (fqn, _) = self.qualified_name("a fully qualified type argument")?;
                ops.push(RefinementOp::DefineQualifiedType { position, fqn, span: arg_span });
                position += 1;
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::Gt, "`>` closing the type arguments")?;
        }
        let base = BaseRef { name: base_name, span: base_span };
        if self.eat(&Tok::Semi) {
            return Ok(RefinementSpec { name, base, ops, span, origin: Origin::default() });
        }
        self.expect(Tok::LBrace, "`{` or `;` after the refined base")?;
        while !matches!(self.peek(), Tok::RBrace | Tok::Eof) {
            match self.refinement_op() {
                Ok(op) => ops.push(op),
                Err(d) => {
                    self.push(d);
                    self.recover_to_semi(|t| matches!(t, Tok::RBrace));
                }
            }
        }
        self.expect(Tok::RBrace, "`}` closing the refinement body")?;
        Ok(RefinementSpec { name, base, ops, span, origin: Origin::default() })
    }

    fn refinement_op(&mut self) -> PResult<RefinementOp> {
        let span = self.span();
        let keyword = match self.peek() {
            Tok::Ident(k) => k.clone(),
            _ => return Err(self.unexpected("a refinement operation")),
        };
        let ctx = SpecContext::unchecked();
        let op = match keyword.as_str() {
            "define" => {
                self.bump();
                let metavar = match self.peek().clone() {
                    Tok::MetaVar(name) | Tok::Ident(name) => {
                        self.bump();
                        name
                    }
                    _ => return Err(self.unexpected("a meta-variable name")),
                };
                self.expect(Tok::Eq, "`=`")?;
                let set = LiteralSet::Literals(self.literal_braces()?);
                RefinementOp::DefineLiteralSet { metavar, set, span }
            }
            "add" | "remove" | "replace" => {
                self.bump();
                let (target, target_span) = match self.peek() {
                    Tok::Ident(t) => (t.clone(), self.span()),
                    _ => return Err(self.unexpected("an operation target")),
                };
                let op_name = format!("{keyword} {target}");
                match op_name.as_str() {
                    "add event" => {
                        self.bump();
                        let (label, label_span) = self.ident("an event label")?;
                        self.expect(Tok::Colon, "`:` after the event label")?;
                        let event = self.event_body(label, label_span, &ctx)?;
                        let aggregate = if self.eat_keyword("to") { Some(self.ident("an aggregate name")?.0) } else { None };
                        RefinementOp::AddEvent { event, aggregate }
                    }
                    "remove event" => {
                        self.bump();
                        let (label, span) = self.ident("an event label")?;
                        RefinementOp::RemoveEvent { label, span }
                    }
                    "add constraint" => {
                        self.bump();
                        RefinementOp::AddConstraint(self.constraint(Dialect::Abstract)?)
                    }
                    "remove constraint" => {
                        self.bump();
                        RefinementOp::RemoveConstraint(self.constraint(Dialect::Abstract)?)
                    }
                    "replace order" => {
                        self.bump();
                        RefinementOp::ReplaceOrder(self.order_expr()?)
                    }
                    "add ensures" | "add requires" => {
                        self.bump();
                        // predicate() consumes the trailing `;`
                        let pred = self.predicate()?;
                        return Ok(if target == "ensures" { RefinementOp::AddEnsures(pred) } else { RefinementOp::AddRequires(pred) });
                    }
                    "remove ensures" | "remove requires" => {
                        self.bump();
                        let (name, _) = self.ident("a predicate name")?;
                        let kind = if target == "ensures" { PredicateKind::Ensures } else { PredicateKind::Requires };
                        RefinementOp::RemovePredicate { kind, name, span: target_span }
                    }
                    _ => return Err(Diagnostic::error(self.path, span, format!("unknown op keyword `{op_name}`"))),
                }
            }
            other => return Err(Diagnostic::error(self.path, span, format!("unknown op keyword `{other}`"))),
        };
        self.expect(Tok::Semi, "`;` after the operation")?;
        Ok(op)
    }
}
