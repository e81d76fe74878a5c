//! Parsers for the four surface languages.
//!
//! All four share one recursive-descent core. Keywords are contextual
//! identifiers; section keywords are the reserved upper-case words listed in
//! `docs/grammar.md`. On a malformed statement the parser records a
//! diagnostic and resynchronizes at the next `;`, so one pass reports every
//! statement-level problem.

mod config;
mod lexer;
mod refinement;
mod rules;

pub use config::parse_config;
pub use lexer::{tokenize, Mode, Tok, Token};
pub use refinement::parse_refinement;
pub use rules::{parse_abstract, parse_crysl, parse_order, parse_constraint};

use crate::diagnostic::{has_errors, Diagnostic};
use crate::model::Span;
use crate::source::{Language, SourceFile};

pub type ParseResult<T> = Result<T, Vec<Diagnostic>>;

type PResult<T> = Result<T, Diagnostic>;

/// Fails when the file's extension names another language.
fn check_language(file: &SourceFile, expected: &[Language]) -> ParseResult<()> {
    match file.language {
        Some(lang) if !expected.contains(&lang) => Err(vec![Diagnostic::error(
            &file.path,
            Span::new(1, 1),
            format!(
                "expected a .{} file, found .{}",
                expected[0].extension(),
                lang.extension()
            ),
        )]),
        _ => Ok(()),
    }
}

pub(crate) struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    path: &'a str,
    diags: Vec<Diagnostic>,
}

impl<'a> Parser<'a> {
    fn new(path: &'a str, text: &str, mode: Mode) -> Result<Self, Diagnostic> {
        Ok(Parser { toks: tokenize(path, text, mode)?, pos: 0, path, diags: Vec::new() })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) | Tok::Word(s) if s == kw)
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.at_keyword(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error_here(&self, msg: impl Into<String>) -> Diagnostic {
        Diagnostic::error(self.path, self.span(), msg)
    }

    fn unexpected(&self, expected: &str) -> Diagnostic {
        match self.peek() {
            Tok::MetaVar(name) => self.error_here(format!("meta-variable `${name}` outside a literal-set position")),
            found => self.error_here(format!("expected {expected}, found {found}")),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> PResult<Span> {
        if *self.peek() == tok {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<Span> {
        if self.at_keyword(kw) {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<(String, Span)> {
        match self.peek().clone() {
            Tok::Ident(s) => Ok((s, self.bump().span)),
            _ => Err(self.unexpected(what)),
        }
    }

    /// `a.b.c`
    fn qualified_name(&mut self, what: &str) -> PResult<(String, Span)> {
        let (mut name, span) = self.ident(what)?;
        while *self.peek() == Tok::Dot {
            self.bump();
            let (seg, _) = self.ident("a name segment after `.`")?;
            name.push('.');
            name.push_str(&seg);
        }
        Ok((name, span))
    }

    /// Skips past the next `;`, stopping early at `stop`.
    fn recover_to_semi(&mut self, stop: impl Fn(&Tok) -> bool) {
        while !self.at_eof() && !stop(self.peek()) {
            if self.bump().tok == Tok::Semi {
                return;
            }
        }
    }

    fn push(&mut self, d: Diagnostic) {
        self.diags.push(d);
    }

    fn finish<T>(self, value: T) -> ParseResult<T> {
        if has_errors(&self.diags) {
            Err(self.diags)
        } else {
            Ok(value)
        }
    }
}
