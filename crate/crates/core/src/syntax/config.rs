//! Configuration syntax (`.conf`):
//!
//! ```text
//! config android25plus {
//!   src = MetaCrySL/samples/jca/base/;
//!   out = MetaCrySL/samples/jca/android/target/research/25plus/;
//!   load spec base/;
//!   load refinement android-bsi/01plus/;
//! }
//! ```

use std::path::Path;

use super::lexer::{Mode, Tok};
use super::{check_language, PResult, ParseResult, Parser};
use crate::diagnostic::Diagnostic;
use crate::model::*;
use crate::source::{escapes_parent, Language, SourceFile};

/// Parses every configuration in the file, in file order.
pub fn parse_config(file: &SourceFile) -> ParseResult<Vec<BuildConfig>> {
    check_language(file, &[Language::Config])?;
    let mut p = Parser::new(&file.path, &file.text, Mode::Config).map_err(|d| vec![d])?;
    let mut out: Vec<BuildConfig> = Vec::new();
    if p.at_eof() {
        p.push(p.error_here("expected `config`, found end of input"));
    }
    while !p.at_eof() {
        match p.config() {
            Ok(c) => {
                if out.iter().any(|prev| prev.name == c.name) {
                    p.push(Diagnostic::error(&file.path, c.span, format!("duplicate config name `{}`", c.name)));
                }
                out.push(BuildConfig { origin: Origin(file.path.clone()), ..c });
            }
            Err(d) => {
                p.push(d);
                p.bump();
                while !p.at_eof() && !p.at_keyword("config") {
                    p.bump();
                }
            }
        }
    }
    p.finish(out)
}

impl Parser<'_> {
    fn word(&mut self, what: &str) -> PResult<(String, crate::model::Span)> {
        match self.peek().clone() {
            Tok::Word(w) | Tok::Str(w) => Ok((w, self.bump().span)),
            _ => Err(self.unexpected(what)),
        }
    }

    fn config(&mut self) -> PResult<BuildConfig> {
        let span = self.expect_keyword("config")?;
        let (name, _) = self.word("a configuration name")?;
        self.expect(Tok::LBrace, "`{`")?;
        let mut src: Option<String> = None;
        let mut out: Option<String> = None;
        let mut loads = Vec::new();
        while !matches!(self.peek(), Tok::RBrace | Tok::Eof) {
            if let Err(d) = self.config_item(&mut src, &mut out, &mut loads) {
                self.push(d);
                self.recover_to_semi(|t| matches!(t, Tok::RBrace));
            }
        }
        self.expect(Tok::RBrace, "`}` closing the configuration")?;
        for (field, value) in [("src", &src), ("out", &out)] {
            if value.is_none() {
                self.push(Diagnostic::error(self.path, span, format!("config `{name}` is missing required field `{field}`")));
            }
        }
        if !loads.iter().any(|l: &LoadDirective| l.kind == LoadKind::Spec) {
            self.push(Diagnostic::error(self.path, span, format!("config `{name}` has no specification sources (`load spec`)")));
        }
        Ok(BuildConfig {
            name,
            src: src.unwrap_or_default(),
            out: out.unwrap_or_default(),
            loads,
            span,
            origin: Origin::default(),
        })
    }

    fn config_item(&mut self, src: &mut Option<String>, out: &mut Option<String>, loads: &mut Vec<LoadDirective>) -> PResult<()> {
        let span = self.span();
        let key = match self.peek() {
            Tok::Word(w) => w.clone(),
            _ => return Err(self.unexpected("`src`, `out` or `load`")),
        };
        self.bump();
        match key.as_str() {
            "src" | "out" => {
                self.expect(Tok::Eq, "`=`")?;
                let (path, path_span) = self.word("a path")?;
                self.expect(Tok::Semi, "`;`")?;
                if escapes_parent(Path::new(&path)) {
                    return Err(Diagnostic::error(self.path, path_span, format!("path `{path}` escapes its parent directory")));
                }
                let slot = if key == "src" { src } else { out };
                if slot.is_some() {
                    return Err(Diagnostic::error(self.path, span, format!("duplicate `{key}` field")));
                }
                *slot = Some(path);
            }
            "load" => {
                let kind = match self.peek() {
                    Tok::Word(k) if k == "spec" => LoadKind::Spec,
                    Tok::Word(k) if k == "refinement" => LoadKind::Refinement,
                    _ => return Err(self.unexpected("`spec` or `refinement`")),
                };
                self.bump();
                let (path, path_span) = self.word("a path")?;
                self.expect(Tok::Semi, "`;`")?;
                let p = Path::new(&path);
                if escapes_parent(p) || p.is_absolute() {
                    return Err(Diagnostic::error(
                        self.path,
                        path_span,
                        format!("load path `{path}` must be relative to src without `..`"),
                    ));
                }
                loads.push(LoadDirective { kind, path, span });
            }
            other => return Err(Diagnostic::error(self.path, span, format!("unknown configuration field `{other}`"))),
        }
        Ok(())
    }
}
