//! Canonical CrySL text and output-directory layout.
//!
//! Canonical form: sections in fixed order separated by one blank line,
//! section bodies indented four spaces, one declaration per line, literal
//! sets sorted, no line wrapping, `\n` line endings, no trailing
//! whitespace. Events are listed before aggregates.

use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::model::*;
use crate::preprocess::BuildResult;

#[derive(Debug, Error)]
pub enum EmitError {
    #[error("rule {class} still has variation points: {points}")]
    NotConcrete { class: String, points: String },
    #[error("invalid output file name `{0}`")]
    BadFileName(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

/// Renders a concrete rule in canonical form.
pub fn pretty_print(spec: &CrySLSpec) -> Result<String, EmitError> {
    if !spec.is_concrete() {
        let mut points: Vec<String> = spec.meta_vars().iter().map(|m| format!("${m}")).collect();
        points.extend(spec.type_param_uses().iter().map(|(p, _)| format!("<{p}>")));
        return Err(EmitError::NotConcrete { class: spec.class_name.clone(), points: points.join(", ") });
    }
    Ok(render(spec))
}

/// Renders without the concreteness check. Abstract rules come out in the
/// same layout, with `$Name` and `<T>` in place.
pub fn render(spec: &CrySLSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "SPEC {}", spec.class_name);

    section(&mut out, "OBJECTS", spec.objects.iter().map(|o| format!("{} {};", o.type_name, o.var_name)));

    let events = spec.events.iter().map(event_line);
    let aggregates = spec.aggregates.iter().map(|a| format!("{} := {};", a.name, a.alternatives.join(" | ")));
    section(&mut out, "EVENTS", events.chain(aggregates));

    section(&mut out, "ORDER", std::iter::once(order_text(&spec.order)));

    if !spec.constraints.is_empty() {
        section(&mut out, "CONSTRAINTS", spec.constraints.iter().map(|c| format!("{};", constraint_text(c))));
    }
    if !spec.requires.is_empty() {
        section(&mut out, "REQUIRES", spec.requires.iter().map(predicate_line));
    }
    if !spec.ensures.is_empty() {
        section(&mut out, "ENSURES", spec.ensures.iter().map(predicate_line));
    }
    out
}

/// Renders an abstract rule, including its header.
pub fn render_abstract(spec: &AbstractSpec) -> String {
    let body = render(&spec.spec);
    let mut header = String::new();
    if spec.is_abstract {
        header.push_str("ABSTRACT ");
    }
    header.push_str("SPEC ");
    header.push_str(&spec.spec.class_name);
    if !spec.type_params.is_empty() {
        let _ = write!(header, "<{}>", spec.type_params.join(", "));
    }
    match body.split_once('\n') {
        Some((_, rest)) => format!("{header}\n{rest}"),
        None => header,
    }
}

fn section(out: &mut String, keyword: &str, lines: impl Iterator<Item = String>) {
    out.push('\n');
    out.push_str(keyword);
    out.push('\n');
    for line in lines {
        out.push_str("    ");
        out.push_str(&line);
        out.push('\n');
    }
}

fn event_line(e: &EventDecl) -> String {
    let mut s = format!("{} : ", e.label);
    if let Some(ret) = &e.return_binding {
        let _ = write!(s, "{ret} = ");
    }
    let params: Vec<String> = e.params.iter().map(ToString::to_string).collect();
    let _ = write!(s, "{}({});", e.method_name, params.join(", "));
    s
}

fn predicate_line(p: &PredicateRef) -> String {
    format!("{}[{}];", p.name, p.args.join(", "))
}

pub fn literal_set_text(set: &LiteralSet) -> String {
    match set {
        LiteralSet::MetaVar(name) => format!("${name}"),
        LiteralSet::Literals(items) => {
            let items: Vec<String> = items.iter().map(ToString::to_string).collect();
            format!("{{{}}}", items.join(", "))
        }
    }
}

pub fn constraint_text(c: &ConstraintExpr) -> String {
    match c {
        ConstraintExpr::Membership { var, set, .. } => format!("{var} in {}", literal_set_text(set)),
        ConstraintExpr::Implication { lhs, rhs } => format!("{} => {}", constraint_text(lhs), constraint_text(rhs)),
    }
}

/// `,` binds loosest, then `|`, then the postfix operators.
pub fn order_text(o: &OrderExpr) -> String {
    fn prec(o: &OrderExpr) -> u8 {
        match o {
            OrderExpr::Seq(_) => 0,
            OrderExpr::Alt(_) => 1,
            _ => 2,
        }
    }
    fn child(o: &OrderExpr, parent: u8) -> String {
        // same-kind children keep their parentheses so the tree survives re-parsing
        if prec(o) <= parent {
            format!("({})", order_text(o))
        } else {
            order_text(o)
        }
    }
    match o {
        OrderExpr::Atom(label, _) => label.clone(),
        OrderExpr::Seq(items) => items.iter().map(|c| child(c, 0)).collect::<Vec<_>>().join(", "),
        OrderExpr::Alt(items) => items.iter().map(|c| child(c, 1)).collect::<Vec<_>>().join(" | "),
        OrderExpr::Opt(c) => format!("{}?", child(c, 1)),
        OrderExpr::Star(c) => format!("{}*", child(c, 1)),
        OrderExpr::Plus(c) => format!("{}+", child(c, 1)),
    }
}

/// Writes every generated rule under `out`, creating it if needed.
/// Returns the written paths in emission order.
pub fn emit(result: &BuildResult, out: &Path) -> Result<Vec<PathBuf>, EmitError> {
    let files = rendered_files(result)?;
    std::fs::create_dir_all(out).map_err(|source| EmitError::Io { path: out.to_path_buf(), source })?;
    let mut written = Vec::with_capacity(files.len());
    for (name, text) in files {
        let path = out.join(&name);
        std::fs::write(&path, text).map_err(|source| EmitError::Io { path: path.clone(), source })?;
        written.push(path);
    }
    Ok(written)
}

/// File names and canonical texts, in emission order, without touching disk.
pub fn rendered_files(result: &BuildResult) -> Result<Vec<(String, String)>, EmitError> {
    result
        .generated
        .iter()
        .map(|(name, spec)| {
            check_file_name(name)?;
            Ok((name.clone(), pretty_print(spec)?))
        })
        .collect()
}

fn check_file_name(name: &str) -> Result<(), EmitError> {
    let p = Path::new(name);
    let plain = p.components().count() == 1
        && p.file_name().is_some_and(|f| f == name)
        && !name.starts_with('.')
        && !name.contains(['/', '\\']);
    if plain {
        Ok(())
    } else {
        Err(EmitError::BadFileName(name.to_string()))
    }
}
