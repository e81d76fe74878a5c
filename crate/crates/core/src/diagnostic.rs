use std::fmt;

use serde::Serialize;

use crate::model::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

/// A located message. Line and column are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Diagnostic {
    pub path: String,
    pub line: u32,
    pub column: u32,
    pub severity: Severity,
    pub message: String,
}

impl Diagnostic {
    /// Synthetic spans (line 0) are reported at 1:1.
    pub fn new(path: impl Into<String>, span: Span, severity: Severity, message: impl Into<String>) -> Self {
        Diagnostic {
            path: path.into(),
            line: span.line.max(1),
            column: span.column.max(1),
            severity,
            message: message.into(),
        }
    }

    pub fn error(path: impl Into<String>, span: Span, message: impl Into<String>) -> Self {
        Self::new(path, span, Severity::Error, message)
    }

    pub fn warning(path: impl Into<String>, span: Span, message: impl Into<String>) -> Self {
        Self::new(path, span, Severity::Warning, message)
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}: {}: {}", self.path, self.line, self.column, self.severity, self.message)
    }
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}

/// Stable sort by source position.
pub fn sort_by_location(diags: &mut [Diagnostic]) {
    diags.sort_by_key(|d| (d.line, d.column));
}
