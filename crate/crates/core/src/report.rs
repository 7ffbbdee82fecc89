//! Human- and machine-readable diagnostics for parse reports.

use std::fmt;

use serde::Serialize;

use crate::engine::{ParseReport, Position, Rejection};
use crate::model::{Grammar, Label};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    #[serde(skip)]
    pub severity: Severity,
    #[serde(skip)]
    pub at: Position,
    pub line: usize,
    pub column: usize,
    pub label: Option<Label>,
    pub message: String,
    /// Sorted. Empty for label-derived diagnostics.
    pub expected: Vec<String>,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, col {}: {}",
            self.line, self.column, self.message
        )
    }
}

/// 1-based line and column of `pos`; columns count characters.
pub fn line_col(input: &str, pos: Position) -> (usize, usize) {
    let before = &input[..pos.0.min(input.len())];
    let line = before.matches('\n').count() + 1;
    let line_start = before.rfind('\n').map_or(0, |i| i + 1);
    (line, before[line_start..].chars().count() + 1)
}

fn labeled(g: &Grammar, input: &str, label: &Label, at: Position) -> Diagnostic {
    let message = g
        .messages
        .get(label)
        .cloned()
        .unwrap_or_else(|| format!("syntax error [{label}]"));
    let (line, column) = line_col(input, at);
    Diagnostic {
        severity: Severity::Error,
        at,
        line,
        column,
        label: Some(label.clone()),
        message,
        expected: Vec::new(),
    }
}

fn unlabeled(input: &str, at: Position, expected: Vec<String>) -> Diagnostic {
    let message = if expected.is_empty() {
        "syntax error".to_string()
    } else {
        format!("syntax error, expected one of: {}", expected.join(", "))
    };
    let (line, column) = line_col(input, at);
    Diagnostic {
        severity: Severity::Error,
        at,
        line,
        column,
        label: None,
        message,
        expected,
    }
}

/// One diagnostic per recovered error, one for an aborting label, and one
/// farthest-failure diagnostic when the parse failed or stopped early.
/// Sorted by position.
pub fn render(report: &ParseReport, g: &Grammar, input: &str) -> Vec<Diagnostic> {
    let outcome = &report.outcome;
    let mut diags: Vec<Diagnostic> = outcome
        .log
        .iter()
        .map(|r| labeled(g, input, &r.label, r.at))
        .collect();

    let farthest = || {
        let mut expected: Vec<String> = outcome
            .farthest
            .expected()
            .iter()
            .map(|s| s.to_string())
            .collect();
        expected.sort();
        expected
    };
    match &report.rejection {
        None => {}
        Some(Rejection::Aborted { label, at }) => diags.push(labeled(g, input, label, *at)),
        Some(Rejection::Failed) => {
            let at = outcome.farthest.position().unwrap_or(Position(0));
            diags.push(unlabeled(input, at, farthest()));
        }
        Some(Rejection::Incomplete { remaining }) => match outcome.farthest.position() {
            Some(at) if at >= *remaining => diags.push(unlabeled(input, at, farthest())),
            _ => diags.push(unlabeled(input, *remaining, Vec::new())),
        },
    }
    diags.sort_by_key(|d| d.at);
    diags
}
