//! Textual grammar format.
//!
//! ```text
//! # comment
//! Prog     <- PUBLIC CLASS NAME LCUR BlockStmt RCUR
//! SEMI     <- ';'
//! recover semia <- ()
//! message semia "missing semicolon in assignment"
//! ```
//!
//! Juxtaposition is sequence, `/` is ordered choice, `*` and `!` are postfix
//! repetition and prefix negation, `.` matches any character, `'..'` is a
//! literal, `[a-z]` a character class, `%{l}` throws `l` and `p ^ l` stands
//! for `p / %{l}`. Each clause starts at column 1; continuation lines must be
//! indented. The first rule is the start symbol.
//!
//! All-uppercase rule names are lexical. If the grammar has lexical rules but
//! no `SKIP` rule, [`DEFAULT_LAYOUT`] is added as `SKIP`.

mod format;
mod lexer;
mod parser;

use std::path::Path;

use thiserror::Error;

use crate::model::{Grammar, Label, StructuralDiagnostic};

/// Layout skipped after every token unless the grammar defines `SKIP`.
pub const DEFAULT_LAYOUT: &str = r"([ \t\r\n] / '//' (!'\n' .)*)*";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrammarSource {
    pub text: String,
    /// File path, or `<memory>`.
    pub origin: String,
}

impl GrammarSource {
    pub fn memory(text: impl Into<String>) -> Self {
        GrammarSource {
            text: text.into(),
            origin: "<memory>".into(),
        }
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, DslError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|err| DslError::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        })?;
        Ok(GrammarSource {
            text,
            origin: path.display().to_string(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("{line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{line}:1: duplicate rule {name}")]
    DuplicateRule { name: String, line: usize },
    #[error("{line}: `fail` is reserved and cannot be used as a label")]
    ReservedLabel { line: usize },
    #[error("{line}:1: unknown label {label} (no rule throws it)")]
    UnknownLabel { label: Label, line: usize },
    #[error("invalid grammar: {}", join(.0))]
    Invalid(Vec<StructuralDiagnostic>),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

fn join(diags: &[StructuralDiagnostic]) -> String {
    diags
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Parses and validates a grammar file.
pub fn parse_grammar(src: &GrammarSource) -> Result<Grammar, DslError> {
    parser::parse(src)
}

/// Prints `g` in the grammar format; parsing the result gives back `g`.
pub fn format_grammar(g: &Grammar) -> String {
    format::format(g)
}
