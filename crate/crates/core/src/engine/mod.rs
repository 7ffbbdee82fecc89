//! Matching with labeled failures, recovery expressions and farthest-failure
//! tracking.
//!
//! [`match_expr`] evaluates one expression at one position and returns the
//! full [`MatchOutcome`]; [`run_parse`] drives it from the start rule and
//! classifies the result against the whole input.

pub mod failure;
mod matcher;
pub mod tree;

use thiserror::Error;

use crate::model::{Expr, Grammar, Label};

pub use failure::{min_failure, ErrorRecord, FarthestFailure, Position, Symbol};
pub use tree::{NodeKind, ParseTree};

use matcher::{Matcher, Res};

/// Name given to the synthetic root when a matched expression is not a
/// single rule invocation.
pub const EXPR_ROOT: &str = "<expr>";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineFault {
    #[error("expression nesting exceeded {limit} activations at offset {at}")]
    DepthExceeded { limit: usize, at: Position },
    #[error("recovery nesting exceeded {limit} while recovering {label} at offset {at}")]
    RecoveryDepthExceeded {
        limit: usize,
        label: Label,
        at: Position,
    },
    #[error("repetition body succeeded without consuming input at offset {at}")]
    EmptyRepetition { at: Position },
    #[error("no rule named {0}")]
    UnknownRule(String),
    #[error("offset {0} is not a character boundary of the input")]
    InvalidPosition(Position),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of nested expression activations.
    pub max_depth: usize,
    /// Maximum number of nested recovery-expression activations.
    pub max_recovery_depth: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_depth: 10_000,
            max_recovery_depth: 64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchOptions {
    /// When false, every thrown label behaves as if it had no recovery expression.
    pub recovery: bool,
    pub build_tree: bool,
    pub limits: Limits,
}

impl Default for MatchOptions {
    fn default() -> Self {
        MatchOptions {
            recovery: true,
            build_tree: false,
            limits: Limits::default(),
        }
    }
}

impl MatchOptions {
    pub fn with_tree(self) -> Self {
        MatchOptions {
            build_tree: true,
            ..self
        }
    }

    pub fn without_recovery(self) -> Self {
        MatchOptions {
            recovery: false,
            ..self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureLabel {
    /// Ordinary failure, caught by ordered choice.
    Fail,
    Thrown {
        label: Label,
        at: Position,
    },
}

impl FailureLabel {
    pub fn label(&self) -> Option<&Label> {
        match self {
            FailureLabel::Fail => None,
            FailureLabel::Thrown { label, .. } => Some(label),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchResult {
    Success { remaining: Position },
    Failure(FailureLabel),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchOutcome {
    pub result: MatchResult,
    pub farthest: FarthestFailure,
    pub log: Vec<ErrorRecord>,
    /// Present on success when tree building was requested.
    pub tree: Option<ParseTree>,
}

impl MatchOutcome {
    pub fn remaining(&self) -> Option<Position> {
        match self.result {
            MatchResult::Success { remaining } => Some(remaining),
            MatchResult::Failure(_) => None,
        }
    }

    pub fn is_success(&self) -> bool {
        self.remaining().is_some()
    }
}

/// Matches `expr` against `input` starting at byte offset `pos`.
pub fn match_expr(
    grammar: &Grammar,
    expr: &Expr,
    input: &str,
    pos: Position,
    opts: &MatchOptions,
) -> Result<MatchOutcome, EngineFault> {
    if !input.is_char_boundary(pos.0) {
        return Err(EngineFault::InvalidPosition(pos));
    }
    let mut matcher = Matcher::new(grammar, input, opts);
    let mut nodes = opts.build_tree.then(Vec::new);
    let step = matcher.eval(expr, pos.0, opts.recovery, nodes.as_mut())?;
    let (result, tree) = match step.res {
        Res::Ok(end) => {
            let tree = nodes.map(|mut nodes| {
                if nodes.len() == 1 && matches!(expr, Expr::NonTerminal(_)) {
                    nodes.pop().unwrap()
                } else {
                    ParseTree::node(NodeKind::NonTerminal(EXPR_ROOT.into()), pos.0, end, nodes)
                }
            });
            (
                MatchResult::Success {
                    remaining: Position(end),
                },
                tree,
            )
        }
        Res::Fail => (MatchResult::Failure(FailureLabel::Fail), None),
        Res::Throw(label, at) => (
            MatchResult::Failure(FailureLabel::Thrown {
                label,
                at: Position(at),
            }),
            None,
        ),
    };
    Ok(MatchOutcome {
        result,
        farthest: step.farthest,
        log: matcher.log,
        tree,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseStatus {
    Accepted,
    AcceptedWithErrors,
    Rejected,
}

impl ParseStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ParseStatus::Accepted => "accepted",
            ParseStatus::AcceptedWithErrors => "accepted-with-errors",
            ParseStatus::Rejected => "rejected",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    /// A label without a recovery expression reached the top.
    Aborted { label: Label, at: Position },
    /// The start rule failed with the ordinary failure.
    Failed,
    /// The start rule succeeded without consuming the whole input.
    Incomplete { remaining: Position },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseReport {
    pub status: ParseStatus,
    pub outcome: MatchOutcome,
    pub rejection: Option<Rejection>,
}

/// Parses the whole of `input` from the grammar's start rule.
pub fn run_parse(
    grammar: &Grammar,
    input: &str,
    opts: &MatchOptions,
) -> Result<ParseReport, EngineFault> {
    let start = Expr::NonTerminal(grammar.start.clone());
    let outcome = match_expr(grammar, &start, input, Position(0), opts)?;
    let (status, rejection) = match &outcome.result {
        MatchResult::Success { remaining } if remaining.0 < input.len() => (
            ParseStatus::Rejected,
            Some(Rejection::Incomplete {
                remaining: *remaining,
            }),
        ),
        MatchResult::Success { .. } if outcome.log.is_empty() => (ParseStatus::Accepted, None),
        MatchResult::Success { .. } => (ParseStatus::AcceptedWithErrors, None),
        MatchResult::Failure(FailureLabel::Fail) => {
            (ParseStatus::Rejected, Some(Rejection::Failed))
        }
        MatchResult::Failure(FailureLabel::Thrown { label, at }) => (
            ParseStatus::Rejected,
            Some(Rejection::Aborted {
                label: label.clone(),
                at: *at,
            }),
        ),
    };
    Ok(ParseReport {
        status,
        outcome,
        rejection,
    })
}
