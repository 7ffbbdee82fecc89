use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::model::Label;

/// Byte offset into the input. A greater offset denotes a shorter remaining
/// suffix, i.e. a further position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Position(pub usize);

impl Position {
    pub fn offset(self) -> usize {
        self.0
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An item that can be expected at a position, or start/follow a match.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Char(char),
    /// A lexical rule, reported by name.
    Token(String),
    Any,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Char(c) => write!(f, "'{}'", c.escape_default()),
            Symbol::Token(name) => f.write_str(name),
            Symbol::Any => f.write_str("any character"),
        }
    }
}

/// The furthest ordinary failure seen so far, with what was expected there.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FarthestFailure {
    at: Option<Position>,
    expected: BTreeSet<Symbol>,
}

impl FarthestFailure {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn at(pos: Position, expected: impl IntoIterator<Item = Symbol>) -> Self {
        FarthestFailure {
            at: Some(pos),
            expected: expected.into_iter().collect(),
        }
    }

    pub fn position(&self) -> Option<Position> {
        self.at
    }

    pub fn expected(&self) -> &BTreeSet<Symbol> {
        &self.expected
    }

    pub fn is_none(&self) -> bool {
        self.at.is_none()
    }

    /// In-place [`min_failure`].
    pub fn merge(&mut self, other: FarthestFailure) {
        match (self.at, other.at) {
            (_, None) => {}
            (None, Some(_)) => *self = other,
            (Some(a), Some(b)) if b > a => *self = other,
            (Some(a), Some(b)) if a == b => self.expected.extend(other.expected),
            _ => {}
        }
    }
}

/// Picks the further of two failure records: none loses to any position, a
/// greater offset wins, and equal offsets union their expected sets.
pub fn min_failure(a: FarthestFailure, b: FarthestFailure) -> FarthestFailure {
    let mut out = a;
    out.merge(b);
    out
}

/// A recovered error: `label` was thrown at `at` and its recovery expression ran.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorRecord {
    pub label: Label,
    pub at: Position,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tok(s: &str) -> Symbol {
        Symbol::Token(s.into())
    }

    #[test]
    fn none_loses() {
        let f = FarthestFailure::at(Position(5), [tok("SEMI")]);
        assert_eq!(min_failure(FarthestFailure::none(), f.clone()), f);
        assert_eq!(min_failure(f.clone(), FarthestFailure::none()), f);
        assert!(min_failure(FarthestFailure::none(), FarthestFailure::none()).is_none());
    }

    #[test]
    fn further_offset_wins() {
        let near = FarthestFailure::at(Position(3), [tok("RCUR")]);
        let far = FarthestFailure::at(Position(7), [tok("SEMI")]);
        assert_eq!(min_failure(near.clone(), far.clone()), far);
        assert_eq!(min_failure(far.clone(), near), far);
    }

    #[test]
    fn ties_union() {
        let a = FarthestFailure::at(Position(4), [tok("IF")]);
        let b = FarthestFailure::at(Position(4), [tok("WHILE")]);
        assert_eq!(
            min_failure(a, b),
            FarthestFailure::at(Position(4), [tok("IF"), tok("WHILE")])
        );
    }

    #[test]
    fn symbols_render() {
        assert_eq!(Symbol::Char('a').to_string(), "'a'");
        assert_eq!(Symbol::Char('\n').to_string(), "'\\n'");
        assert_eq!(tok("SEMI").to_string(), "SEMI");
    }
}
