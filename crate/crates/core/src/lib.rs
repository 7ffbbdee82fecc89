//! Parsing expression grammars with labeled failures, recovery expressions
//! and farthest-failure error reporting.
//!
//! ```
//! use peg_recovery::dsl::{parse_grammar, GrammarSource};
//! use peg_recovery::engine::{run_parse, MatchOptions, ParseStatus};
//!
//! let g = parse_grammar(&GrammarSource::memory(
//!     "S <- 'a' ';'^semi 'b'\nrecover semi <- ()",
//! ))
//! .unwrap();
//! let report = run_parse(&g, "ab", &MatchOptions::default()).unwrap();
//! assert_eq!(report.status, ParseStatus::AcceptedWithErrors);
//! assert_eq!(report.outcome.log[0].at.offset(), 1);
//! ```

pub mod analysis;
pub mod cli;
pub mod dsl;
pub mod engine;
pub mod model;
pub mod report;

pub use model::{Expr, Grammar, Label, Rule};
