//! Static analyses: FIRST/FOLLOW sets, FOLLOW-based default recovery and
//! termination checks.

mod recovery;
mod sets;
mod wellformed;

use thiserror::Error;

use crate::model::Label;

pub use recovery::{default_recovery, with_default_recovery, LabelSelection};
pub use sets::{first_set, follow_set, FirstSet, FollowSet, GrammarSets, Occurrence};
pub use wellformed::{check_well_formed, WellFormedDiagnostic};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("cannot build a recovery expression from an empty FOLLOW set")]
    EmptyFollow,
    #[error("unknown label {0}")]
    UnknownLabel(Label),
    #[error("nothing can follow the throw sites of {0}")]
    NoFollowForLabel(Label),
}
