//! Synthesized recovery expressions that skip to a FOLLOW item.

use crate::engine::Symbol;
use crate::model::{Expr, Grammar, Label};

use super::sets::{FollowSet, GrammarSets};
use super::AnalysisError;

/// `(!(f1 / f2 / ...) .)*` over the items of `follow`, sorted by name.
///
/// The expression stops in front of a synchronization item without consuming
/// it. With only end-of-input to synchronize on it is `.*`.
pub fn default_recovery(follow: &FollowSet) -> Result<Expr, AnalysisError> {
    if follow.is_empty() {
        return Err(AnalysisError::EmptyFollow);
    }
    let mut items: Vec<&Symbol> = follow.items.iter().collect();
    items.sort_by_key(|s| s.to_string());
    let sync = Expr::choice_all(items.into_iter().map(|s| match s {
        Symbol::Char(c) => Expr::Terminal(*c),
        Symbol::Token(name) => Expr::NonTerminal(name.clone()),
        Symbol::Any => Expr::Any,
    }));
    Ok(match sync {
        Some(sync) => Expr::star(Expr::seq(Expr::not(sync), Expr::Any)),
        None => Expr::star(Expr::Any),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelSelection {
    All,
    Only(Vec<Label>),
}

/// Adds FOLLOW-based recovery for the selected labels that have no recovery
/// expression yet. Each label synchronizes on what may follow its throw sites.
///
/// Explicitly named labels must be known and have a non-empty FOLLOW; under
/// [`LabelSelection::All`] labels without one are left alone.
pub fn with_default_recovery(
    g: &Grammar,
    selection: &LabelSelection,
) -> Result<Grammar, AnalysisError> {
    let sets = GrammarSets::compute(g);
    let mut out = g.clone();
    let (labels, strict): (Vec<Label>, bool) = match selection {
        LabelSelection::All => (g.labels.iter().cloned().collect(), false),
        LabelSelection::Only(labels) => (labels.clone(), true),
    };
    for label in labels {
        if !g.labels.contains(&label) {
            return Err(AnalysisError::UnknownLabel(label));
        }
        if g.recovery.contains_key(&label) {
            continue;
        }
        match default_recovery(&sets.label_follow(&label)) {
            Ok(expr) => {
                out.recovery.insert(label, expr);
            }
            Err(_) if !strict => {}
            Err(_) => return Err(AnalysisError::NoFollowForLabel(label)),
        }
    }
    Ok(out)
}
