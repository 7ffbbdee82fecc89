//! Grammar and parsing-expression data model.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

/// Name of the ordinary backtracking failure. Never a valid [`Label`].
pub const FAIL: &str = "fail";

/// Name of the layout rule that lexical rules skip after themselves.
pub const LAYOUT_RULE: &str = "SKIP";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("`fail` is reserved and cannot be used as a label")]
    ReservedLabel,
    #[error("label names must be non-empty identifiers, got {0:?}")]
    InvalidLabel(String),
}

/// A failure label thrown by `%{label}` / `[p]^label`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(String);

impl Label {
    pub fn new(name: impl Into<String>) -> Result<Self, ModelError> {
        let name = name.into();
        if name == FAIL {
            return Err(ModelError::ReservedLabel);
        }
        if !is_identifier(&name) {
            return Err(ModelError::InvalidLabel(name));
        }
        Ok(Label(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl serde::Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Abstract syntax of parsing expressions.
///
/// Nonterminals are referenced by name, so an `Expr` is always a finite tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Empty,
    /// Matches any single character.
    Any,
    Terminal(char),
    NonTerminal(String),
    Sequence(Box<Expr>, Box<Expr>),
    Choice(Box<Expr>, Box<Expr>),
    Star(Box<Expr>),
    Not(Box<Expr>),
    Throw(Label),
}

impl Expr {
    pub fn t(c: char) -> Expr {
        Expr::Terminal(c)
    }

    pub fn nt(name: impl Into<String>) -> Expr {
        Expr::NonTerminal(name.into())
    }

    pub fn seq(left: Expr, right: Expr) -> Expr {
        Expr::Sequence(Box::new(left), Box::new(right))
    }

    pub fn choice(left: Expr, right: Expr) -> Expr {
        Expr::Choice(Box::new(left), Box::new(right))
    }

    pub fn star(inner: Expr) -> Expr {
        Expr::Star(Box::new(inner))
    }

    pub fn not(inner: Expr) -> Expr {
        Expr::Not(Box::new(inner))
    }

    pub fn throw(label: Label) -> Expr {
        Expr::Throw(label)
    }

    /// Right-folded sequence; an empty iterator yields [`Expr::Empty`].
    pub fn seq_all(items: impl IntoIterator<Item = Expr>) -> Expr {
        fold_right(items, Expr::seq).unwrap_or(Expr::Empty)
    }

    /// Right-folded ordered choice. `None` when `items` is empty.
    pub fn choice_all(items: impl IntoIterator<Item = Expr>) -> Option<Expr> {
        fold_right(items, Expr::choice)
    }

    /// A literal string as a right-folded sequence of terminals.
    pub fn literal(text: &str) -> Expr {
        Expr::seq_all(text.chars().map(Expr::Terminal))
    }

    /// `[self]^label`, i.e. `self / %{label}`.
    pub fn annotated(self, label: Label) -> Expr {
        Expr::choice(self, Expr::Throw(label))
    }

    /// Visits this expression and every subexpression, parents first.
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a Expr)) {
        visit(self);
        match self {
            Expr::Sequence(a, b) | Expr::Choice(a, b) => {
                a.walk(visit);
                b.walk(visit);
            }
            Expr::Star(e) | Expr::Not(e) => e.walk(visit),
            Expr::Empty | Expr::Any | Expr::Terminal(_) | Expr::NonTerminal(_) | Expr::Throw(_) => {
            }
        }
    }

    pub fn contains_throw(&self) -> bool {
        let mut found = false;
        self.walk(&mut |e| found |= matches!(e, Expr::Throw(_)));
        found
    }
}

fn fold_right(items: impl IntoIterator<Item = Expr>, join: fn(Expr, Expr) -> Expr) -> Option<Expr> {
    let mut items: Vec<Expr> = items.into_iter().collect();
    let mut acc = items.pop()?;
    while let Some(prev) = items.pop() {
        acc = join(prev, acc);
    }
    Some(acc)
}

/// Desugars `[inner]^label` into `inner / %{label}`.
pub fn desugar_annotation(inner: Expr, label: &str) -> Result<Expr, ModelError> {
    Ok(inner.annotated(Label::new(label)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    Syntactic,
    /// Token rule: matched atomically and followed by the layout rule.
    Lexical,
}

impl RuleKind {
    /// All-uppercase names (`SEMI`, `LCUR`, `SKIP`) denote lexical rules.
    pub fn for_name(name: &str) -> RuleKind {
        let has_upper = name.chars().any(|c| c.is_ascii_uppercase());
        let all_upper = name
            .chars()
            .all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_');
        if has_upper && all_upper {
            RuleKind::Lexical
        } else {
            RuleKind::Syntactic
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub body: Expr,
    pub kind: RuleKind,
}

impl Rule {
    /// A rule whose kind follows the naming convention.
    pub fn new(name: impl Into<String>, body: Expr) -> Rule {
        let name = name.into();
        let kind = RuleKind::for_name(&name);
        Rule { name, body, kind }
    }

    pub fn is_lexical(&self) -> bool {
        self.kind == RuleKind::Lexical
    }
}

/// A labeled PEG together with its recovery map and error messages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    pub rules: Vec<Rule>,
    pub start: String,
    pub labels: BTreeSet<Label>,
    pub recovery: BTreeMap<Label, Expr>,
    pub messages: BTreeMap<Label, String>,
}

impl Grammar {
    /// A grammar whose start symbol is the first rule and whose label set is
    /// every label thrown by a rule body.
    pub fn from_rules(rules: Vec<Rule>) -> Grammar {
        let start = rules.first().map(|r| r.name.clone()).unwrap_or_default();
        let mut g = Grammar {
            rules,
            start,
            labels: BTreeSet::new(),
            recovery: BTreeMap::new(),
            messages: BTreeMap::new(),
        };
        g.labels = g.thrown_labels();
        g
    }

    pub fn rule(&self, name: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn with_recovery(mut self, label: Label, expr: Expr) -> Grammar {
        self.labels.insert(label.clone());
        self.recovery.insert(label, expr);
        self
    }

    pub fn with_message(mut self, label: Label, message: impl Into<String>) -> Grammar {
        self.messages.insert(label, message.into());
        self
    }

    /// The same grammar with an empty recovery map.
    pub fn without_recovery(&self) -> Grammar {
        Grammar {
            recovery: BTreeMap::new(),
            ..self.clone()
        }
    }

    /// Labels thrown anywhere in rule bodies or recovery expressions.
    pub fn thrown_labels(&self) -> BTreeSet<Label> {
        let mut out = BTreeSet::new();
        let bodies = self
            .rules
            .iter()
            .map(|r| &r.body)
            .chain(self.recovery.values());
        for body in bodies {
            body.walk(&mut |e| {
                if let Expr::Throw(l) = e {
                    out.insert(l.clone());
                }
            });
        }
        out
    }
}

/// Where a subexpression lives inside a grammar.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Site {
    Rule(String),
    Recovery(Label),
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Site::Rule(name) => write!(f, "{name}"),
            Site::Recovery(label) => write!(f, "recovery for {label}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructuralDiagnostic {
    UndefinedNonTerminal { name: String, site: Site },
    UndefinedStart(String),
    DuplicateRule(String),
    UndeclaredLabel { label: Label, site: Site },
    UnknownRecoveryLabel(Label),
    UnknownMessageLabel(Label),
}

impl fmt::Display for StructuralDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UndefinedNonTerminal { name, site } => {
                write!(f, "undefined-nonterminal {name} (in {site})")
            }
            Self::UndefinedStart(name) => write!(f, "undefined-start {name}"),
            Self::DuplicateRule(name) => write!(f, "duplicate-rule {name}"),
            Self::UndeclaredLabel { label, site } => {
                write!(f, "undeclared-label {label} (in {site})")
            }
            Self::UnknownRecoveryLabel(label) => write!(f, "unknown-recovery-label {label}"),
            Self::UnknownMessageLabel(label) => write!(f, "unknown-message-label {label}"),
        }
    }
}

/// Checks the structural invariants of `g`. An empty result means every
/// nonterminal and label lookup made while matching will succeed.
pub fn validate_grammar(g: &Grammar) -> Vec<StructuralDiagnostic> {
    let mut diags = Vec::new();
    let mut seen = HashSet::new();
    for rule in &g.rules {
        if !seen.insert(rule.name.as_str()) {
            diags.push(StructuralDiagnostic::DuplicateRule(rule.name.clone()));
        }
    }
    if !seen.contains(g.start.as_str()) {
        diags.push(StructuralDiagnostic::UndefinedStart(g.start.clone()));
    }

    let sites = g
        .rules
        .iter()
        .map(|r| (Site::Rule(r.name.clone()), &r.body))
        .chain(
            g.recovery
                .iter()
                .map(|(l, e)| (Site::Recovery(l.clone()), e)),
        );
    for (site, body) in sites {
        body.walk(&mut |e| match e {
            Expr::NonTerminal(name) if !seen.contains(name.as_str()) => {
                diags.push(StructuralDiagnostic::UndefinedNonTerminal {
                    name: name.clone(),
                    site: site.clone(),
                });
            }
            Expr::Throw(label) if !g.labels.contains(label) => {
                diags.push(StructuralDiagnostic::UndeclaredLabel {
                    label: label.clone(),
                    site: site.clone(),
                });
            }
            _ => {}
        });
    }

    for label in g.recovery.keys() {
        if !g.labels.contains(label) {
            diags.push(StructuralDiagnostic::UnknownRecoveryLabel(label.clone()));
        }
    }
    for label in g.messages.keys() {
        if !g.labels.contains(label) {
            diags.push(StructuralDiagnostic::UnknownMessageLabel(label.clone()));
        }
    }
    diags
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(s: &str) -> Label {
        Label::new(s).unwrap()
    }

    #[test]
    fn fail_is_not_a_label() {
        assert_eq!(Label::new("fail"), Err(ModelError::ReservedLabel));
        assert!(matches!(Label::new(""), Err(ModelError::InvalidLabel(_))));
        assert!(matches!(
            Label::new("a b"),
            Err(ModelError::InvalidLabel(_))
        ));
        assert!(Label::new("semia").is_ok());
    }

    #[test]
    fn annotation_desugars_to_choice_with_throw() {
        assert_eq!(
            desugar_annotation(Expr::nt("SEMI"), "semia").unwrap(),
            Expr::choice(Expr::nt("SEMI"), Expr::Throw(label("semia")))
        );
        assert_eq!(
            desugar_annotation(Expr::Empty, "x").unwrap(),
            Expr::choice(Expr::Empty, Expr::Throw(label("x")))
        );
        assert_eq!(
            desugar_annotation(Expr::nt("Exp"), "condw").unwrap(),
            Expr::choice(Expr::nt("Exp"), Expr::Throw(label("condw")))
        );
        assert_eq!(
            desugar_annotation(Expr::Empty, "fail"),
            Err(ModelError::ReservedLabel)
        );
    }

    #[test]
    fn annotation_is_injective() {
        let a = desugar_annotation(Expr::t('a'), "x").unwrap();
        let b = desugar_annotation(Expr::t('b'), "x").unwrap();
        let c = desugar_annotation(Expr::t('a'), "y").unwrap();
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_ne!(b, c);
    }

    #[test]
    fn rule_kind_from_name() {
        assert_eq!(RuleKind::for_name("SEMI"), RuleKind::Lexical);
        assert_eq!(RuleKind::for_name("NUMBER_2"), RuleKind::Lexical);
        assert_eq!(RuleKind::for_name("BlockStmt"), RuleKind::Syntactic);
        assert_eq!(RuleKind::for_name("SkipToRCUR"), RuleKind::Syntactic);
        assert_eq!(RuleKind::for_name("exp"), RuleKind::Syntactic);
    }

    #[test]
    fn folds_are_right_nested() {
        assert_eq!(
            Expr::literal("abc"),
            Expr::seq(Expr::t('a'), Expr::seq(Expr::t('b'), Expr::t('c')))
        );
        assert_eq!(Expr::literal(""), Expr::Empty);
        assert_eq!(Expr::choice_all([]), None);
    }

    #[test]
    fn undefined_nonterminal_is_reported() {
        let g = Grammar::from_rules(vec![Rule::new("s", Expr::nt("Foo"))]);
        assert_eq!(
            validate_grammar(&g),
            vec![StructuralDiagnostic::UndefinedNonTerminal {
                name: "Foo".into(),
                site: Site::Rule("s".into())
            }]
        );
    }

    #[test]
    fn recovery_for_unknown_label_is_reported() {
        let mut g = Grammar::from_rules(vec![Rule::new("s", Expr::t('a'))]);
        g.recovery.insert(label("nope"), Expr::Empty);
        assert_eq!(
            validate_grammar(&g),
            vec![StructuralDiagnostic::UnknownRecoveryLabel(label("nope"))]
        );
    }

    #[test]
    fn duplicate_rules_and_unknown_messages() {
        let mut g = Grammar::from_rules(vec![
            Rule::new("s", Expr::t('a')),
            Rule::new("s", Expr::t('b')),
        ]);
        g.messages.insert(label("m"), "msg".into());
        let diags = validate_grammar(&g);
        assert!(diags.contains(&StructuralDiagnostic::DuplicateRule("s".into())));
        assert!(diags.contains(&StructuralDiagnostic::UnknownMessageLabel(label("m"))));
    }

    #[test]
    fn thrown_labels_are_declared_by_from_rules() {
        let g = Grammar::from_rules(vec![Rule::new("s", Expr::t('a').annotated(label("la")))]);
        assert!(g.labels.contains(&label("la")));
        assert!(validate_grammar(&g).is_empty());
    }
}
