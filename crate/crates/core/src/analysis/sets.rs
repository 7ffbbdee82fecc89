//! FIRST and FOLLOW sets over token-level grammars.
//!
//! Lexical rules are atomic: a reference to `SEMI` contributes the item
//! `SEMI`, never the characters it matches. FOLLOW is computed from the
//! bodies of syntactic rules only; occurrences inside predicates are
//! lookahead and do not count as uses.

use std::collections::HashMap;
use std::fmt;

use indexmap::IndexSet;

use crate::engine::Symbol;
use crate::model::{Expr, Grammar, Label};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FirstSet {
    pub items: IndexSet<Symbol>,
    /// The expression can succeed without consuming input.
    pub nullable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FollowSet {
    pub items: IndexSet<Symbol>,
    /// End of input may follow.
    pub at_end: bool,
}

impl FollowSet {
    pub fn is_empty(&self) -> bool {
        self.items.is_empty() && !self.at_end
    }

    fn extend(&mut self, other: &FollowSet) {
        self.items.extend(other.items.iter().cloned());
        self.at_end |= other.at_end;
    }
}

fn braces<'a>(items: impl Iterator<Item = String> + 'a) -> String {
    format!("{{{}}}", items.collect::<Vec<_>>().join(", "))
}

impl fmt::Display for FirstSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let eps = self.nullable.then(|| "ε".to_string());
        f.write_str(&braces(self.items.iter().map(|s| s.to_string()).chain(eps)))
    }
}

impl fmt::Display for FollowSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let end = self.at_end.then(|| "<end>".to_string());
        f.write_str(&braces(self.items.iter().map(|s| s.to_string()).chain(end)))
    }
}

/// One use of a nonterminal: the `ordinal`-th reference in `rule`'s body,
/// counting in left-to-right order from zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Occurrence {
    pub rule: String,
    pub ordinal: usize,
}

/// Nullability, FIRST and FOLLOW for every rule of a grammar.
#[derive(Debug, Clone)]
pub struct GrammarSets<'g> {
    grammar: &'g Grammar,
    lexical: HashMap<&'g str, bool>,
    nullable: HashMap<&'g str, bool>,
    first: HashMap<&'g str, FirstSet>,
    follow: HashMap<&'g str, FollowSet>,
}

impl<'g> GrammarSets<'g> {
    pub fn compute(grammar: &'g Grammar) -> Self {
        let lexical = grammar
            .rules
            .iter()
            .map(|r| (r.name.as_str(), r.is_lexical()))
            .collect();
        let mut sets = GrammarSets {
            grammar,
            lexical,
            nullable: grammar
                .rules
                .iter()
                .map(|r| (r.name.as_str(), false))
                .collect(),
            first: HashMap::new(),
            follow: HashMap::new(),
        };

        loop {
            let next: HashMap<&str, bool> = grammar
                .rules
                .iter()
                .map(|r| (r.name.as_str(), sets.is_nullable(&r.body)))
                .collect();
            if next == sets.nullable {
                break;
            }
            sets.nullable = next;
        }

        // Recomputing every entry from scratch each round keeps item order
        // equal to a left-to-right reading of the final fixpoint.
        loop {
            let next: HashMap<&str, FirstSet> = grammar
                .rules
                .iter()
                .map(|r| (r.name.as_str(), sets.first(&r.body)))
                .collect();
            if next == sets.first {
                break;
            }
            sets.first = next;
        }

        loop {
            let mut next: HashMap<&str, FollowSet> = grammar
                .rules
                .iter()
                .map(|r| (r.name.as_str(), FollowSet::default()))
                .collect();
            if let Some(start) = next.get_mut(grammar.start.as_str()) {
                start.at_end = true;
            }
            for rule in grammar.rules.iter().filter(|r| !r.is_lexical()) {
                let after = sets
                    .follow
                    .get(rule.name.as_str())
                    .cloned()
                    .unwrap_or_default();
                sets.walk(&rule.body, &after, &mut |e, follow| {
                    if let Expr::NonTerminal(name) = e {
                        if let Some(entry) = next.get_mut(name.as_str()) {
                            entry.extend(follow);
                        }
                    }
                });
            }
            if next == sets.follow {
                break;
            }
            sets.follow = next;
        }
        sets
    }

    pub fn grammar(&self) -> &'g Grammar {
        self.grammar
    }

    fn rule_is_lexical(&self, name: &str) -> bool {
        self.lexical.get(name).copied().unwrap_or(false)
    }

    /// Whether `e` can succeed without consuming input, ignoring recovery.
    pub fn is_nullable(&self, e: &Expr) -> bool {
        match e {
            Expr::Empty | Expr::Star(_) | Expr::Not(_) => true,
            Expr::Any | Expr::Terminal(_) | Expr::Throw(_) => false,
            Expr::NonTerminal(name) => self.nullable.get(name.as_str()).copied().unwrap_or(false),
            Expr::Sequence(a, b) => self.is_nullable(a) && self.is_nullable(b),
            Expr::Choice(a, b) => self.is_nullable(a) || self.is_nullable(b),
        }
    }

    pub fn first(&self, e: &Expr) -> FirstSet {
        match e {
            Expr::Empty | Expr::Not(_) => FirstSet {
                items: IndexSet::new(),
                nullable: true,
            },
            Expr::Throw(_) => FirstSet::default(),
            Expr::Any => FirstSet {
                items: [Symbol::Any].into_iter().collect(),
                nullable: false,
            },
            Expr::Terminal(c) => FirstSet {
                items: [Symbol::Char(*c)].into_iter().collect(),
                nullable: false,
            },
            Expr::NonTerminal(name) if self.rule_is_lexical(name) => FirstSet {
                items: [Symbol::Token(name.clone())].into_iter().collect(),
                nullable: self.is_nullable(e),
            },
            Expr::NonTerminal(name) => self.first.get(name.as_str()).cloned().unwrap_or_default(),
            Expr::Sequence(a, b) => {
                let mut out = self.first(a);
                if out.nullable {
                    let rest = self.first(b);
                    out.items.extend(rest.items);
                    out.nullable = rest.nullable;
                }
                out
            }
            Expr::Choice(a, b) => {
                let mut out = self.first(a);
                let rest = self.first(b);
                out.items.extend(rest.items);
                out.nullable |= rest.nullable;
                out
            }
            Expr::Star(inner) => FirstSet {
                items: self.first(inner).items,
                nullable: true,
            },
        }
    }

    pub fn follow(&self, name: &str) -> FollowSet {
        self.follow.get(name).cloned().unwrap_or_default()
    }

    /// FOLLOW of each individual use of `name` in syntactic rule bodies.
    pub fn occurrence_follows(&self, name: &str) -> Vec<(Occurrence, FollowSet)> {
        let mut out = Vec::new();
        for rule in self.grammar.rules.iter().filter(|r| !r.is_lexical()) {
            let after = self.follow(&rule.name);
            let mut ordinal = 0;
            self.walk(&rule.body, &after, &mut |e, follow| {
                if matches!(e, Expr::NonTerminal(n) if n == name) {
                    let site = Occurrence {
                        rule: rule.name.clone(),
                        ordinal,
                    };
                    out.push((site, follow.clone()));
                    ordinal += 1;
                }
            });
        }
        out
    }

    /// What may follow the sites that throw `label`, unioned over all of them.
    pub fn label_follow(&self, label: &Label) -> FollowSet {
        let mut out = FollowSet::default();
        for rule in self.grammar.rules.iter().filter(|r| !r.is_lexical()) {
            let after = self.follow(&rule.name);
            self.walk(&rule.body, &after, &mut |e, follow| {
                if matches!(e, Expr::Throw(l) if l == label) {
                    out.extend(follow);
                }
            });
        }
        out
    }

    /// Visits every nonterminal and throw in `e` (outside predicates) with
    /// the set of items that can follow it, given that `after` follows `e`.
    fn walk(&self, e: &Expr, after: &FollowSet, visit: &mut dyn FnMut(&Expr, &FollowSet)) {
        match e {
            Expr::NonTerminal(_) | Expr::Throw(_) => visit(e, after),
            Expr::Sequence(a, b) => {
                let first_b = self.first(b);
                let mut after_a = FollowSet {
                    items: first_b.items,
                    at_end: false,
                };
                if first_b.nullable {
                    after_a.extend(after);
                }
                self.walk(a, &after_a, visit);
                self.walk(b, after, visit);
            }
            Expr::Choice(a, b) => {
                self.walk(a, after, visit);
                self.walk(b, after, visit);
            }
            Expr::Star(inner) => {
                let mut again = FollowSet {
                    items: self.first(inner).items,
                    at_end: false,
                };
                again.extend(after);
                self.walk(inner, &again, visit);
            }
            Expr::Not(_) | Expr::Empty | Expr::Any | Expr::Terminal(_) => {}
        }
    }
}

/// FIRST set of `e` in the context of `g`.
pub fn first_set(g: &Grammar, e: &Expr) -> FirstSet {
    GrammarSets::compute(g).first(e)
}

/// FOLLOW set of the nonterminal `name` in `g`.
pub fn follow_set(g: &Grammar, name: &str) -> FollowSet {
    GrammarSets::compute(g).follow(name)
}
