//! Conservative termination checks: no left recursion and no repetition of
//! an expression that can succeed without consuming input.
//!
//! Both checks take recovery into account. A throw with a recovery
//! expression runs that expression at the same position, so it can succeed
//! empty or call nonterminals without consuming input. Inside predicates the
//! recovery map is empty and throws never succeed.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::model::{Expr, Grammar, Site};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WellFormedDiagnostic {
    /// `cycle` starts and ends at `site`.
    LeftRecursion {
        site: Site,
        cycle: Vec<Site>,
    },
    NullableStar {
        site: Site,
    },
}

impl fmt::Display for WellFormedDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::LeftRecursion { site, cycle } => {
                let path: Vec<String> = cycle.iter().map(|s| s.to_string()).collect();
                write!(f, "left-recursion at {site}: {}", path.join(" -> "))
            }
            Self::NullableStar { site } => write!(f, "nullable-star in {site}"),
        }
    }
}

struct Checker<'g> {
    g: &'g Grammar,
    bodies: HashMap<Site, &'g Expr>,
    /// Can succeed empty, with and without recovery.
    empty: HashMap<Site, [bool; 2]>,
}

impl<'g> Checker<'g> {
    fn new(g: &'g Grammar) -> Self {
        let bodies: HashMap<Site, &Expr> = g
            .rules
            .iter()
            .map(|r| (Site::Rule(r.name.clone()), &r.body))
            .chain(
                g.recovery
                    .iter()
                    .map(|(l, e)| (Site::Recovery(l.clone()), e)),
            )
            .collect();
        let mut checker = Checker {
            g,
            empty: bodies.keys().map(|s| (s.clone(), [false; 2])).collect(),
            bodies,
        };
        loop {
            let next: HashMap<Site, [bool; 2]> = checker
                .bodies
                .iter()
                .map(|(s, e)| {
                    (
                        s.clone(),
                        [
                            checker.succeeds_empty(e, false),
                            checker.succeeds_empty(e, true),
                        ],
                    )
                })
                .collect();
            if next == checker.empty {
                break;
            }
            checker.empty = next;
        }
        checker
    }

    fn site_empty(&self, site: &Site, recover: bool) -> bool {
        self.empty
            .get(site)
            .map(|e| e[recover as usize])
            .unwrap_or(false)
    }

    fn succeeds_empty(&self, e: &Expr, recover: bool) -> bool {
        match e {
            Expr::Empty | Expr::Star(_) | Expr::Not(_) => true,
            Expr::Any | Expr::Terminal(_) => false,
            Expr::NonTerminal(name) => self.site_empty(&Site::Rule(name.clone()), recover),
            Expr::Throw(l) => {
                recover
                    && self.g.recovery.contains_key(l)
                    && self.site_empty(&Site::Recovery(l.clone()), true)
            }
            Expr::Sequence(a, b) => {
                self.succeeds_empty(a, recover) && self.succeeds_empty(b, recover)
            }
            Expr::Choice(a, b) => {
                self.succeeds_empty(a, recover) || self.succeeds_empty(b, recover)
            }
        }
    }

    /// Sites that `e` may enter without consuming input.
    fn calls_at_start(&self, e: &Expr, recover: bool, out: &mut BTreeSet<Site>) {
        match e {
            Expr::Empty | Expr::Any | Expr::Terminal(_) => {}
            Expr::NonTerminal(name) => {
                out.insert(Site::Rule(name.clone()));
            }
            Expr::Throw(l) => {
                if recover && self.g.recovery.contains_key(l) {
                    out.insert(Site::Recovery(l.clone()));
                }
            }
            Expr::Sequence(a, b) => {
                self.calls_at_start(a, recover, out);
                if self.succeeds_empty(a, recover) {
                    self.calls_at_start(b, recover, out);
                }
            }
            Expr::Choice(a, b) => {
                self.calls_at_start(a, recover, out);
                self.calls_at_start(b, recover, out);
            }
            Expr::Star(inner) => self.calls_at_start(inner, recover, out),
            Expr::Not(inner) => self.calls_at_start(inner, false, out),
        }
    }

    fn nullable_stars(&self, e: &Expr, recover: bool) -> bool {
        match e {
            Expr::Star(inner) => {
                self.succeeds_empty(inner, recover) || self.nullable_stars(inner, recover)
            }
            Expr::Sequence(a, b) | Expr::Choice(a, b) => {
                self.nullable_stars(a, recover) || self.nullable_stars(b, recover)
            }
            Expr::Not(inner) => self.nullable_stars(inner, false),
            _ => false,
        }
    }

    fn edges(&self, site: &Site) -> BTreeSet<Site> {
        let mut out = BTreeSet::new();
        if let Some(body) = self.bodies.get(site) {
            self.calls_at_start(body, true, &mut out);
        }
        // A lexical rule may run the layout rule at its start position.
        if let Site::Rule(name) = site {
            let lexical = self.g.rule(name).is_some_and(|r| r.is_lexical());
            let layout = crate::model::LAYOUT_RULE;
            if lexical
                && name != layout
                && self.site_empty(site, true)
                && self.g.rule(layout).is_some()
            {
                out.insert(Site::Rule(layout.to_string()));
            }
        }
        out
    }

    /// Shortest path from `from` back to itself, if any.
    fn cycle_through(&self, from: &Site) -> Option<Vec<Site>> {
        let mut parent: HashMap<Site, Site> = HashMap::new();
        let mut queue = std::collections::VecDeque::new();
        for next in self.edges(from) {
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), from.clone());
                queue.push_back(next);
            }
        }
        while let Some(site) = queue.pop_front() {
            if &site == from {
                let mut path = vec![from.clone()];
                let mut cur = parent[from].clone();
                while &cur != from {
                    path.push(cur.clone());
                    cur = parent[&cur].clone();
                }
                path.push(from.clone());
                path.reverse();
                return Some(path);
            }
            for next in self.edges(&site) {
                if !parent.contains_key(&next) {
                    parent.insert(next.clone(), site.clone());
                    queue.push_back(next);
                }
            }
        }
        None
    }
}

/// Ford-style conservative well-formedness over rule bodies and recovery
/// expressions. Empty means parsing with `g` always terminates.
pub fn check_well_formed(g: &Grammar) -> Vec<WellFormedDiagnostic> {
    let checker = Checker::new(g);
    let sites: Vec<Site> = g
        .rules
        .iter()
        .map(|r| Site::Rule(r.name.clone()))
        .chain(g.recovery.keys().map(|l| Site::Recovery(l.clone())))
        .collect();

    let mut diags = Vec::new();
    let mut reported: BTreeSet<Site> = BTreeSet::new();
    for site in &sites {
        if reported.contains(site) {
            continue;
        }
        if let Some(cycle) = checker.cycle_through(site) {
            reported.extend(cycle.iter().cloned());
            diags.push(WellFormedDiagnostic::LeftRecursion {
                site: site.clone(),
                cycle,
            });
        }
    }
    for site in &sites {
        if checker.nullable_stars(checker.bodies[site], true) {
            diags.push(WellFormedDiagnostic::NullableStar { site: site.clone() });
        }
    }
    diags
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Label, Rule};

    fn label(s: &str) -> Label {
        Label::new(s).unwrap()
    }

    #[test]
    fn direct_left_recursion() {
        let g = Grammar::from_rules(vec![Rule::new("A", Expr::seq(Expr::nt("A"), Expr::t('a')))]);
        let diags = check_well_formed(&g);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].to_string(), "left-recursion at A: A -> A");
    }

    #[test]
    fn indirect_left_recursion_through_nullable_prefix() {
        let g = Grammar::from_rules(vec![
            Rule::new("a", Expr::seq(Expr::star(Expr::t('x')), Expr::nt("b"))),
            Rule::new("b", Expr::seq(Expr::nt("a"), Expr::t('y'))),
        ]);
        let diags = check_well_formed(&g);
        assert_eq!(diags.len(), 1, "{diags:?}");
        assert_eq!(diags[0].to_string(), "left-recursion at a: a -> b -> a");
    }

    #[test]
    fn nullable_star() {
        let g = Grammar::from_rules(vec![Rule::new("B", Expr::star(Expr::Empty))]);
        assert_eq!(
            check_well_formed(&g),
            vec![WellFormedDiagnostic::NullableStar {
                site: Site::Rule("B".into())
            }]
        );
    }

    #[test]
    fn consuming_recursion_is_fine() {
        let g = Grammar::from_rules(vec![Rule::new(
            "a",
            Expr::choice(Expr::seq(Expr::t('x'), Expr::nt("a")), Expr::Empty),
        )]);
        assert!(check_well_formed(&g).is_empty());
    }

    #[test]
    fn recovery_that_succeeds_empty_makes_a_star_nullable() {
        let l = label("l");
        let body = Expr::star(Expr::t('a').annotated(l.clone()));
        let plain = Grammar::from_rules(vec![Rule::new("s", body)]);
        assert!(check_well_formed(&plain).is_empty());
        let recovered = plain.with_recovery(l, Expr::Empty);
        assert_eq!(
            check_well_formed(&recovered),
            vec![WellFormedDiagnostic::NullableStar {
                site: Site::Rule("s".into())
            }]
        );
    }

    #[test]
    fn throws_inside_predicates_do_not_recover() {
        let l = label("l");
        let body = Expr::star(Expr::seq(Expr::not(Expr::Throw(l.clone())), Expr::t('a')));
        let g = Grammar::from_rules(vec![Rule::new("s", body)]).with_recovery(l, Expr::Empty);
        assert!(check_well_formed(&g).is_empty());
    }

    #[test]
    fn recovery_cycles_are_left_recursion() {
        let l = label("l");
        let g = Grammar::from_rules(vec![Rule::new("s", Expr::Throw(l.clone()))])
            .with_recovery(l.clone(), Expr::Throw(l));
        let diags = check_well_formed(&g);
        assert_eq!(diags.len(), 1);
        assert_eq!(
            diags[0].to_string(),
            "left-recursion at recovery for l: recovery for l -> recovery for l"
        );
    }
}
