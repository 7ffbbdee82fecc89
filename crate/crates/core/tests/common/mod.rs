#![allow(dead_code)]

//! Test oracles: a naive PEG interpreter, a reference transcription of the
//! recovery semantics that also records every failure event, and seeded
//! generators for small random grammars and inputs.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use peg_recovery::analysis::check_well_formed;
use peg_recovery::model::{validate_grammar, Expr, Grammar, Label, Rule};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn corpus(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(rel)
}

pub fn read_corpus(rel: &str) -> String {
    std::fs::read_to_string(corpus(rel)).unwrap()
}

pub fn load_grammar(rel: &str) -> Grammar {
    use peg_recovery::dsl::{parse_grammar, GrammarSource};
    parse_grammar(&GrammarSource::from_path(corpus(rel)).unwrap()).unwrap()
}

pub const BUNDLED: [&str; 4] = [
    "grammars/tiny-java-plain.peg",
    "grammars/tiny-java.peg",
    "grammars/tiny-java-stmtb.peg",
    "grammars/tiny-java-guarded.peg",
];

pub fn label(s: &str) -> Label {
    Label::new(s).unwrap()
}

// ---------------------------------------------------------------------------
// Naive interpreter: Ford's PEG semantics plus label propagation. No farthest
// failure, no log, no recovery, no lexical conventions.

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Naive {
    Ok(usize),
    Fail,
    Label(String),
}

pub fn naive(g: &Grammar, e: &Expr, input: &[char], pos: usize) -> Naive {
    match e {
        Expr::Empty => Naive::Ok(pos),
        Expr::Any => {
            if pos < input.len() {
                Naive::Ok(pos + 1)
            } else {
                Naive::Fail
            }
        }
        Expr::Terminal(c) => {
            if input.get(pos) == Some(c) {
                Naive::Ok(pos + 1)
            } else {
                Naive::Fail
            }
        }
        Expr::NonTerminal(name) => {
            let rule = g
                .rules
                .iter()
                .find(|r| &r.name == name)
                .expect("defined rule");
            naive(g, &rule.body, input, pos)
        }
        Expr::Sequence(a, b) => match naive(g, a, input, pos) {
            Naive::Ok(mid) => naive(g, b, input, mid),
            other => other,
        },
        Expr::Choice(a, b) => match naive(g, a, input, pos) {
            Naive::Fail => naive(g, b, input, pos),
            other => other,
        },
        Expr::Star(inner) => {
            let mut cur = pos;
            loop {
                match naive(g, inner, input, cur) {
                    Naive::Ok(next) => cur = next,
                    Naive::Fail => return Naive::Ok(cur),
                    label => return label,
                }
            }
        }
        Expr::Not(inner) => match naive(g, inner, input, pos) {
            Naive::Ok(_) => Naive::Fail,
            _ => Naive::Ok(pos),
        },
        Expr::Throw(l) => Naive::Label(l.as_str().to_string()),
    }
}

// ---------------------------------------------------------------------------
// Reference semantics: a rule-by-rule transcription with explicit farthest
// records and log lists. Expected items use the engine's rendering ('a',
// "any character").

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RefRes {
    Ok(usize),
    Fail,
    Label(String),
}

pub type Far = Option<(usize, BTreeSet<String>)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefOut {
    pub res: RefRes,
    pub far: Far,
    pub log: Vec<(String, usize)>,
}

pub fn min(a: Far, b: Far) -> Far {
    match (a, b) {
        (None, b) => b,
        (a, None) => a,
        (Some((pa, ea)), Some((pb, eb))) => {
            if pa > pb {
                Some((pa, ea))
            } else if pb > pa {
                Some((pb, eb))
            } else {
                Some((pa, ea.union(&eb).cloned().collect()))
            }
        }
    }
}

pub struct Reference<'g> {
    pub g: &'g Grammar,
    /// Every primitive failure outside predicates, as (position, expected).
    pub events: Vec<(usize, Option<String>)>,
    in_predicate: usize,
}

impl<'g> Reference<'g> {
    pub fn new(g: &'g Grammar) -> Self {
        Reference {
            g,
            events: Vec::new(),
            in_predicate: 0,
        }
    }

    fn event(&mut self, pos: usize, item: Option<String>) {
        if self.in_predicate == 0 {
            self.events.push((pos, item));
        }
    }

    pub fn run(
        &mut self,
        e: &Expr,
        input: &[char],
        pos: usize,
        r: &BTreeMap<Label, Expr>,
    ) -> RefOut {
        let done = |res, far, log| RefOut { res, far, log };
        match e {
            Expr::Empty => done(RefRes::Ok(pos), None, vec![]),
            Expr::Any => {
                if pos < input.len() {
                    done(RefRes::Ok(pos + 1), None, vec![])
                } else {
                    self.event(pos, Some("any character".into()));
                    done(
                        RefRes::Fail,
                        Some((pos, ["any character".to_string()].into())),
                        vec![],
                    )
                }
            }
            Expr::Terminal(c) => {
                if input.get(pos) == Some(c) {
                    done(RefRes::Ok(pos + 1), None, vec![])
                } else {
                    let item = format!("'{}'", c.escape_default());
                    self.event(pos, Some(item.clone()));
                    done(RefRes::Fail, Some((pos, [item].into())), vec![])
                }
            }
            Expr::NonTerminal(name) => {
                let g = self.g;
                let rule = g.rules.iter().find(|r| &r.name == name).unwrap();
                self.run(&rule.body, input, pos, r)
            }
            Expr::Sequence(a, b) => {
                let left = self.run(a, input, pos, r);
                let RefRes::Ok(mid) = left.res else {
                    return left;
                };
                let right = self.run(b, input, mid, r);
                let mut log = left.log;
                log.extend(right.log);
                match right.res {
                    RefRes::Label(_) => done(right.res, right.far, log),
                    res => done(res, min(left.far, right.far), log),
                }
            }
            Expr::Choice(a, b) => {
                let left = self.run(a, input, pos, r);
                if left.res != RefRes::Fail {
                    return left;
                }
                let right = self.run(b, input, pos, r);
                let mut log = left.log;
                log.extend(right.log);
                match right.res {
                    RefRes::Label(_) => done(right.res, right.far, log),
                    res => done(res, min(left.far, right.far), log),
                }
            }
            Expr::Star(inner) => {
                let first = self.run(inner, input, pos, r);
                match first.res {
                    RefRes::Fail => done(RefRes::Ok(pos), first.far, first.log),
                    RefRes::Label(_) => first,
                    RefRes::Ok(next) => {
                        assert!(next > pos, "generated grammars are well-formed");
                        let rest = self.run(e, input, next, r);
                        let mut log = first.log;
                        log.extend(rest.log);
                        // Unlike a sequence, a label from a later iteration
                        // keeps the earlier iterations' farthest failure.
                        done(rest.res, min(first.far, rest.far), log)
                    }
                }
            }
            Expr::Not(inner) => {
                self.in_predicate += 1;
                let out = self.run(inner, input, pos, &BTreeMap::new());
                self.in_predicate -= 1;
                match out.res {
                    RefRes::Ok(_) => done(RefRes::Fail, None, vec![]),
                    _ => done(RefRes::Ok(pos), None, vec![]),
                }
            }
            Expr::Throw(l) => match r.get(l) {
                None => {
                    self.event(pos, None);
                    done(
                        RefRes::Label(l.as_str().into()),
                        Some((pos, BTreeSet::new())),
                        vec![],
                    )
                }
                Some(rec) => {
                    let out = self.run(rec, input, pos, r);
                    let mut log = vec![(l.as_str().to_string(), pos)];
                    log.extend(out.log);
                    done(out.res, out.far, log)
                }
            },
        }
    }
}

// ---------------------------------------------------------------------------
// Generators.

pub const TERMINALS: [char; 3] = ['a', 'b', 'c'];

#[derive(Debug, Clone, Copy)]
pub struct GenConfig {
    pub max_rules: usize,
    pub max_depth: usize,
    /// Number of distinct labels that may be thrown; 0 for throw-free grammars.
    pub labels: usize,
    /// Probability that a thrown label gets a recovery expression.
    pub recovery: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_rules: 5,
            max_depth: 4,
            labels: 0,
            recovery: 0.0,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rule_name(i: usize) -> String {
    format!("r{i}")
}

pub fn gen_expr(rng: &mut impl Rng, rules: usize, labels: usize, depth: usize) -> Expr {
    let leaf = depth == 0 || rng.random_bool(0.3);
    if leaf {
        let kinds = if labels > 0 { 5 } else { 4 };
        match rng.random_range(0..kinds) {
            0 => [Expr::Empty, Expr::Any].choose(rng).unwrap().clone(),
            1 | 2 => Expr::Terminal(*TERMINALS.choose(rng).unwrap()),
            3 => Expr::NonTerminal(rule_name(rng.random_range(0..rules))),
            _ => Expr::Throw(Label::new(format!("l{}", rng.random_range(0..labels))).unwrap()),
        }
    } else {
        let d = depth - 1;
        match rng.random_range(0..5) {
            0 | 1 => Expr::seq(
                gen_expr(rng, rules, labels, d),
                gen_expr(rng, rules, labels, d),
            ),
            2 => Expr::choice(
                gen_expr(rng, rules, labels, d),
                gen_expr(rng, rules, labels, d),
            ),
            3 => Expr::star(gen_expr(rng, rules, labels, d)),
            _ => Expr::not(gen_expr(rng, rules, labels, d)),
        }
    }
}

/// A random grammar that passes validation and the well-formedness check.
pub fn gen_grammar(rng: &mut impl Rng, cfg: GenConfig) -> Grammar {
    loop {
        let n = rng.random_range(1..=cfg.max_rules);
        let rules = (0..n)
            .map(|i| Rule::new(rule_name(i), gen_expr(rng, n, cfg.labels, cfg.max_depth)))
            .collect();
        let mut g = Grammar::from_rules(rules);
        for l in g.labels.clone() {
            if rng.random_bool(cfg.recovery) {
                let body = gen_expr(rng, n, cfg.labels, 2);
                g.recovery.insert(l, body);
            }
        }
        g.labels = g.thrown_labels();
        if g.recovery.keys().any(|l| !g.labels.contains(l)) {
            continue;
        }
        if validate_grammar(&g).is_empty() && check_well_formed(&g).is_empty() {
            return g;
        }
    }
}

pub fn gen_input(rng: &mut impl Rng, max_len: usize) -> String {
    let len = rng.random_range(0..=max_len);
    (0..len).map(|_| *TERMINALS.choose(rng).unwrap()).collect()
}

/// Every string over `alphabet` of length at most `max_len`.
pub fn all_strings(alphabet: &[char], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|s| alphabet.iter().map(move |c| format!("{s}{c}")))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}
