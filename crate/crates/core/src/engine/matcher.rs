//! Backtracking interpreter for labeled PEGs with recovery expressions.
//!
//! Every rule of the semantics concatenates the error logs of the
//! subexpressions it evaluated, left operand first, and predicates run with an
//! empty recovery map so they never add records. The log is therefore the
//! sequence of recoveries in evaluation order, which lets the matcher keep it
//! in one buffer instead of threading lists through each step.

use std::collections::HashMap;

use crate::model::{Expr, Grammar, Label, Rule, LAYOUT_RULE};

use super::failure::{min_failure, ErrorRecord, FarthestFailure, Position, Symbol};
use super::tree::{NodeKind, ParseTree};
use super::{EngineFault, MatchOptions};

const RED_ZONE: usize = 64 * 1024;
const STACK_CHUNK: usize = 2 * 1024 * 1024;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Res {
    Ok(usize),
    Fail,
    /// A label and the offset it was thrown at.
    Throw(Label, usize),
}

#[derive(Debug)]
pub(crate) struct Step {
    pub res: Res,
    pub farthest: FarthestFailure,
}

impl Step {
    fn fail(pos: usize, expected: Symbol) -> Step {
        Step {
            res: Res::Fail,
            farthest: FarthestFailure::at(Position(pos), [expected]),
        }
    }

    fn ok(pos: usize) -> Step {
        Step {
            res: Res::Ok(pos),
            farthest: FarthestFailure::none(),
        }
    }
}

type Nodes<'t> = Option<&'t mut Vec<ParseTree>>;

pub(crate) struct Matcher<'a> {
    grammar: &'a Grammar,
    rules: HashMap<&'a str, &'a Rule>,
    layout: Option<&'a Rule>,
    input: &'a str,
    opts: &'a MatchOptions,
    depth: usize,
    recovery_depth: usize,
    /// Nesting of lexical rule invocations; tokens are atomic at level 0.
    lexical: usize,
    pub log: Vec<ErrorRecord>,
}

impl<'a> Matcher<'a> {
    pub fn new(grammar: &'a Grammar, input: &'a str, opts: &'a MatchOptions) -> Self {
        let rules: HashMap<&str, &Rule> =
            grammar.rules.iter().map(|r| (r.name.as_str(), r)).collect();
        let layout = rules.get(LAYOUT_RULE).copied();
        Matcher {
            grammar,
            rules,
            layout,
            input,
            opts,
            depth: 0,
            recovery_depth: 0,
            lexical: 0,
            log: Vec::new(),
        }
    }

    pub fn eval(
        &mut self,
        e: &'a Expr,
        pos: usize,
        recover: bool,
        mut nodes: Nodes<'_>,
    ) -> Result<Step, EngineFault> {
        self.depth += 1;
        if self.depth > self.opts.limits.max_depth {
            return Err(EngineFault::DepthExceeded {
                limit: self.opts.limits.max_depth,
                at: Position(pos),
            });
        }
        let mark = nodes.as_ref().map(|n| n.len());
        let step = stacker::maybe_grow(RED_ZONE, STACK_CHUNK, || {
            self.eval_inner(e, pos, recover, nodes.as_deref_mut())
        })?;
        self.depth -= 1;
        if !matches!(step.res, Res::Ok(_)) {
            if let (Some(nodes), Some(mark)) = (nodes, mark) {
                nodes.truncate(mark);
            }
        }
        Ok(step)
    }

    fn eval_inner(
        &mut self,
        e: &'a Expr,
        pos: usize,
        recover: bool,
        nodes: Nodes<'_>,
    ) -> Result<Step, EngineFault> {
        match e {
            Expr::Empty => {
                push(nodes, ParseTree::leaf(NodeKind::Empty, pos, pos));
                Ok(Step::ok(pos))
            }
            Expr::Any => match self.input[pos..].chars().next() {
                Some(c) => {
                    let end = pos + c.len_utf8();
                    push(nodes, ParseTree::leaf(NodeKind::Terminal, pos, end));
                    Ok(Step::ok(end))
                }
                None => Ok(self.fail(pos, Symbol::Any)),
            },
            Expr::Terminal(a) => match self.input[pos..].chars().next() {
                Some(c) if c == *a => {
                    let end = pos + c.len_utf8();
                    push(nodes, ParseTree::leaf(NodeKind::Terminal, pos, end));
                    Ok(Step::ok(end))
                }
                _ => Ok(self.fail(pos, Symbol::Char(*a))),
            },
            Expr::NonTerminal(name) => self.nonterminal(name, pos, recover, nodes),
            Expr::Sequence(p1, p2) => {
                let mut nodes = nodes;
                let first = self.eval(p1, pos, recover, nodes.as_deref_mut())?;
                let Res::Ok(mid) = first.res else {
                    return Ok(first);
                };
                let second = self.eval(p2, mid, recover, nodes)?;
                Ok(match second.res {
                    Res::Throw(..) => second,
                    res => Step {
                        res,
                        farthest: min_failure(first.farthest, second.farthest),
                    },
                })
            }
            Expr::Choice(p1, p2) => {
                let mut nodes = nodes;
                let first = self.eval(p1, pos, recover, nodes.as_deref_mut())?;
                if first.res != Res::Fail {
                    return Ok(first);
                }
                let second = self.eval(p2, pos, recover, nodes)?;
                Ok(match second.res {
                    Res::Throw(..) => second,
                    res => Step {
                        res,
                        farthest: min_failure(first.farthest, second.farthest),
                    },
                })
            }
            Expr::Star(p) => {
                let mut items = nodes.is_some().then(Vec::new);
                let mut cur = pos;
                let mut farthest = FarthestFailure::none();
                loop {
                    let step = self.eval(p, cur, recover, items.as_mut())?;
                    farthest.merge(step.farthest);
                    match step.res {
                        Res::Ok(next) if next == cur => {
                            return Err(EngineFault::EmptyRepetition { at: Position(cur) })
                        }
                        Res::Ok(next) => cur = next,
                        Res::Fail => break,
                        thrown @ Res::Throw(..) => {
                            return Ok(Step {
                                res: thrown,
                                farthest,
                            })
                        }
                    }
                }
                if let (Some(nodes), Some(items)) = (nodes, items) {
                    nodes.push(ParseTree::node(NodeKind::StarList, pos, cur, items));
                }
                Ok(Step {
                    res: Res::Ok(cur),
                    farthest,
                })
            }
            Expr::Not(p) => {
                let inner = self.eval(p, pos, false, None)?;
                let res = match inner.res {
                    Res::Ok(_) => Res::Fail,
                    Res::Fail | Res::Throw(..) => Res::Ok(pos),
                };
                Ok(Step {
                    res,
                    farthest: FarthestFailure::none(),
                })
            }
            Expr::Throw(label) => self.throw(label, pos, recover, nodes),
        }
    }

    /// A primitive failure. Inside a token the farthest failure is replaced
    /// by the token itself, so it is not tracked there.
    fn fail(&self, pos: usize, expected: Symbol) -> Step {
        if self.lexical > 0 {
            Step {
                res: Res::Fail,
                farthest: FarthestFailure::none(),
            }
        } else {
            Step::fail(pos, expected)
        }
    }

    fn nonterminal(
        &mut self,
        name: &str,
        pos: usize,
        recover: bool,
        nodes: Nodes<'_>,
    ) -> Result<Step, EngineFault> {
        let rule = *self
            .rules
            .get(name)
            .ok_or_else(|| EngineFault::UnknownRule(name.to_string()))?;
        if rule.is_lexical() && self.lexical == 0 {
            return self.token(rule, pos, recover, nodes);
        }
        let mut children = nodes.is_some().then(Vec::new);
        let step = self.eval(&rule.body, pos, recover, children.as_mut())?;
        if let (Res::Ok(end), Some(nodes), Some(children)) = (&step.res, nodes, children) {
            let kind = NodeKind::NonTerminal(rule.name.clone());
            nodes.push(ParseTree::node(kind, pos, *end, children));
        }
        Ok(step)
    }

    /// A lexical rule used from syntactic context: the body followed by the
    /// layout rule, reported as a single expected item on failure.
    fn token(
        &mut self,
        rule: &'a Rule,
        pos: usize,
        recover: bool,
        nodes: Nodes<'_>,
    ) -> Result<Step, EngineFault> {
        self.lexical += 1;
        let mut step = self.eval(&rule.body, pos, recover, None)?;
        if let (Res::Ok(end), Some(layout)) = (&step.res, self.layout) {
            if layout.name != rule.name {
                let after = self.eval(&layout.body, *end, recover, None)?;
                step = match after.res {
                    Res::Throw(..) => after,
                    res => Step {
                        res,
                        farthest: min_failure(step.farthest, after.farthest),
                    },
                };
            }
        }
        self.lexical -= 1;
        Ok(match step.res {
            Res::Ok(end) => {
                let kind = NodeKind::NonTerminal(rule.name.clone());
                push(nodes, ParseTree::leaf(kind, pos, end));
                Step::ok(end)
            }
            Res::Fail => Step::fail(pos, Symbol::Token(rule.name.clone())),
            Res::Throw(..) => step,
        })
    }

    fn throw(
        &mut self,
        label: &'a Label,
        pos: usize,
        recover: bool,
        nodes: Nodes<'_>,
    ) -> Result<Step, EngineFault> {
        let recovery = if recover {
            self.grammar.recovery.get(label)
        } else {
            None
        };
        let Some(recovery) = recovery else {
            return Ok(Step {
                res: Res::Throw(label.clone(), pos),
                farthest: FarthestFailure::at(Position(pos), []),
            });
        };

        self.log.push(ErrorRecord {
            label: label.clone(),
            at: Position(pos),
        });
        self.recovery_depth += 1;
        if self.recovery_depth > self.opts.limits.max_recovery_depth {
            return Err(EngineFault::RecoveryDepthExceeded {
                limit: self.opts.limits.max_recovery_depth,
                label: label.clone(),
                at: Position(pos),
            });
        }
        let mut children = nodes.is_some().then(Vec::new);
        let step = self.eval(recovery, pos, true, children.as_mut())?;
        self.recovery_depth -= 1;
        if let (Res::Ok(end), Some(nodes), Some(children)) = (&step.res, nodes, children) {
            let kind = NodeKind::Recovery(label.clone());
            nodes.push(ParseTree::node(kind, pos, *end, children));
        }
        Ok(step)
    }
}

fn push(nodes: Nodes<'_>, node: ParseTree) {
    if let Some(nodes) = nodes {
        nodes.push(node);
    }
}
