use std::collections::BTreeMap;

use crate::model::{validate_grammar, Expr, Grammar, Label, ModelError, Rule, LAYOUT_RULE};

use super::lexer::{tokenize, Spanned, Tok};
use super::{DslError, GrammarSource, DEFAULT_LAYOUT};

/// A parsed sequence element: bare literals are spliced into the enclosing
/// sequence so that `'ab' X` and `'a' 'b' X` denote the same expression.
enum Item {
    Expr(Expr),
    Chars(Vec<char>),
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    /// The current token, unless it starts the next clause.
    fn peek_in_clause(&self) -> Option<&Tok> {
        self.peek().filter(|t| t.col != 1).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map(|t| (t.line, t.col)).unwrap_or(self.end)
    }

    fn error(&self, message: impl Into<String>) -> DslError {
        let (line, col) = self.here();
        DslError::Syntax {
            line,
            col,
            message: message.into(),
        }
    }

    fn unexpected(&self, wanted: &str) -> DslError {
        match self.peek_in_clause() {
            Some(tok) => self.error(format!("expected {wanted}, found {}", tok.describe())),
            None => self.error(format!("expected {wanted}")),
        }
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<(), DslError> {
        if self.peek_in_clause() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn ident(&mut self, wanted: &str) -> Result<String, DslError> {
        match self.peek_in_clause() {
            Some(Tok::Ident(name)) => {
                let name = name.clone();
                self.pos += 1;
                Ok(name)
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    fn label(&mut self) -> Result<Label, DslError> {
        let (line, col) = self.here();
        let name = self.ident("a label")?;
        make_label(name, line, col)
    }

    fn choice(&mut self) -> Result<Expr, DslError> {
        let mut alts = vec![self.sequence()?];
        while self.peek_in_clause() == Some(&Tok::Slash) {
            self.pos += 1;
            alts.push(self.sequence()?);
        }
        Ok(Expr::choice_all(alts).expect("at least one alternative"))
    }

    fn sequence(&mut self) -> Result<Expr, DslError> {
        let mut items = Vec::new();
        let mut any = false;
        while let Some(tok) = self.peek_in_clause() {
            if matches!(tok, Tok::Slash | Tok::RParen) {
                break;
            }
            any = true;
            match self.prefix()? {
                Item::Expr(e) => items.push(e),
                Item::Chars(chars) => items.extend(chars.into_iter().map(Expr::Terminal)),
            }
        }
        if !any {
            return Err(self.unexpected("an expression"));
        }
        Ok(Expr::seq_all(items))
    }

    fn prefix(&mut self) -> Result<Item, DslError> {
        if self.peek_in_clause() == Some(&Tok::Bang) {
            self.pos += 1;
            let inner = into_expr(self.prefix()?);
            return Ok(Item::Expr(Expr::not(inner)));
        }
        self.postfix()
    }

    fn postfix(&mut self) -> Result<Item, DslError> {
        let mut item = self.primary()?;
        loop {
            match self.peek_in_clause() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    item = Item::Expr(Expr::star(into_expr(item)));
                }
                Some(Tok::Caret) => {
                    self.pos += 1;
                    let label = self.label()?;
                    item = Item::Expr(into_expr(item).annotated(label));
                }
                _ => return Ok(item),
            }
        }
    }

    fn primary(&mut self) -> Result<Item, DslError> {
        let (line, col) = self.here();
        let Some(tok) = self.peek_in_clause().cloned() else {
            return Err(self.unexpected("an expression"));
        };
        self.pos += 1;
        Ok(match tok {
            Tok::Ident(name) => {
                if self.peek_in_clause() == Some(&Tok::Arrow) {
                    return Err(self.error("rule definitions must start at column 1"));
                }
                Item::Expr(Expr::NonTerminal(name))
            }
            Tok::Dot => Item::Expr(Expr::Any),
            Tok::Literal(text) => Item::Chars(text.chars().collect()),
            Tok::Class(chars) => Item::Expr(
                Expr::choice_all(chars.into_iter().map(Expr::Terminal)).expect("non-empty class"),
            ),
            Tok::Throw(name) => Item::Expr(Expr::Throw(make_label(name, line, col)?)),
            Tok::LParen => {
                if self.peek_in_clause() == Some(&Tok::RParen) {
                    self.pos += 1;
                    return Ok(Item::Expr(Expr::Empty));
                }
                let inner = self.choice()?;
                self.expect(Tok::RParen, "`)`")?;
                Item::Expr(inner)
            }
            other => {
                self.pos -= 1;
                return Err(self.error(format!(
                    "expected an expression, found {}",
                    other.describe()
                )));
            }
        })
    }
}

fn into_expr(item: Item) -> Expr {
    match item {
        Item::Expr(e) => e,
        Item::Chars(chars) => Expr::seq_all(chars.into_iter().map(Expr::Terminal)),
    }
}

fn make_label(name: String, line: usize, col: usize) -> Result<Label, DslError> {
    Label::new(name).map_err(|err| match err {
        ModelError::ReservedLabel => DslError::ReservedLabel { line },
        other => DslError::Syntax {
            line,
            col,
            message: other.to_string(),
        },
    })
}

pub(crate) fn parse(src: &GrammarSource) -> Result<Grammar, DslError> {
    let toks = tokenize(&src.text)?;
    let last_line = src.text.lines().count().max(1);
    let last_col = src.text.lines().last().map_or(1, |l| l.chars().count() + 1);
    let mut p = Parser {
        toks,
        pos: 0,
        end: (last_line, last_col),
    };

    let mut rules: Vec<Rule> = Vec::new();
    let mut recovery: BTreeMap<Label, (Expr, usize)> = BTreeMap::new();
    let mut messages: BTreeMap<Label, (String, usize)> = BTreeMap::new();

    while let Some(start) = p.peek().cloned() {
        if start.col != 1 {
            return Err(p.error("clauses must start at column 1"));
        }
        let line = start.line;
        let Tok::Ident(word) = &start.tok else {
            return Err(p.error(format!(
                "expected a rule, `recover` or `message`, found {}",
                start.tok.describe()
            )));
        };
        let is_rule = matches!(p.toks.get(p.pos + 1), Some(t) if t.tok == Tok::Arrow);
        p.pos += 1;
        if is_rule {
            p.pos += 1;
            let body = p.choice()?;
            if rules.iter().any(|r| &r.name == word) {
                return Err(DslError::DuplicateRule {
                    name: word.clone(),
                    line,
                });
            }
            rules.push(Rule::new(word.clone(), body));
        } else if word == "recover" {
            let label = p.label()?;
            p.expect(Tok::Arrow, "`<-`")?;
            let body = p.choice()?;
            if recovery.insert(label.clone(), (body, line)).is_some() {
                return Err(DslError::Syntax {
                    line,
                    col: 1,
                    message: format!("duplicate recover clause for {label}"),
                });
            }
        } else if word == "message" {
            let label = p.label()?;
            let text = match p.peek_in_clause() {
                Some(Tok::Literal(text)) => text.clone(),
                _ => return Err(p.unexpected("a quoted message")),
            };
            p.pos += 1;
            if messages.insert(label.clone(), (text, line)).is_some() {
                return Err(DslError::Syntax {
                    line,
                    col: 1,
                    message: format!("duplicate message clause for {label}"),
                });
            }
        } else {
            p.pos -= 1;
            return Err(p.error(format!("expected `<-` after rule name `{word}`")));
        }
        if let Some(tok) = p.peek_in_clause() {
            return Err(p.error(format!("unexpected {}", tok.describe())));
        }
    }

    if rules.iter().any(|r| r.is_lexical()) && !rules.iter().any(|r| r.name == LAYOUT_RULE) {
        let layout = parse(&GrammarSource::memory(format!(
            "{LAYOUT_RULE} <- {DEFAULT_LAYOUT}"
        )))?;
        rules.extend(layout.rules);
    }

    let mut g = Grammar::from_rules(rules);
    g.recovery = recovery
        .iter()
        .map(|(l, (e, _))| (l.clone(), e.clone()))
        .collect();
    g.labels = g.thrown_labels();
    let clause_lines = recovery
        .iter()
        .map(|(l, (_, line))| (l, *line))
        .chain(messages.iter().map(|(l, (_, line))| (l, *line)));
    for (label, line) in clause_lines {
        if !g.labels.contains(label) {
            return Err(DslError::UnknownLabel {
                label: label.clone(),
                line,
            });
        }
    }
    g.messages = messages.into_iter().map(|(l, (m, _))| (l, m)).collect();

    let diags = validate_grammar(&g);
    if !diags.is_empty() {
        return Err(DslError::Invalid(diags));
    }
    Ok(g)
}
