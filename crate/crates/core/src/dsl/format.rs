use std::fmt::Write;

use crate::model::{Expr, Grammar};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    Choice,
    Sequence,
    Prefix,
    Postfix,
}

fn as_annotation(e: &Expr) -> Option<(&Expr, &crate::model::Label)> {
    match e {
        Expr::Choice(inner, rhs) => match rhs.as_ref() {
            Expr::Throw(label) => Some((inner, label)),
            _ => None,
        },
        _ => None,
    }
}

/// Elements of a right-nested chain built by `split`.
fn spine<'e>(
    e: &'e Expr,
    split: impl Fn(&'e Expr) -> Option<(&'e Expr, &'e Expr)>,
) -> Vec<&'e Expr> {
    let mut out = Vec::new();
    let mut cur = e;
    while let Some((head, rest)) = split(cur) {
        out.push(head);
        cur = rest;
    }
    out.push(cur);
    out
}

fn seq_parts(e: &Expr) -> Option<(&Expr, &Expr)> {
    match e {
        Expr::Sequence(a, b) => Some((a, b)),
        _ => None,
    }
}

fn choice_parts(e: &Expr) -> Option<(&Expr, &Expr)> {
    match e {
        Expr::Choice(a, b) if as_annotation(e).is_none() => Some((a, b)),
        _ => None,
    }
}

fn terminals(items: &[&Expr]) -> Option<Vec<char>> {
    items
        .iter()
        .map(|e| match e {
            Expr::Terminal(c) => Some(*c),
            _ => None,
        })
        .collect()
}

fn escape(c: char, special: &[char], out: &mut String) {
    match c {
        '\n' => out.push_str("\\n"),
        '\r' => out.push_str("\\r"),
        '\t' => out.push_str("\\t"),
        '\\' => out.push_str("\\\\"),
        c if special.contains(&c) => {
            out.push('\\');
            out.push(c);
        }
        c if c.is_control() => {
            let _ = write!(out, "\\u{{{:x}}}", c as u32);
        }
        c => out.push(c),
    }
}

fn literal(chars: &[char]) -> String {
    let mut out = String::from("'");
    for &c in chars {
        escape(c, &['\''], &mut out);
    }
    out.push('\'');
    out
}

fn class(chars: &[char]) -> String {
    let mut out = String::from("[");
    for &c in chars {
        escape(c, &[']', '-', '['], &mut out);
    }
    out.push(']');
    out
}

/// Prints `e` so it can appear where an expression of `ctx` precedence is
/// expected, adding parentheses when needed.
fn print(e: &Expr, ctx: Level) -> String {
    let (text, level) = match e {
        Expr::Empty => ("()".to_string(), Level::Postfix),
        Expr::Any => (".".to_string(), Level::Postfix),
        Expr::Terminal(c) => (literal(&[*c]), Level::Postfix),
        Expr::NonTerminal(name) => (name.clone(), Level::Postfix),
        Expr::Throw(label) => (format!("%{{{label}}}"), Level::Postfix),
        Expr::Star(inner) => (format!("{}*", print(inner, Level::Postfix)), Level::Postfix),
        Expr::Not(inner) => (format!("!{}", print(inner, Level::Prefix)), Level::Prefix),
        Expr::Choice(..) if as_annotation(e).is_some() => {
            let (inner, label) = as_annotation(e).unwrap();
            (
                format!("{}^{label}", print(inner, Level::Postfix)),
                Level::Postfix,
            )
        }
        Expr::Choice(..) => {
            let alts = spine(e, choice_parts);
            match terminals(&alts) {
                Some(chars) => (class(&chars), Level::Postfix),
                None => {
                    let parts: Vec<String> =
                        alts.iter().map(|alt| print(alt, Level::Sequence)).collect();
                    (parts.join(" / "), Level::Choice)
                }
            }
        }
        Expr::Sequence(..) => {
            let items = spine(e, seq_parts);
            match terminals(&items) {
                Some(chars) => (literal(&chars), Level::Postfix),
                None => (sequence(&items), Level::Sequence),
            }
        }
    };
    if level < ctx {
        format!("({text})")
    } else {
        text
    }
}

fn sequence(items: &[&Expr]) -> String {
    let mut parts = Vec::new();
    let mut run: Vec<char> = Vec::new();
    for item in items {
        if let Expr::Terminal(c) = item {
            run.push(*c);
            continue;
        }
        if !run.is_empty() {
            parts.push(literal(&run));
            run.clear();
        }
        // Nested sequences must stay grouped, including literal-shaped ones
        // that would otherwise be spliced back into this chain.
        if matches!(item, Expr::Sequence(..)) {
            parts.push(format!("({})", print(item, Level::Choice)));
        } else {
            parts.push(print(item, Level::Prefix));
        }
    }
    if !run.is_empty() {
        parts.push(literal(&run));
    }
    parts.join(" ")
}

pub(crate) fn format(g: &Grammar) -> String {
    let mut out = String::new();
    let ordered = g
        .rules
        .iter()
        .filter(|r| r.name == g.start)
        .chain(g.rules.iter().filter(|r| r.name != g.start));
    for rule in ordered {
        let _ = writeln!(out, "{} <- {}", rule.name, print(&rule.body, Level::Choice));
    }
    for (label, expr) in &g.recovery {
        let _ = writeln!(out, "recover {label} <- {}", print(expr, Level::Choice));
    }
    for (label, message) in &g.messages {
        let mut text = String::new();
        for c in message.chars() {
            escape(c, &['"'], &mut text);
        }
        let _ = writeln!(out, "message {label} \"{text}\"");
    }
    out
}
