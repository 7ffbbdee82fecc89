use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::model::Label;

use super::failure::Position;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    /// A rule invocation. Lexical rules appear as leaves.
    NonTerminal(String),
    Terminal,
    /// Input handled by the recovery expression of `label`.
    Recovery(Label),
    StarList,
    Empty,
}

/// Concrete syntax tree. Spans are half-open byte ranges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseTree {
    pub kind: NodeKind,
    pub start: Position,
    pub end: Position,
    pub children: Vec<ParseTree>,
}

impl ParseTree {
    pub fn leaf(kind: NodeKind, start: usize, end: usize) -> ParseTree {
        ParseTree {
            kind,
            start: Position(start),
            end: Position(end),
            children: Vec::new(),
        }
    }

    pub fn node(kind: NodeKind, start: usize, end: usize, children: Vec<ParseTree>) -> ParseTree {
        ParseTree {
            kind,
            start: Position(start),
            end: Position(end),
            children,
        }
    }

    pub fn name(&self) -> Option<&str> {
        match &self.kind {
            NodeKind::NonTerminal(n) => Some(n),
            _ => None,
        }
    }

    pub fn text<'i>(&self, input: &'i str) -> &'i str {
        &input[self.start.0..self.end.0]
    }

    /// Pre-order traversal.
    pub fn iter(&self) -> impl Iterator<Item = &ParseTree> {
        let mut stack = vec![self];
        std::iter::from_fn(move || {
            let node = stack.pop()?;
            stack.extend(node.children.iter().rev());
            Some(node)
        })
    }

    pub fn find_all<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a ParseTree> + 'a {
        self.iter().filter(move |n| n.name() == Some(name))
    }

    pub fn recovery_nodes(&self) -> impl Iterator<Item = &ParseTree> {
        self.iter()
            .filter(|n| matches!(n.kind, NodeKind::Recovery(_)))
    }

    /// Indented one-node-per-line rendering.
    pub fn render(&self, input: &str) -> String {
        let mut out = String::new();
        self.render_into(input, 0, &mut out);
        out
    }

    fn render_into(&self, input: &str, depth: usize, out: &mut String) {
        out.push_str(&"  ".repeat(depth));
        let span = format!("[{}, {})", self.start, self.end);
        match &self.kind {
            NodeKind::NonTerminal(n) if self.children.is_empty() => {
                out.push_str(&format!("{n} {span} {:?}", self.text(input)))
            }
            NodeKind::NonTerminal(n) => out.push_str(&format!("{n} {span}")),
            NodeKind::Terminal => out.push_str(&format!("{:?} {span}", self.text(input))),
            NodeKind::Recovery(l) => out.push_str(&format!("<recovery {l}> {span}")),
            NodeKind::StarList => out.push_str(&format!("* {span}")),
            NodeKind::Empty => out.push_str(&format!("() {span}")),
        }
        out.push('\n');
        for child in &self.children {
            child.render_into(input, depth + 1, out);
        }
    }
}

impl Serialize for ParseTree {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        match &self.kind {
            NodeKind::NonTerminal(name) => {
                map.serialize_entry("kind", "nonterminal")?;
                map.serialize_entry("name", name)?;
            }
            NodeKind::Terminal => map.serialize_entry("kind", "terminal")?,
            NodeKind::Recovery(label) => {
                map.serialize_entry("kind", "recovery")?;
                map.serialize_entry("label", label.as_str())?;
            }
            NodeKind::StarList => map.serialize_entry("kind", "star")?,
            NodeKind::Empty => map.serialize_entry("kind", "empty")?,
        }
        map.serialize_entry("span", &[self.start.0, self.end.0])?;
        map.serialize_entry("children", &self.children)?;
        map.end()
    }
}
