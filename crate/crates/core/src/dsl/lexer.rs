use super::DslError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Arrow,
    Slash,
    Star,
    Bang,
    Caret,
    LParen,
    RParen,
    Dot,
    Literal(String),
    Class(Vec<char>),
    Throw(String),
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Arrow => "`<-`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Star => "`*`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Literal(_) => "literal".into(),
            Tok::Class(_) => "character class".into(),
            Tok::Throw(_) => "throw".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

struct Lexer<'s> {
    chars: std::iter::Peekable<std::str::Chars<'s>>,
    line: usize,
    col: usize,
}

impl Lexer<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, line: usize, col: usize, msg: impl Into<String>) -> DslError {
        DslError::Syntax {
            line,
            col,
            message: msg.into(),
        }
    }

    fn escape(&mut self, line: usize, col: usize) -> Result<char, DslError> {
        match self.bump() {
            Some('n') => Ok('\n'),
            Some('r') => Ok('\r'),
            Some('t') => Ok('\t'),
            Some(c @ ('\\' | '\'' | '"' | '[' | ']' | '-')) => Ok(c),
            Some('u') => {
                if self.bump() != Some('{') {
                    return Err(self.error(line, col, "expected `{` after `\\u`"));
                }
                let mut hex = String::new();
                loop {
                    match self.bump() {
                        Some('}') => break,
                        Some(c) if c.is_ascii_hexdigit() => hex.push(c),
                        _ => return Err(self.error(line, col, "malformed `\\u{...}` escape")),
                    }
                }
                u32::from_str_radix(&hex, 16)
                    .ok()
                    .and_then(char::from_u32)
                    .ok_or_else(|| self.error(line, col, "invalid unicode escape"))
            }
            Some(c) => Err(self.error(line, col, format!("unknown escape `\\{c}`"))),
            None => Err(self.error(line, col, "unterminated escape")),
        }
    }

    fn quoted(&mut self, quote: char, line: usize, col: usize) -> Result<String, DslError> {
        let mut out = String::new();
        loop {
            match self.bump() {
                Some(c) if c == quote => return Ok(out),
                Some('\\') => out.push(self.escape(line, col)?),
                Some('\n') | None => return Err(self.error(line, col, "unterminated literal")),
                Some(c) => out.push(c),
            }
        }
    }

    fn class(&mut self, line: usize, col: usize) -> Result<Vec<char>, DslError> {
        let mut items = Vec::new();
        loop {
            let c = match self.bump() {
                Some(']') => break,
                Some('\\') => self.escape(line, col)?,
                Some('\n') | None => {
                    return Err(self.error(line, col, "unterminated character class"))
                }
                Some(c) => c,
            };
            if self.peek() == Some('-') {
                self.bump();
                let hi = match self.bump() {
                    Some('\\') => self.escape(line, col)?,
                    Some(']') | Some('\n') | None => {
                        return Err(self.error(line, col, "unterminated range in character class"))
                    }
                    Some(hi) => hi,
                };
                if hi < c {
                    return Err(self.error(line, col, format!("empty range {c}-{hi}")));
                }
                items.extend(c..=hi);
            } else {
                items.push(c);
            }
        }
        if items.is_empty() {
            return Err(self.error(line, col, "empty character class"));
        }
        Ok(items)
    }
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Spanned>, DslError> {
    let mut lx = Lexer {
        chars: text.chars().peekable(),
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();
    while let Some(c) = lx.peek() {
        let (line, col) = (lx.line, lx.col);
        if c.is_whitespace() {
            lx.bump();
            continue;
        }
        if c == '#' {
            while lx.peek().is_some_and(|c| c != '\n') {
                lx.bump();
            }
            continue;
        }
        lx.bump();
        let tok = match c {
            '/' => Tok::Slash,
            '*' => Tok::Star,
            '!' => Tok::Bang,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '.' => Tok::Dot,
            '<' if lx.peek() == Some('-') => {
                lx.bump();
                Tok::Arrow
            }
            '\'' | '"' => Tok::Literal(lx.quoted(c, line, col)?),
            '[' => Tok::Class(lx.class(line, col)?),
            '%' => {
                if lx.bump() != Some('{') {
                    return Err(lx.error(line, col, "expected `{` after `%`"));
                }
                let mut name = String::new();
                loop {
                    match lx.bump() {
                        Some('}') => break,
                        Some(c) if c.is_ascii_alphanumeric() || c == '_' => name.push(c),
                        _ => return Err(lx.error(line, col, "malformed `%{label}`")),
                    }
                }
                Tok::Throw(name)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::from(c);
                while let Some(c) = lx.peek().filter(|c| c.is_ascii_alphanumeric() || *c == '_') {
                    name.push(c);
                    lx.bump();
                }
                Tok::Ident(name)
            }
            c => return Err(lx.error(line, col, format!("unexpected character `{c}`"))),
        };
        out.push(Spanned { tok, line, col });
    }
    Ok(out)
}
