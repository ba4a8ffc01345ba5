//! S-expression reader.
//!
//! Atoms are integers and symbols. `'x` reads as `(quote x)`, `;` starts a
//! comment that runs to the end of the line. Every datum carries the line and
//! column where it starts.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Pos, SyntaxError};

#[derive(Clone, Debug)]
pub struct Sexp {
    pub kind: SexpKind,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SexpKind {
    Int(BigInt),
    Symbol(String),
    List(Vec<Sexp>),
}

/// Positions are ignored: two data are equal when they have the same shape.
impl PartialEq for Sexp {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Sexp {}

impl Sexp {
    pub fn symbol(name: impl Into<String>) -> Sexp {
        Sexp { kind: SexpKind::Symbol(name.into()), pos: Pos::default() }
    }

    pub fn int(n: impl Into<BigInt>) -> Sexp {
        Sexp { kind: SexpKind::Int(n.into()), pos: Pos::default() }
    }

    pub fn list(items: Vec<Sexp>) -> Sexp {
        Sexp { kind: SexpKind::List(items), pos: Pos::default() }
    }

    pub fn as_symbol(&self) -> Option<&str> {
        match &self.kind {
            SexpKind::Symbol(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexp]> {
        match &self.kind {
            SexpKind::List(items) => Some(items),
            _ => None,
        }
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SexpKind::Int(n) => write!(f, "{n}"),
            SexpKind::Symbol(s) => f.write_str(s),
            SexpKind::List(items) => {
                if let [head, quoted] = items.as_slice() {
                    if head.as_symbol() == Some("quote") {
                        return write!(f, "'{quoted}");
                    }
                }
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        Reader { chars: text.chars().peekable(), line: 1, col: 1 }
    }

    fn pos(&self) -> Pos {
        Pos { line: self.line, col: self.col }
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

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(&c) = self.chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn datum(&mut self) -> Result<Sexp, SyntaxError> {
        self.skip_trivia();
        let pos = self.pos();
        match self.chars.peek().copied() {
            None => Err(SyntaxError::new(pos, "unexpected end of input")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => return Err(SyntaxError::new(pos, "unclosed parenthesis")),
                        Some(')') => {
                            self.bump();
                            return Ok(Sexp { kind: SexpKind::List(items), pos });
                        }
                        Some(_) => items.push(self.datum()?),
                    }
                }
            }
            Some(')') => Err(SyntaxError::new(pos, "unexpected ')'")),
            Some('\'') => {
                self.bump();
                let quoted = self.datum()?;
                let quote = Sexp { kind: SexpKind::Symbol("quote".into()), pos };
                Ok(Sexp { kind: SexpKind::List(vec![quote, quoted]), pos })
            }
            Some(_) => {
                let mut token = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | '\'' | ';') {
                        break;
                    }
                    if matches!(c, '"' | '`' | ',' | '#' | '|') {
                        return Err(SyntaxError::new(self.pos(), format!("unsupported character '{c}'")));
                    }
                    token.push(c);
                    self.bump();
                }
                Ok(Sexp { kind: atom(&token), pos })
            }
        }
    }
}

fn atom(token: &str) -> SexpKind {
    let digits = token.strip_prefix(['-', '+']).unwrap_or(token);
    if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
        if let Ok(n) = token.parse::<BigInt>() {
            return SexpKind::Int(n);
        }
    }
    SexpKind::Symbol(token.to_string())
}

/// Reads every top-level datum in `text`.
pub fn read_all(text: &str) -> Result<Vec<Sexp>, SyntaxError> {
    let mut reader = Reader::new(text);
    let mut out = Vec::new();
    loop {
        reader.skip_trivia();
        if reader.chars.peek().is_none() {
            return Ok(out);
        }
        out.push(reader.datum()?);
    }
}

/// Reads exactly one datum.
pub fn read_one(text: &str) -> Result<Sexp, SyntaxError> {
    let mut all = read_all(text)?;
    match all.len() {
        1 => Ok(all.pop().unwrap()),
        0 => Err(SyntaxError::new(Pos { line: 1, col: 1 }, "expected a datum")),
        _ => Err(SyntaxError::new(all[1].pos, "expected a single datum")),
    }
}
