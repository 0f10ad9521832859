//! S-expression reader with source positions.

use std::fmt;

use super::{PddlError, Position};

#[derive(Debug, Clone, PartialEq)]
pub enum SExpr {
    Atom { text: String, pos: Position },
    List { items: Vec<SExpr>, pos: Position },
}

impl SExpr {
    pub fn pos(&self) -> Position {
        match self {
            SExpr::Atom { pos, .. } | SExpr::List { pos, .. } => *pos,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom { text, .. } => Some(text),
            SExpr::List { .. } => None,
        }
    }

    pub fn as_list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List { items, .. } => Some(items),
            SExpr::Atom { .. } => None,
        }
    }

    /// Head symbol of a non-empty list.
    pub fn head(&self) -> Option<&str> {
        self.as_list().and_then(|items| items.first()).and_then(SExpr::as_atom)
    }
}

impl fmt::Display for SExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SExpr::Atom { text, .. } => write!(f, "{text}"),
            SExpr::List { items, .. } => {
                write!(f, "(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{item}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Reads exactly one top-level expression. Symbols are lowercased; `;`
/// starts a comment running to end of line.
pub fn read(text: &str) -> Result<SExpr, PddlError> {
    let mut reader = Reader { chars: text.chars().peekable(), line: 1, column: 1 };
    reader.skip_trivia();
    let Some(_) = reader.chars.peek() else {
        return Err(PddlError::syntax(reader.here(), "empty input"));
    };
    let expr = reader.expr()?;
    reader.skip_trivia();
    if reader.chars.peek().is_some() {
        return Err(PddlError::syntax(reader.here(), "unexpected text after the closing parenthesis"));
    }
    Ok(expr)
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Reader<'_> {
    fn here(&self) -> Position {
        Position { line: self.line, column: self.column }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
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

    fn expr(&mut self) -> Result<SExpr, PddlError> {
        self.skip_trivia();
        let pos = self.here();
        match self.chars.peek().copied() {
            None => Err(PddlError::syntax(pos, "unexpected end of input")),
            Some(')') => Err(PddlError::syntax(pos, "unbalanced ')'")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => {
                            return Err(PddlError::syntax(pos, "unclosed '(' (missing ')')"));
                        }
                        Some(')') => {
                            self.bump();
                            return Ok(SExpr::List { items, pos });
                        }
                        Some(_) => items.push(self.expr()?),
                    }
                }
            }
            Some(_) => {
                let mut text = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    text.push(c.to_ascii_lowercase());
                    self.bump();
                }
                Ok(SExpr::Atom { text, pos })
            }
        }
    }
}
