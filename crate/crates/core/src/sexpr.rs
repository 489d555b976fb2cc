//! Positioned S-expression reader shared by the formula and scenario readers.
//!
//! Tokens are `(`, `)`, `:`, `=`, identifiers `[A-Za-z_][A-Za-z0-9_'-]*` and
//! integers with an optional leading `-`. `;` starts a comment that runs to
//! the end of the line.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Pos, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AtomKind {
    Ident,
    Int,
    Colon,
    Equals,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SExpr {
    Atom {
        text: String,
        kind: AtomKind,
        pos: Pos,
    },
    List {
        items: Vec<SExpr>,
        pos: Pos,
    },
}

impl SExpr {
    pub fn pos(&self) -> Pos {
        match self {
            SExpr::Atom { pos, .. } | SExpr::List { pos, .. } => *pos,
        }
    }

    pub fn as_ident(&self) -> Option<&str> {
        match self {
            SExpr::Atom {
                text,
                kind: AtomKind::Ident,
                ..
            } => Some(text),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<u64> {
        match self {
            SExpr::Atom {
                text,
                kind: AtomKind::Int,
                ..
            } => text.parse().ok(),
            _ => None,
        }
    }

    /// Integer value allowing a leading minus sign.
    pub fn as_signed(&self) -> Option<i64> {
        match self {
            SExpr::Atom {
                text,
                kind: AtomKind::Int,
                ..
            } => text.parse().ok(),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List { items, .. } => Some(items),
            _ => None,
        }
    }

    /// Head identifier of a non-empty list.
    pub fn head(&self) -> Option<&str> {
        self.as_list()
            .and_then(|l| l.first())
            .and_then(SExpr::as_ident)
    }

    pub fn is_colon(&self) -> bool {
        matches!(
            self,
            SExpr::Atom {
                kind: AtomKind::Colon,
                ..
            }
        )
    }
}

impl fmt::Display for SExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SExpr::Atom { text, .. } => f.write_str(text),
            SExpr::List { items, .. } => {
                f.write_str("(")?;
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{it}")?;
                }
                f.write_str(")")
            }
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\'' || c == '-'
}

fn next_is_digit(chars: &core::iter::Peekable<core::str::Chars<'_>>) -> bool {
    chars.clone().nth(1).is_some_and(|d| d.is_ascii_digit())
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Open,
    Close,
    Atom(String, AtomKind),
}

fn tokenize(src: &str) -> Result<Vec<(Token, Pos)>, SyntaxError> {
    let mut out = Vec::new();
    let mut line = 1u32;
    let mut col = 1u32;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c == ';' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
            }
            continue;
        }
        match c {
            '(' => {
                chars.next();
                col += 1;
                out.push((Token::Open, pos));
            }
            ')' => {
                chars.next();
                col += 1;
                out.push((Token::Close, pos));
            }
            ':' => {
                chars.next();
                col += 1;
                out.push((Token::Atom(":".to_string(), AtomKind::Colon), pos));
            }
            '=' => {
                chars.next();
                col += 1;
                out.push((Token::Atom("=".to_string(), AtomKind::Equals), pos));
            }
            c if c.is_ascii_digit() || (c == '-' && next_is_digit(&chars)) => {
                let mut s = String::new();
                if c == '-' {
                    s.push(c);
                    chars.next();
                    col += 1;
                }
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                if let Some(&d) = chars.peek() {
                    if is_ident_start(d) {
                        return Err(SyntaxError::Lex {
                            pos,
                            msg: format!("malformed number `{s}{d}`"),
                        });
                    }
                }
                out.push((Token::Atom(s, AtomKind::Int), pos));
            }
            c if is_ident_start(c) => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if is_ident_char(d) {
                        s.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push((Token::Atom(s, AtomKind::Ident), pos));
            }
            other => {
                return Err(SyntaxError::Lex {
                    pos,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(out)
}

/// Reads every top-level expression in `src`.
pub fn read_all(src: &str) -> Result<Vec<SExpr>, SyntaxError> {
    let tokens = tokenize(src)?;
    let mut stack: Vec<(Vec<SExpr>, Pos)> = Vec::new();
    let mut top = Vec::new();
    for (tok, pos) in tokens {
        match tok {
            Token::Open => stack.push((Vec::new(), pos)),
            Token::Close => {
                let (items, open) = stack.pop().ok_or(SyntaxError::Lex {
                    pos,
                    msg: "unbalanced `)`".to_string(),
                })?;
                let e = SExpr::List { items, pos: open };
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(e),
                    None => top.push(e),
                }
            }
            Token::Atom(text, kind) => {
                let e = SExpr::Atom { text, kind, pos };
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(e),
                    None => top.push(e),
                }
            }
        }
    }
    if let Some((_, pos)) = stack.pop() {
        return Err(SyntaxError::Lex {
            pos,
            msg: "unclosed `(`".to_string(),
        });
    }
    Ok(top)
}

/// Reads exactly one expression.
pub fn read_one(src: &str) -> Result<SExpr, SyntaxError> {
    let mut all = read_all(src)?;
    match all.len() {
        1 => Ok(all.pop().unwrap()),
        0 => Err(SyntaxError::Malformed {
            pos: Pos { line: 1, col: 1 },
            msg: "empty input".to_string(),
        }),
        _ => Err(SyntaxError::Malformed {
            pos: all[1].pos(),
            msg: "trailing input after expression".to_string(),
        }),
    }
}
