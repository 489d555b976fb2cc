use alloc::string::String;
use core::fmt;

/// One-based line and column in a source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Errors raised while reading formula or scenario text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SyntaxError {
    #[error("{pos}: lexical error: {msg}")]
    Lex { pos: Pos, msg: String },
    #[error("{pos}: {msg}")]
    Malformed { pos: Pos, msg: String },
    #[error("{pos}: unknown symbol `{name}`")]
    UnknownSymbol { pos: Pos, name: String },
    #[error("{pos}: arity mismatch for `{symbol}`: expected {expected}, found {found}")]
    Arity {
        pos: Pos,
        symbol: String,
        expected: String,
        found: usize,
    },
    #[error("{pos}: sort mismatch: expected {expected}, found {found}")]
    Sort {
        pos: Pos,
        expected: String,
        found: String,
    },
}

impl SyntaxError {
    pub fn pos(&self) -> Pos {
        match self {
            SyntaxError::Lex { pos, .. }
            | SyntaxError::Malformed { pos, .. }
            | SyntaxError::UnknownSymbol { pos, .. }
            | SyntaxError::Arity { pos, .. }
            | SyntaxError::Sort { pos, .. } => *pos,
        }
    }
}

/// Well-sortedness violations found on an already-built AST.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SortError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
    #[error("`{symbol}` expects {expected} arguments, got {found}")]
    Arity {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("sort mismatch in {context}: expected {expected}, found {found}")]
    Mismatch {
        context: String,
        expected: String,
        found: String,
    },
    #[error("formula is not closed: free variable `{0}`")]
    NotClosed(String),
    #[error("duplicate declaration of `{0}`")]
    Duplicate(String),
}
