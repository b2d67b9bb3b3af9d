use std::fmt;

use thiserror::Error;

/// Position of a syntax error, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: Position, msg: String },

    #[error("algebra file, line {line}: {msg}")]
    AlgebraFormat { line: usize, msg: String },

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("unknown operation `{0}`")]
    UnknownOperation(String),

    #[error("operation `{name}` expects {expected} arguments, got {got}")]
    Arity { name: String, expected: usize, got: usize },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("invalid variable set: {0}")]
    InvalidVariables(String),

    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("index {index} out of range for a space of {size} points")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("size budget exceeded: {what} needs {required} cells, budget is {budget}")]
    Budget {
        what: String,
        required: u128,
        budget: usize,
    },

    #[error("formula is not special for {vars}: {msg}")]
    NotSpecial { vars: String, msg: String },

    #[error("malformed input: {0}")]
    Malformed(String),
}

impl Error {
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
