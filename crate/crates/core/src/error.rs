use thiserror::Error;

use crate::admissibility::StrategyError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("lines {0} and {1} coincide; no unique intersection")]
    NoUniqueIntersection(String, String),

    #[error("duplicate line: {0} and {1} have the same canonical form")]
    DuplicateLine(String, String),

    #[error("an arrangement needs at least 2 lines, got {0}")]
    TooFewLines(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error(transparent)]
    Strategy(#[from] StrategyError),

    #[error("size guard exceeded: {lines} lines > guard {guard}")]
    SizeGuard { lines: usize, guard: usize },

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("generation failed: {0}")]
    Generation(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
