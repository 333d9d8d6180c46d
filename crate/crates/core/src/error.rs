use thiserror::Error;

use crate::graph::{EdgeId, VertexId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
    #[error("edge {0} is not live")]
    DeadEdge(EdgeId),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(VertexId),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("oracle budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("graph has no cycle")]
    NoCycle,
    #[error("guarantee violated: {0}")]
    Guarantee(String),
    #[error("internal invariant broken: {0}")]
    Internal(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Failure while reading one of the text formats. Lines are 1-based.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }
}
