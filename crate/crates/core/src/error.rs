use thiserror::Error;

use crate::decomposition::DecompositionError;
use crate::drawing::Violation;
use crate::graph::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("degenerate drawing: {0}")]
    Degenerate(Box<Violation>),

    #[error("invalid decomposition: {0}")]
    Decomposition(#[from] DecompositionError),

    #[error("{solver} is limited to {limit} vertices, graph has {n}")]
    SizeLimit {
        solver: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
