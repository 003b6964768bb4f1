use thiserror::Error;

use crate::transfer::TransferKind;

/// Errors emitted by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("transfer kind {0} is not supported by {1}")]
    UnsupportedKind(TransferKind, &'static str),

    #[error("empty population")]
    EmptyPopulation,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
