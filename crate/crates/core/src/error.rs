use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} metric(s), got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid clustering: {0}")]
    InvalidClustering(String),

    #[error("invalid alpha: {0}")]
    InvalidAlpha(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("graph has zero total edge weight")]
    ZeroWeight,

    #[error("ground-truth clustering has zero modularity; cannot normalize")]
    ZeroReferenceModularity,

    #[error("objective returned non-finite value {value} at alpha = {alpha:?}")]
    NonFinite { value: f64, alpha: Vec<f64> },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Broad category used by front ends to pick an exit status.
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidArgument(_) => ErrorKind::Usage,
            Error::NonFinite { .. } => ErrorKind::Numerical,
            _ => ErrorKind::Data,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Data,
    Numerical,
}

pub type Result<T> = std::result::Result<T, Error>;
