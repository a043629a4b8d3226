use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or input lies outside the domain an operation accepts.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested combination (for example a curve and a map sign) does not exist.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A numerical procedure failed to produce a result.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    /// True for errors caused by the caller's input rather than by a failed computation.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Unsupported(_))
    }
}
