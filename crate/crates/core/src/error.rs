use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors produced by the library.
///
/// Variants are grouped so that front ends can map them onto distinct exit
/// codes: parameter and contract problems are usage errors, load/format
/// problems are data errors and resource/overflow problems are resource
/// errors.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("cannot read {}: {source}", path.display())]
    Load {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}:{line}: {message}", path.display())]
    Format {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("not a valid binary kernel: {0}")]
    InvalidKernel(String),

    #[error("kernel evaluation failed for graphs ({i}, {j}): {source}")]
    Pair {
        i: usize,
        j: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("feature map failed for graph {index}: {source}")]
    Map {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

/// Coarse classification of an [`Error`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Data,
    Resource,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parameter(_) | Error::Contract(_) | Error::InvalidKernel(_) => ErrorClass::Usage,
            Error::Load { .. } | Error::Format { .. } | Error::Write { .. } => ErrorClass::Data,
            Error::Resource(_) | Error::Overflow(_) => ErrorClass::Resource,
            Error::Pair { source, .. } | Error::Map { source, .. } => source.class(),
        }
    }
}

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}
