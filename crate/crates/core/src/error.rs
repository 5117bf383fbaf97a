use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input violates a structural invariant (bad index, bad probability, incomplete table, ...).
    #[error("{0}")]
    Validation(String),

    /// Input file could not be decoded. serde_json messages carry line and column.
    #[error("parse error in {what}: {source}")]
    Parse {
        what: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    /// Exact enumeration would need more terms than the configured guard allows.
    #[error("oracle too large: enumeration size {} exceeds limit {limit}", describe_pow2(*log2_size))]
    OracleTooLarge { log2_size: u32, limit: u128 },

    #[error("preparation {label}: {source}")]
    Backend {
        label: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn parse(what: impl Into<String>, source: serde_json::Error) -> Self {
        Error::Parse {
            what: what.into(),
            source,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Coarse classification used for process exit codes and FFI status codes.
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Validation(_) | Error::Parse { .. } | Error::Csv(_) => ErrorKind::Validation,
            Error::OracleTooLarge { .. } | Error::Io { .. } => ErrorKind::Runtime,
            Error::Backend { source, .. } => source.kind(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Runtime,
}

fn describe_pow2(log2: u32) -> String {
    match 1u128.checked_shl(log2) {
        Some(v) => format!("2^{log2} = {v}"),
        None => format!("2^{log2}"),
    }
}
