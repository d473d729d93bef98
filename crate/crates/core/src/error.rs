use std::path::PathBuf;

/// Errors surfaced by the library and the command-line harness.
///
/// The variants map onto process exit codes via [`Error::exit_code`].
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid parameters or mismatched inputs.
    #[error("usage error: {0}")]
    Usage(String),

    /// A requested computation does not fit the dense-table envelope.
    #[error("capacity error: {what} = {requested} exceeds limit {limit}")]
    Capacity {
        what: String,
        requested: u128,
        limit: u128,
    },

    /// An exact identity that must always hold was violated.
    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn capacity(what: impl Into<String>, requested: u128, limit: u128) -> Self {
        Error::Capacity {
            what: what.into(),
            requested,
            limit,
        }
    }

    pub fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }

    /// Exit code: 1 usage (including parse and i/o), 2 capacity, 3 consistency.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Parse { .. } | Error::Io { .. } => 1,
            Error::Capacity { .. } => 2,
            Error::Consistency(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
