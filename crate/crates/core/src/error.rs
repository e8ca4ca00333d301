use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} index {index} out of range (must be < {bound})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        bound: usize,
    },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("duplicate path (user {user}, antenna {antenna})")]
    DuplicatePath { user: usize, antenna: usize },

    #[error("{paths} paths cannot be nulled with only {units} RIS units")]
    TooManyPaths { paths: usize, units: usize },

    #[error("path matrix is rank deficient (condition number {condition:.3e})")]
    RankDeficient { condition: f64 },

    #[error("zero entry at position {0}; unit-modulus projection undefined")]
    ZeroEntry(usize),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("replica exhaustion: {0}")]
    ReplicaExhaustion(String),

    #[error("unknown slot {0}")]
    UnknownSlot(usize),

    #[error("singular effective channel in group {group}")]
    SingularChannel { group: usize },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
