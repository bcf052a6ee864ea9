use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the solver library and the command-line front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("spacing h = {h} must be positive and smaller than the shortest domain side ({min_side})")]
    InvalidSpacing { h: f64, min_side: f64 },

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("requested {k} neighbours but the node set only has {n} nodes")]
    KTooLarge { k: usize, n: usize },

    #[error("node {node}: no numerical differentiation formula exists even without sign constraints up to {n_max} neighbours")]
    MalformedGeometry { node: usize, n_max: usize },

    #[error("non-finite value at node {node} in step {step}")]
    NonFiniteValue { node: usize, step: usize },

    #[error("median of an empty list")]
    EmptyInput,

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("point {0:?} lies outside the reference grid")]
    OutOfBounds(Vec<f64>),

    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },

    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),

    #[error("bad value for `{key}`: {msg}")]
    BadValue { key: String, msg: String },

    #[error("missing required configuration key `{0}`")]
    MissingRequired(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Process exit code used by the CLI: 2 for data errors, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::MalformedGeometry { .. } | Error::NonFiniteValue { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
