//! Error type shared across the crate.

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A vector or circuit was used with the wrong dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A value violates a type invariant (bad monomial, clause, gate, ...).
    #[error("invalid {what}: {reason}")]
    Invalid { what: &'static str, reason: String },

    /// A polynomial degree outside what an operation supports.
    #[error("unsupported degree {degree} for {context} (max {max})")]
    UnsupportedDegree {
        degree: usize,
        max: usize,
        context: &'static str,
    },

    /// A caller-supplied argument is out of range.
    #[error("argument error: {0}")]
    Argument(String),

    /// An enumeration or memory budget would be exceeded.
    #[error("resource limit exceeded: {what} needs {required}, limit is {limit}")]
    Resource {
        what: &'static str,
        required: u64,
        limit: u64,
    },

    /// Parameters that make an experiment meaningless (e.g. a vacuous bound).
    #[error("infeasible configuration: {0}")]
    Config(String),

    /// Malformed input file.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            reason: reason.into(),
        }
    }
}
