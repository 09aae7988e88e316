use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("input has {found} bits but the function takes {expected}")]
    InputLength { expected: usize, found: usize },

    #[error("invalid bit string {0:?}: only '0' and '1' are allowed")]
    InvalidBits(String),

    #[error("arity mismatch: algorithm takes {algorithm} variables, function takes {function}")]
    ArityMismatch { algorithm: usize, function: usize },

    #[error("arity {0} exceeds the supported maximum of 16")]
    ArityTooLarge(usize),

    #[error("unknown function {0:?}")]
    UnknownFunction(String),

    #[error("invalid parameter for {name}: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("malformed algorithm: {0}")]
    Malformed(String),

    #[error("step {step}: matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { step: usize, deviation: f64 },

    #[error("algorithm does not satisfy {0}")]
    PropertyViolated(&'static str),

    #[error("algorithm is not exact (worst-case success probability {0:.6})")]
    NotExact(f64),

    #[error("no output value has probability above 1/2 on input {0}")]
    NoMajority(String),

    #[error("{0}")]
    Unsupported(String),

    #[error("{field}: {reason}")]
    Document { field: String, reason: String },

    #[error("csv: {0}")]
    Csv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn document(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Document {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
