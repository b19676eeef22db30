use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("cannot parse scalar {input:?}: {reason}")]
    ScalarParse { input: String, reason: String },
    #[error("{0} is not reducible into {1}")]
    NotReducible(String, String),
    #[error("square roots are not supported over the rationals")]
    RationalSqrt,
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("element belongs to a different algebra")]
    ParentMismatch,
    #[error("unknown basis label {0:?}")]
    UnknownLabel(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("operation requires a finite field, got {0}")]
    NeedsFiniteField(String),
    #[error("search space too large: {0}")]
    TooLarge(String),
    #[error("not an idempotent: {0}")]
    NotIdempotent(String),
    #[error("operator identity 2R^3 - 3R^2 + R = 0 fails for {0}")]
    PeirceOperator(String),
    #[error("invalid Peirce input: {0}")]
    Peirce(String),
    #[error("unknown catalog entry {0:?}")]
    UnknownEntry(String),
    #[error("invalid template: {0}")]
    Template(String),
    #[error("rewrite system: {0}")]
    Rewrite(String),
    #[error("cannot parse polynomial {input:?}: {reason}")]
    PolyParse { input: String, reason: String },
    #[error("parity: {0}")]
    Parity(String),
    #[error("{path}:{line}:{column}: {message}")]
    Format {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
