use thiserror::Error;

/// Errors across the crate. Numerical routines that certify a bound return
/// `Certification` when the claimed inequality fails on the verification
/// grid; `Internal` signals a violated invariant that points at a bug
/// rather than bad input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("unsupported order: {0}")]
    UnsupportedOrder(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("theorem hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("certification failed: {0}")]
    Certification(String),

    #[error("ill-conditioned system: {0}")]
    Conditioning(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
