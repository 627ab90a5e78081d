use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The offsets {0, a, b} only reach the subgroup of index `gcd`.
    #[error("set {{0, {a}, {b}}} does not generate D_{n} (gcd(a, b, n) = {gcd})")]
    NotGenerating {
        n: usize,
        a: usize,
        b: usize,
        gcd: usize,
    },

    #[error("verification failure: {0}")]
    VerificationFailure(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
