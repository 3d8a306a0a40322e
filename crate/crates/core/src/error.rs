use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid composition: {0}")]
    InvalidComposition(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("invalid operator spec: {0}")]
    InvalidSpec(String),

    #[error(
        "shape mismatch: expected (d={expected_d}, n={expected_n}), got (d={got_d}, n={got_n})"
    )]
    ShapeMismatch {
        expected_d: usize,
        expected_n: usize,
        got_d: usize,
        got_n: usize,
    },

    #[error("register too large: {what} ({size} exceeds limit {limit})")]
    TooLarge {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("count overflow: {0}")]
    Overflow(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn shape(expected: (usize, usize), got: (usize, usize)) -> Self {
        Error::ShapeMismatch {
            expected_d: expected.0,
            expected_n: expected.1,
            got_d: got.0,
            got_n: got.1,
        }
    }
}
