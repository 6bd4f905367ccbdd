use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(i64, i64),
    #[error("gcd of forms that are all zero")]
    AllZero,
    #[error("cannot evaluate at the point (0,0)")]
    ZeroPoint,
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("polynomial is not homogeneous of degree {expected}: {detail}")]
    NotHomogeneous { expected: u32, detail: String },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("polynomial is not in the curve ideal: remainder {remainder} under {order}")]
    NotInIdeal { remainder: String, order: String },
    #[error("twist mismatch: {0}")]
    TwistMismatch(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported case: {0}")]
    Unsupported(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    /// True for failures that indicate a bug or a failed internal certificate rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Certification(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
