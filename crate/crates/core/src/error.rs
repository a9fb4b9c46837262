use thiserror::Error;

pub type Result<T> = std::result::Result<T, BcError>;

/// Every failure the library can report. Each variant maps onto a stable
/// process exit code used by the command-line front end and the C ABI.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BcError {
    #[error("null cone: {0} is not invertible")]
    NullCone(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("empty collection passed to {0}")]
    EmptyCollection(&'static str),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported representation: {0}")]
    Unsupported(String),

    #[error("direction not absorbed: {0}")]
    NotAbsorbed(String),

    #[error("set is unbounded: {0}")]
    Unbounded(String),

    #[error("index {index} out of range (length {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("json: {0}")]
    Json(String),
}

impl BcError {
    pub fn exit_code(&self) -> i32 {
        match self {
            BcError::NullCone(_) => 2,
            BcError::Unsupported(_) => 3,
            BcError::NotAbsorbed(_) => 4,
            BcError::DimensionMismatch { .. } => 5,
            BcError::IndexOutOfRange { .. } | BcError::Unbounded(_) => 5,
            BcError::NonFinite(_)
            | BcError::EmptyCollection(_)
            | BcError::InvalidArgument(_)
            | BcError::Parse { .. }
            | BcError::Json(_) => 64,
        }
    }
}

impl From<serde_json::Error> for BcError {
    fn from(e: serde_json::Error) -> Self {
        BcError::Json(e.to_string())
    }
}
