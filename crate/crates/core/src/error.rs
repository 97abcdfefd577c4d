use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot parse `{0}`")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("measures live on different groups ({0} vs {1})")]
    GroupMismatch(String, String),
    #[error("element index {index} out of range for a group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("walk is not ergodic: {0}")]
    NotErgodic(String),
    #[error("exact-computation budget exceeded: {0}")]
    Budget(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
