use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("cost cap exceeded: {what} needs {value}, cap is {cap}")]
    CostCap {
        what: String,
        value: u128,
        cap: u128,
    },
    #[error("check failed: {0}")]
    CheckFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn check_failed(msg: impl Into<String>) -> Error {
    Error::CheckFailed(msg.into())
}
