use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed user input: bad indices, invalid graph specs, wrong sizes.
    #[error("input error: {0}")]
    Input(String),
    /// A well-formed request outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A validation condition failed; `witness` names the offending data.
    #[error("validation failed on {condition}: {witness}")]
    Validation { condition: String, witness: String },
    /// A consistency assertion that should be impossible on valid inputs.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
