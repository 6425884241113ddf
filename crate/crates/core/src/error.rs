use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A required integral diverges or a quantity does not exist.
    #[error("infeasible: {0}")]
    Infeasible(String),
    /// The inputs are valid but outside the region where a closed form holds.
    #[error("out of validity region: {0}")]
    OutOfValidity(String),
    /// The data cannot support the requested computation.
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn infeasible(msg: impl Into<String>) -> Self {
        Error::Infeasible(msg.into())
    }
}
