use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Process parameters violate their constraints.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A series could not be summed to the requested tolerance.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// Coefficients left the representable range during an ADM solve.
    #[error("truncation failure: {0}")]
    Truncation(String),

    #[error("quadrature failure: {0}")]
    Quadrature(String),

    /// The requested operation does not exist for this process variant.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn convergence(msg: impl Into<String>) -> Self {
        Error::Convergence(msg.into())
    }
}
