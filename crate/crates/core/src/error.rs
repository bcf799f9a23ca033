use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Operands live on different bases or have incompatible shapes.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// A precondition on a parameter or input matrix does not hold.
    #[error("domain error: {0}")]
    Domain(String),
    /// A hyperbolic triple was passed where a spin triple was required, or vice versa.
    #[error("kind error: expected a {expected} triple, got {found}")]
    Kind {
        expected: &'static str,
        found: &'static str,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
