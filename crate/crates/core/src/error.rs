use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A table, bit budget or term count would exceed its configured cap.
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("parse error: {0}")]
    Parse(String),
    /// Quadrature could not reach its tolerance within the evaluation budget.
    #[error("quadrature failure: {0}")]
    Quadrature(String),
    /// The continued-fraction orbit is too shallow for the request.
    #[error("insufficient depth: {0}")]
    Depth(String),
    /// A truncation certificate could not be made small enough.
    #[error("certificate failure: {0}")]
    Certificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
