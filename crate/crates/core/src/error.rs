use thiserror::Error;

/// Errors produced by the library.
///
/// `InvalidInput` covers domain violations (composite moduli, empty
/// polynomials, out-of-range parameters); `ResourceLimit` covers requests
/// that are well formed but exceed a configured size cap.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::ResourceLimit(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
