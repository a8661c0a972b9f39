use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("constraint violated: {0}")]
    ConstraintViolation(String),
    #[error("missing parameter `{0}`")]
    MissingParameter(String),
    #[error("invalid oracle: {0}")]
    InvalidOracle(String),
    #[error("sampling error: {0}")]
    Sampling(String),
    #[error("sampling exhausted after {0} degenerate draws")]
    SamplingExhausted(usize),
    #[error("usage: {0}")]
    Usage(String),
}

impl Error {
    pub fn is_degenerate(&self) -> bool {
        matches!(self, Error::Degenerate(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
