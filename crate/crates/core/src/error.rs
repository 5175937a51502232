use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is singular")]
    Singular,

    #[error("unknown method `{0}`")]
    UnknownMethod(String),

    #[error("{what} = {value} exceeds the cap of {cap}")]
    OverCap {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("invalid tableau: {0}")]
    InvalidTableau(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("no convergence after {steps} steps (last difference {difference:e})")]
    NoConvergence { steps: usize, difference: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dims(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}
