use thiserror::Error;

/// Errors raised by the exact-arithmetic layer and everything built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("polynomial is not divisible: {0}")]
    NotDivisible(String),

    #[error("pole persists at {var} = {value}")]
    PolePersists { var: String, value: String },

    #[error("variable context mismatch: [{left}] vs [{right}]")]
    ContextMismatch { left: String, right: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("operator image leaves the subspace: {0}")]
    NotClosed(String),

    #[error("entry is not polynomial in {var}: {entry}")]
    NotPolynomialIn { var: String, entry: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
