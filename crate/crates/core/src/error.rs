use thiserror::Error;

/// Errors raised by series construction and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid precision: {0}")]
    InvalidPrecision(String),
    #[error("series is not a unit (constant term {0})")]
    NonUnit(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unbounded z-support: {0} (supply a window)")]
    UnboundedZSupport(String),
    #[error("division by a zero series: {0}")]
    DivisionByZero(String),
    #[error("insufficient window: {0}")]
    InsufficientWindow(String),
    #[error("cyclotomic order mismatch: {0} vs {1}")]
    OrderMismatch(u64, u64),
    #[error("negative q-exponent {0} in a power series result")]
    NegativeExponent(i64),
    #[error("unknown catalog id `{0}`")]
    UnknownId(String),
    #[error("{0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
