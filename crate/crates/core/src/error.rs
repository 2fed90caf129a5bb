use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("incompatible algebras: {0}")]
    Incompatible(String),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("parity mismatch: {0}")]
    ParityMismatch(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("element is not in the odd-generator subalgebra")]
    NotInSubalgebra,
    #[error("zero has no valuation")]
    ZeroValuation,
    #[error("resource budget exceeded: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, Error>;
