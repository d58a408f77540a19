use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown {0}")]
    Unknown(String),
    #[error("basis length mismatch: {0} vs {1}")]
    BasisMismatch(usize, usize),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("geometry: {0}")]
    Geometry(String),
    #[error("bound violated: {0}")]
    Bound(String),
    #[error("inconsistent system: {0}")]
    Inconsistent(String),
    #[error("prime disagreement: {0}")]
    PrimeDisagreement(String),
    #[error("not a PBW series at degree {0}")]
    NotPbw(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
