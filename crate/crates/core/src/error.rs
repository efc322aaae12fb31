use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid field element: {0}")]
    InvalidElement(String),
    #[error("mismatched fields: {0}")]
    FieldMismatch(String),
    #[error("precision underflow: {0}")]
    PrecisionUnderflow(String),
    #[error("constant term is not a unit: {0}")]
    NonUnit(String),
    #[error("expected a monic polynomial")]
    NotMonic,
    #[error("expected a nonzero polynomial")]
    ZeroPolynomial,
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("sequence window too short: {0}")]
    WindowTooShort(String),
    #[error("fixed-point iteration did not converge within {0} steps")]
    NoConvergence(usize),
    #[error("W vectors are not linearly independent over F_q")]
    DependentDenominators,
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("malformed serialized data: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
