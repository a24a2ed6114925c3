use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("contraction order r = {r} out of range for degrees ({k}, {l})")]
    ContractionOrder { r: usize, k: usize, l: usize },
    #[error("evaluation point must be nonzero")]
    ZeroPoint,
    #[error("coefficient denominator vanishes at alpha = {alpha} for degree {degree}; use the quotient map")]
    VanishingDenominator { alpha: String, degree: usize },
    #[error("element is not a member of the ideal at alpha = {0}")]
    NotAMember(String),
    #[error("internal degree error: {0}")]
    InternalDegree(String),
    #[error("invalid torus data: {0}")]
    InvalidTorus(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
