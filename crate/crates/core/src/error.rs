use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("polynomials live in different rings")]
    RingMismatch,
    #[error("scalars belong to different coefficient fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("coefficient not reducible: {0}")]
    NotReducible(String),
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` has no image under a total substitution")]
    UnassignedVariable(String),
    #[error("multidegree of the zero polynomial is undefined")]
    ZeroMultidegree,
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("matrix too small: {0}")]
    MatrixShape(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("ideal is not saturated with respect to t")]
    NotSaturated,
    #[error("multidegree violation: {0}")]
    Multidegree(String),
    #[error("Groebner step limit of {0} exceeded")]
    StepLimit(u64),
    #[error("sampling failed: {0}")]
    Sampling(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
