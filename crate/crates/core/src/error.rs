use thiserror::Error;

/// Errors raised anywhere in the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("psi value at n = {0} is zero")]
    ZeroPsiValue(usize),
    #[error("q = 1 is the classical calculus; use the classical sequence instead")]
    InvalidQ,
    #[error("q = {0} is outside the open interval (0, 1)")]
    QOutOfRange(String),
    #[error("psi table covers n = 1..={available}, but n = {requested} was requested")]
    PsiOutOfRange { requested: usize, available: usize },
    #[error("degree {degree} exceeds the operator cap {cap}")]
    CapExceeded { degree: usize, cap: usize },
    #[error("grid domain too small: need index {needed}, grid covers {start}..={end}")]
    GridDomainTooSmall { needed: i64, start: i64, end: i64 },
    #[error("grid or summation argument {0} is not an integer")]
    NonIntegerGridArg(String),
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("unknown axiom `{0}`")]
    UnknownAxiom(String),
    #[error("singular basis: {0}")]
    SingularBasis(String),
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("negative exponent at column {column}")]
    NegativeExponent { column: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
