use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("letter {letter} is outside the alphabet 1..={d}")]
    LetterOutOfRange { letter: usize, d: usize },

    /// An operator would have produced a component above the truncation level.
    #[error("truncation overflow: result reaches level {level}, space is truncated at {max}")]
    TruncationOverflow { level: usize, max: usize },

    #[error("Gram matrix at level {level} is singular")]
    SingularGram { level: usize },

    /// Float Cholesky failed; the parameter is too close to the boundary for f64.
    #[error("Gram matrix at level {level} is not numerically positive definite")]
    GramNotPositive { level: usize },

    #[error("invalid deformation: {0}")]
    InvalidDeformation(String),

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("number operator is not invertible on the constant term (coefficient {0})")]
    ConstantTerm(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
