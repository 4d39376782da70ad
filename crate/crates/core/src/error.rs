use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("gcd of two zero polynomials is undefined")]
    GcdOfZeros,

    #[error("n = {n} is out of range (expected {expected})")]
    OutOfRange { n: u64, expected: &'static str },

    #[error("the zero form has no well-defined factorization")]
    ZeroForm,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("group is not finite within cap {cap}")]
    NotFinite { cap: usize },

    #[error("group of order {order} is not conjugate to any finite subgroup of GL2(Q)")]
    UnclassifiableGroup { order: usize },

    #[error("weight formula for groups with non-integral entries is not supported")]
    NonIntegralGroup,

    #[error("automorphism verification failed: {0}")]
    VerificationFailed(String),

    #[error("argument must be positive, got {0}")]
    NonPositiveArgument(f64),

    #[error("form has a repeated linear factor")]
    NotSquarefree,

    #[error("form degree {0} is below 3")]
    DegreeTooSmall(usize),

    #[error("quadrature reached error estimate {error:e} (> tolerance {tol:e}), value {value}")]
    QuadratureFailed { value: f64, error: f64, tol: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
