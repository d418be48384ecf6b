use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("the zero polynomial has infinitely many roots")]
    ZeroPolynomial,

    #[error("invalid interval [{a}, {b}]: left end must be smaller than right end")]
    InvalidInterval { a: String, b: String },

    #[error("operator has no nonzero coefficient")]
    ZeroOperator,

    #[error("invalid rational literal `{0}`")]
    InvalidRational(String),

    #[error("expected {expected} conditions (one per derivative order), got {got}")]
    ConditionCount { expected: usize, got: usize },

    #[error("condition {0} has no terms")]
    EmptyCondition(usize),

    #[error("order must exceed N={cutoff} (got {order})")]
    OrderTooLow { order: usize, cutoff: i64 },

    #[error("order {order} is too small to carry {tau_count} tau terms of degree order-i+1")]
    TooManyTaus { order: usize, tau_count: usize },

    #[error(
        "polynomial of degree {degree} exceeds the generated canonical range (bound {bound}); \
         regenerate with a larger bound"
    )]
    BoundExceeded { degree: usize, bound: usize },

    #[error("g not in range of D: matching condition for x^{index} violated")]
    NotInRange { index: usize },

    #[error("conditions and STMC are linearly dependent or inconsistent")]
    SingularSystem,
}

pub type Result<T> = std::result::Result<T, Error>;
