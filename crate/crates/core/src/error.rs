use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected} variables, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("gcd of two zero polynomials is undefined")]
    ZeroGcd,
    #[error("division by zero")]
    DivisionByZero,
    #[error("the zero polynomial has no factorization")]
    ZeroFactorization,
    #[error("no value assigned to parameter `{0}`")]
    MissingAssignment(String),
    #[error("specialization makes a denominator vanish: {0}")]
    VanishingDenominator(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("component {component} out of range for rank {rank}")]
    ComponentOutOfRange { component: usize, rank: usize },
    #[error("column {column} is not in the span of the generators")]
    NotInSpan { column: usize },
    #[error("computation budget exhausted after {0} steps")]
    BudgetExhausted(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
