use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A generator name is used both as a polynomial variable and as a
    /// parameter of the coefficient field.
    #[error("field mismatch: `{0}` is both a generator and a coefficient parameter")]
    FieldMismatch(String),

    #[error("series is not divisible by nu^{power}: coefficient of nu^{order} is nonzero")]
    NotDivisible { power: usize, order: usize },

    #[error("arity mismatch: operator has arity {expected}, got {found} arguments")]
    ArityMismatch { expected: usize, found: usize },

    #[error("slot {slot} out of range for operator of arity {arity}")]
    SlotOutOfRange { slot: usize, arity: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("variable `{0}` is not part of the target context")]
    UnknownVariable(String),

    #[error("structure constants violate {0}")]
    LieAlgebra(String),

    #[error("connection is not symplectic: {0}")]
    NotSymplectic(String),

    #[error("2-form is not closed: {0}")]
    NotClosed(String),

    #[error("coefficient has a pole at infinity")]
    PoleAtInfinity,

    #[error("action is not a Lie algebra morphism into derivations: {0}")]
    BadAction(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),
}
