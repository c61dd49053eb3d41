use thiserror::Error;

use crate::linalg::FieldSpec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: FieldSpec, right: FieldSpec },

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("value {value} cannot be represented in {field}")]
    NotRepresentable { value: String, field: FieldSpec },

    #[error("division by zero")]
    DivisionByZero,

    #[error("matrix entry is not an integer: {0}")]
    NonIntegerEntry(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("symmetry violation: {0}")]
    SymmetryViolation(String),

    #[error("wrong cochain kind: {0}")]
    WrongCochainKind(String),

    #[error("incompatible symmetry classes: {0}")]
    IncompatibleClasses(String),

    #[error("not a simple Filippov algebra")]
    NotSimpleFilippov,

    #[error("not a cocycle: {0}")]
    NotCocycle(String),

    #[error("degenerate Killing form: {0}")]
    DegenerateKillingForm(String),

    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
