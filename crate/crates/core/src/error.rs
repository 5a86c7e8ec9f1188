use thiserror::Error;

use crate::linear::ScalarField;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch {
        left: ScalarField,
        right: ScalarField,
    },

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("arity mismatch: expected {expected}, found {found}")]
    Arity { expected: usize, found: usize },

    #[error("denominator of {value} vanishes modulo {prime}")]
    BadDenominator { value: String, prime: u32 },

    #[error("group element is singular")]
    SingularGroupElement,

    #[error("point is not in the chart (determinant section vanishes)")]
    NotInChart,

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("support condition violated: {0}")]
    SupportViolation(String),

    #[error("ideal data does not define a module over the algebra: relation {0} fails")]
    RelationFailure(String),

    #[error("point is not covered by the chart family (all coordinates vanish)")]
    NotCovered,

    #[error("search space of {needed} tuples exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("free action violated: {cyclic} cyclic tuples not divisible by |GL_n| = {group_order}")]
    NonExactDivision { cyclic: u64, group_order: u64 },

    #[error("algebra is not a quotient of the source algebra: {0}")]
    NotAQuotient(String),

    #[error("operation requires the free algebra, but the presentation has relations")]
    HasRelations,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
