//! Exact scalar arithmetic and dense linear algebra over Q and F_p.

mod matrix;
mod scalar;

pub use matrix::{rank_of_vectors, Matrix, Rref, Vector};
pub(crate) use matrix::check_field;
pub use scalar::{is_prime, parse_rational, FieldValue, ScalarField};
pub(crate) use scalar::{format_rational, inv_mod};
