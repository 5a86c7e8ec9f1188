//! Exact linear algebra, noncommutative polynomials and point/orbit/cell
//! machinery for Hilbert schemes of points on finitely presented
//! associative algebras.

pub mod cells;
pub mod error;
pub mod freealg;
pub mod json;
pub mod linear;
pub mod orbits;
pub mod points;
pub mod random;
pub mod tangent;

pub use error::{Error, Result};
