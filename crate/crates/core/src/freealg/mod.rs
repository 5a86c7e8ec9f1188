//! The free algebra `F_m = k<x_1, ..., x_m>`: words, polynomials,
//! presentations `F_m / R`, and evaluation at matrix tuples.

mod algebra;
mod eval;
mod poly;
mod word;

pub use algebra::AlgebraPresentation;
pub(crate) use eval::check_tuple;
pub use eval::{apply_poly_to_vector, apply_word_to_vector, differentiate, differentiate_word, evaluate};
pub use poly::NCPoly;
pub use word::Word;
