//! Exact field arithmetic and dense linear algebra over it.

mod lincomb;
mod matrix;
mod scalar;

pub use lincomb::LinComb;
pub use matrix::{coordinates, extend_basis, in_span, span_rank, Echelon, Matrix};
pub use scalar::{is_prime, parse_scalar, rational_to_string, FieldTag, Fp, Scalar};

pub type Q = num_rational::BigRational;
