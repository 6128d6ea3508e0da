//! One-sided twisted complexes over an A-infinity algebra with idempotents.
//!
//! Operations are evaluated in the bar convention on the additive
//! enlargement: for morphisms between shifted entries
//! `b(x_1, .., x_n) = (-1)^r b_A(x_1, .., x_n)` with `r` the shift of the
//! final target, and `b^tw` inserts the twists in every gap.

mod complex;
mod filt;

pub use complex::{
    arity_needed, co_t_parts, cocone, compose, cone, hom_basis, hom_complex, m1_tw, m_tw, mc_check, zero_matrix,
    HomBasisElem, TwHom, TwMatrix, TwMorphism, TwistedComplex,
};
pub use filt::{filt_objects, FieldEnumeration, HeartWindowConfig};
