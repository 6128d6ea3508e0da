//! Exact computations with finite-dimensional dg algebras over quivers:
//! Koszul duals, minimal A-infinity models, twisted complexes, generation
//! checks for extended hearts and Loewy lengths.

pub mod ainfty;
pub mod checks;
pub mod error;
pub mod dgmod;
pub mod exactlin;
pub mod loewy;
pub mod presentations;
pub mod report;
pub mod twisted;

pub use error::{Error, Result};
pub use exactlin::{FieldTag, Fp, LinComb, Matrix, Scalar, Q};
pub use report::{CheckReport, Verdict, Window};

pub type F2 = Fp<2>;
pub type F3 = Fp<3>;
pub type F5 = Fp<5>;
pub type F7 = Fp<7>;
