//! A-infinity algebras: Stasheff identities, retracts and minimal models.

mod algebra;
mod retract;
mod stasheff;
mod transfer;

pub use algebra::{bar_sign_exponent, AInfinityAlgebra};
pub use retract::{build_retract, RetractData};
pub use stasheff::{check_stasheff, check_strict_unitality, stasheff_defect};
pub use transfer::{cohomology_algebra, minimal_model, minimal_model_with};
