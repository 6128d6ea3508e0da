//! Dg modules, semifree resolutions, Ext and Koszul duality.

mod koszul;
mod module;
mod resolution;

pub use koszul::{
    bar_dual, check_concentration, double_dual_compare, koszul_dual, koszul_dual_of_coconnective,
    koszul_dual_of_minimal, BarDual, Certificate, KoszulDual,
};
pub use module::{cone, DgModule, ModElem, ModuleMap};
pub use resolution::{
    extend_on, lift, semifree_resolution, yoneda, ExtGroups, GenMap, Generator, HomComplex, SemifreeResolution,
};
