//! Quiver presentations: parsing, rewriting and realization as finite-dimensional dg algebras.

mod algebra;
mod parser;
mod quiver;
mod realize;
mod rewriting;

pub use algebra::{BasisElement, FinDimDgAlgebra};
pub use parser::{
    parse_document, parse_field, parse_presentation, pretty_print, DgAlgebraPresentation, Document, ModuleSpec,
    PathPoly, TwistedSpec,
};
pub use quiver::{Arrow, GradedQuiver, Path};
pub use realize::{path_poly_into, rational_into, realize, realize_algebra, DegreeWindow, Realization};
pub use rewriting::{Poly, RewriteSystem, Rule};
