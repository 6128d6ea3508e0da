//! Decision procedures: 1-generation, compliciality, semibricks and the
//! recognition hypotheses.

mod collection;
mod generation;

pub use collection::{
    complicial_check_silting, recognition_check, semibrick_check, ComplicialVerdict, EndAlgebra, Member,
    SimpleCollection,
};
pub use generation::{
    degree_two_factorable, describe_morphism, one_generated_span_check, one_generated_via_dual,
    GenerationCertificate, GenerationVerdict,
};
