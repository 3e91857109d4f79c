//! Central simple algebras given by cyclic, generalized cyclic and bicyclic
//! presentations, their expansion to structure constants, and morphisms
//! between structure-constant algebras.

mod bicyclic;
mod cyclic;
mod generalized;
mod morphism;
mod sca;

pub use bicyclic::{pair_to_bicyclic, BicyclicPresentation, BicyclicReport};
pub use cyclic::CyclicPresentation;
pub use generalized::GeneralizedCyclicPresentation;
pub use morphism::{AlgebraMorphism, Codomain};
pub use sca::{Row, Side, StructureConstantAlgebra};
