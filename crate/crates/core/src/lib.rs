//! Exact computations with cyclic and bicyclic crossed-product algebras:
//! splitting, isomorphism testing and extension of base-field automorphisms,
//! all reduced to norm equations and linear algebra over towers of number
//! fields or finite fields.

pub mod algorithms;
pub mod csa;
pub mod error;
pub mod fields;
pub mod matlin;
pub mod normeq;
pub mod par;

pub use error::{Error, Result};
