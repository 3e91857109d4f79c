//! Exact arithmetic in towers of simple extensions over `Q` or `F_p`,
//! automorphisms given by generator images, cyclic norms, and composites of
//! two cyclic extensions.

mod automorphism;
mod composite;
mod cyclic;
mod element;
mod minpoly;
pub mod modp;
mod poly;
mod small;
mod tower;

pub use automorphism::Automorphism;
pub use composite::{CompositeExtension, DisjointnessBudget, DisjointnessCertificate, Fieldness};
pub use cyclic::{norm_by_determinant, CyclicExtension};
pub use element::FieldElement;
pub use minpoly::minimal_polynomial;
pub use poly::Poly;
pub use small::SmallVectors;
pub use tower::{FieldTower, PrimeField};
