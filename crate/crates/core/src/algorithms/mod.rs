//! The splitting, isomorphism and extension pipelines. Each reduces to norm
//! equations and linear algebra, and every positive answer carries a witness
//! that was checked before it is returned.

mod extend;
mod iso;
mod split;

pub use extend::{extend_automorphism, twist_presentation, verify_extension, ExtensionWitness};
pub use iso::{
    iso_cyclic, iso_disjoint, iso_from_tensor_splitting, iso_generalized, iso_same_field, IntertwinerBudget,
    TensorIsomorphisms,
};
pub use split::{
    conjugator, embed_subfield, galois_matrix, shift_solution, solve_split_system, split_bicyclic, split_cyclic,
    verify_split_solution, Conjugator, SplitSolution,
};

use crate::csa::AlgebraMorphism;
use crate::fields::{CyclicExtension, DisjointnessBudget, FieldElement};
use crate::normeq::{solve_norm, Certificate, Hints, NormOutcome, NormProblem, SearchBudget};
use crate::par::Execution;
use crate::{Error, Result};

/// Answer to a decision problem.
#[derive(Clone, Debug)]
pub enum Decision<T> {
    Yes(T),
    No(Certificate),
    /// The backends could not decide; never a disguised "no".
    Undecided(String),
}

impl<T> Decision<T> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Decision::No(_))
    }

    pub fn is_undecided(&self) -> bool {
        matches!(self, Decision::Undecided(_))
    }

    pub fn witness(&self) -> Option<&T> {
        match self {
            Decision::Yes(w) => Some(w),
            _ => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Decision<U> {
        match self {
            Decision::Yes(w) => Decision::Yes(f(w)),
            Decision::No(c) => Decision::No(c),
            Decision::Undecided(r) => Decision::Undecided(r),
        }
    }
}

/// What [`verify_morphism`] checks beyond unitality and multiplicativity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MorphismKind {
    /// A bijective homomorphism.
    Isomorphism,
    /// An injective homomorphism.
    Embedding,
    /// An injective anti-homomorphism.
    Anti,
}

/// Checks unitality, (anti-)multiplicativity and injectivity or
/// bijectivity. Linearity, or semilinearity for a twisted map, holds by
/// construction.
pub fn verify_morphism(m: &AlgebraMorphism, kind: MorphismKind) -> bool {
    if m.is_anti() != (kind == MorphismKind::Anti) || !m.is_unital() {
        return false;
    }
    // Without recorded generators only the exhaustive check is sound.
    let exec = Execution::default();
    let multiplicative = if m.source().generators().is_empty() {
        m.is_multiplicative_exhaustive(exec)
    } else {
        m.is_multiplicative(exec)
    };
    if !multiplicative {
        return false;
    }
    match kind {
        MorphismKind::Isomorphism => m.is_bijective().unwrap_or(false),
        MorphismKind::Embedding | MorphismKind::Anti => m.is_injective().unwrap_or(false),
    }
}

fn ensure(m: &AlgebraMorphism, kind: MorphismKind, what: &str) -> Result<()> {
    if verify_morphism(m, kind) {
        Ok(())
    } else {
        Err(Error::VerificationFailed(what.to_string()))
    }
}

/// Backend settings shared by the pipelines.
#[derive(Clone, Debug, Default)]
pub struct Options {
    pub hints: Hints,
    pub search: SearchBudget,
    pub disjointness: DisjointnessBudget,
    /// Treat composites of distinct fields as fields without a certificate.
    pub assert_disjoint: bool,
    pub intertwiner: IntertwinerBudget,
}

fn solve(ext: &CyclicExtension, target: &FieldElement, opts: &Options) -> Result<NormOutcome> {
    solve_norm(&NormProblem::new(ext, target)?, &opts.hints, &opts.search)
}
