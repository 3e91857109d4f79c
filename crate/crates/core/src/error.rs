use thiserror::Error;

use crate::fields::FieldElement;

/// Errors raised by the library. Decision outcomes (no solution, undecided)
/// are not errors and are reported through the result types instead.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("defining polynomial is empty")]
    EmptyPolynomial,
    #[error("defining polynomial is not monic")]
    NonMonic,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("not invertible: {0}")]
    ZeroDivisor(Box<FieldElement>),
    #[error("generator images violate the defining relations")]
    InconsistentImages,
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("twisting element is not 1")]
    NonTrivialTwist,
    #[error("{0} is not coprime to the degree {1}")]
    NotCoprime(i64, usize),
    #[error("fields are not linearly disjoint")]
    NotDisjoint(Option<Box<FieldElement>>),
    #[error("hint does not solve its equation")]
    InvalidHint,
    #[error("element does not have norm 1")]
    NormNotOne,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("no conjugating matrix exists")]
    NoConjugator,
    #[error("embeddings do not centralize each other: {0}")]
    CentralizerMismatch(String),
    #[error("no invertible intertwiner found within the search budget")]
    NoInvertibleIntertwiner,
    #[error("automorphism does not generate the Galois group")]
    NotGenerator,
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
