use super::automorphism::Automorphism;
use super::element::FieldElement;
use super::tower::FieldTower;
use crate::matlin::Matrix;
use crate::{Error, Result};

/// A cyclic extension `E/E^σ` of degree `n`, described by the top field and
/// a generator `σ` of the group; the fixed field need not be a tower level.
#[derive(Clone, Debug)]
pub struct CyclicExtension {
    field: FieldTower,
    sigma: Automorphism,
    degree: usize,
    conjugates: Vec<Automorphism>,
}

impl CyclicExtension {
    /// Checks that `sigma` is an automorphism of exact order `degree`.
    pub fn new(sigma: &Automorphism, degree: usize) -> Result<Self> {
        if sigma.domain() != sigma.codomain() {
            return Err(Error::FieldMismatch);
        }
        if sigma.order() != Some(degree) {
            return Err(Error::NotGenerator);
        }
        let mut conjugates = vec![Automorphism::identity(sigma.domain())];
        for k in 1..degree {
            let next = sigma.compose(&conjugates[k - 1])?;
            conjugates.push(next);
        }
        Ok(CyclicExtension { field: sigma.domain().clone(), sigma: sigma.clone(), degree, conjugates })
    }

    /// The top level of a tower over its base, with `sigma` fixing the base.
    pub fn over_base(sigma: &Automorphism) -> Result<Self> {
        let field = sigma.domain();
        let base = field.base().ok_or(Error::NotGenerator)?;
        if !sigma.fixes(base) {
            return Err(Error::HypothesisViolated("automorphism moves the base field".into()));
        }
        Self::new(sigma, field.degree())
    }

    pub fn field(&self) -> &FieldTower {
        &self.field
    }

    pub fn sigma(&self) -> &Automorphism {
        &self.sigma
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `σ^k` for `0 <= k < n`.
    pub fn power(&self, k: usize) -> &Automorphism {
        &self.conjugates[k % self.degree]
    }

    pub fn conjugate(&self, x: &FieldElement, k: usize) -> FieldElement {
        self.power(k).on(x)
    }

    /// Product of the conjugates.
    pub fn norm(&self, x: &FieldElement) -> FieldElement {
        let mut acc = x.clone();
        for s in &self.conjugates[1..] {
            acc = &acc * &s.on(x);
        }
        acc
    }

    pub fn trace(&self, x: &FieldElement) -> FieldElement {
        let mut acc = x.clone();
        for s in &self.conjugates[1..] {
            acc = &acc + &s.on(x);
        }
        acc
    }

    pub fn is_fixed(&self, x: &FieldElement) -> bool {
        self.sigma.on(x) == *x
    }
}

/// Norm of `x` from its field down to the base, as the determinant of
/// multiplication by `x` on the base-coordinate blocks.
pub fn norm_by_determinant(x: &FieldElement) -> Result<FieldElement> {
    let field = x.field();
    let base = field.base().ok_or(Error::FieldMismatch)?;
    let n = field.degree();
    let basis = field.relative_basis(field.depth() - 1);
    let mut m = Matrix::zeros(base, n, n);
    for (j, e) in basis.iter().enumerate() {
        for (i, c) in (x * e).blocks().into_iter().enumerate() {
            m.set(i, j, c);
        }
    }
    Ok(m.det()?.lift(field))
}
