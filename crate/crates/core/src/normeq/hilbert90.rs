use crate::fields::{CompositeExtension, CyclicExtension, FieldElement};
use crate::matlin::Matrix;
use crate::{Error, Result};

/// `y` with `σ(y)/y = u`, for `u` of norm 1, by the resolvent
/// `b = Σ_i (Π_{j<i} σ^j(u)) σ^i(c)` over the flat basis candidates `c`;
/// the first nonzero `b` gives `y = b^-1`.
pub fn hilbert90(ext: &CyclicExtension, u: &FieldElement) -> Result<FieldElement> {
    let u = u.try_lift(ext.field())?;
    if !ext.norm(&u).is_one() {
        return Err(Error::NormNotOne);
    }
    let n = ext.degree();
    let mut partial = vec![ext.field().one()];
    for j in 1..n {
        let next = &partial[j - 1] * &ext.conjugate(&u, j - 1);
        partial.push(next);
    }
    for c in ext.field().flat_basis() {
        let mut b = ext.field().zero();
        for (i, pi) in partial.iter().enumerate() {
            b = &b + &(pi * &ext.conjugate(&c, i));
        }
        if !b.is_zero() {
            let y = b.inverse()?;
            debug_assert_eq!(ext.sigma().on(&y), &u * &y);
            return Ok(y);
        }
    }
    Err(Error::HypothesisViolated("resolvent vanished on every basis element".into()))
}

/// The same equation solved as the kernel of `σ - u` over the prime field.
pub fn hilbert90_linear(ext: &CyclicExtension, u: &FieldElement) -> Result<FieldElement> {
    let field = ext.field();
    let u = u.try_lift(field)?;
    if !ext.norm(&u).is_one() {
        return Err(Error::NormNotOne);
    }
    let prime = field.level(0);
    let basis = field.flat_basis();
    let cols: Vec<Vec<FieldElement>> =
        basis.iter().map(|e| (&ext.sigma().on(e) - &(&u * e)).coords_over(&prime)).collect();
    let m = Matrix::from_columns(&prime, basis.len(), &cols)?;
    let kernel = m.kernel()?;
    let v = kernel.first().ok_or(Error::NormNotOne)?;
    FieldElement::from_coords_over(field, &prime, v)
}

/// `y` with `σ1(y)/y = x1` and `σ2(y)/y = x2` in a composite.
pub fn bicyclic_hilbert90(comp: &CompositeExtension, x1: &FieldElement, x2: &FieldElement) -> Result<FieldElement> {
    let f = comp.field();
    let (x1, x2) = (x1.try_lift(f)?, x2.try_lift(f)?);
    let (s1, s2) = (comp.sigma1(), comp.sigma2());
    if !comp.n1_norm(&x1).is_one() {
        return Err(Error::HypothesisViolated("N1(x1) != 1".into()));
    }
    if !comp.n2_norm(&x2).is_one() {
        return Err(Error::HypothesisViolated("N2(x2) != 1".into()));
    }
    if x1.is_zero() || x2.is_zero() || &(&s2.on(&x1) / &x1) * &(&x2 / &s1.on(&x2)) != f.one() {
        return Err(Error::HypothesisViolated("x1 and x2 are not compatible".into()));
    }
    let y1 = hilbert90(comp.first(), &x1)?;
    let c = &(&x2 * &y1) / &s2.on(&y1);
    let c =
        comp.project_right(&c).ok_or_else(|| Error::HypothesisViolated("x2 y1/σ2(y1) is not fixed by σ1".into()))?;
    let right = CyclicExtension::over_base(comp.right_sigma())?;
    let y2 = comp.embed_right(&hilbert90(&right, &c)?);
    let y = &y1 * &y2;
    if s1.on(&y) != &x1 * &y || s2.on(&y) != &x2 * &y {
        return Err(Error::VerificationFailed("bicyclic Hilbert 90".into()));
    }
    Ok(y)
}
