use std::fmt;

use super::automorphism::Automorphism;
use super::cyclic::CyclicExtension;
use super::element::{rational_mod, FieldElement};
use super::modp;
use super::poly::Poly;
use super::small::SmallVectors;
use super::tower::{FieldTower, PrimeField};
use crate::matlin::Matrix;
use crate::{Error, Result};

/// Evidence that a composite is a field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjointnessCertificate {
    /// Prime used for the reduction (the characteristic for finite fields).
    pub prime: u64,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub enum Fieldness {
    Field(DisjointnessCertificate),
    /// A nonzero zero divisor of the composite.
    NotField(FieldElement),
    Unknown,
}

impl Fieldness {
    pub fn is_field(&self) -> bool {
        matches!(self, Fieldness::Field(_))
    }
}

/// Limits for [`CompositeExtension::check_linear_disjointness`].
#[derive(Clone, Copy, Debug)]
pub struct DisjointnessBudget {
    /// Largest prime tried for the reduction certificate.
    pub prime_bound: u64,
    /// Number of small elements probed for a common root.
    pub probe_limit: usize,
}

impl Default for DisjointnessBudget {
    fn default() -> Self {
        DisjointnessBudget { prime_bound: 3000, probe_limit: 20_000 }
    }
}

/// The tensor product `L1 ⊗_K L2` of two cyclic extensions, realized as
/// `L1[y]/(p2(y))` where `p2` defines `L2`. `σ1 = τ1 ⊗ id`, `σ2 = id ⊗ τ2`;
/// the fixed field of `σ2` is (the image of) `L1` and that of `σ1` is `L2`.
#[derive(Clone)]
pub struct CompositeExtension {
    base: FieldTower,
    left: FieldTower,
    right: FieldTower,
    field: FieldTower,
    left_sigma: Automorphism,
    right_sigma: Automorphism,
    right_embedding: Automorphism,
    first: CyclicExtension,
    second: CyclicExtension,
    fieldness: Fieldness,
}

impl CompositeExtension {
    /// Builds the composite of two single-level cyclic extensions of the same
    /// base field. `label` names the adjoined copy of the right generator.
    pub fn new(left_sigma: &Automorphism, right_sigma: &Automorphism, label: &str) -> Result<Self> {
        let left = left_sigma.domain().clone();
        let right = right_sigma.domain().clone();
        let base = left.base().ok_or(Error::FieldMismatch)?.clone();
        if right.base() != Some(&base) {
            return Err(Error::FieldMismatch);
        }
        let left_ext = CyclicExtension::over_base(left_sigma)?;
        let right_ext = CyclicExtension::over_base(right_sigma)?;
        let p2 = right.modulus().lift(&left);
        let field = FieldTower::extension_by(&left, &p2, label)?;
        let kd = base.depth();
        let mut emb: Vec<FieldElement> = (1..=kd).map(|d| field.level_generator(d)).collect();
        emb.push(field.generator());
        let right_embedding = Automorphism::new(&right, &field, emb)?;

        let mut s1: Vec<FieldElement> = (1..=kd).map(|d| field.level_generator(d)).collect();
        s1.push(left_sigma.top_image().lift(&field));
        s1.push(field.generator());
        let sigma1 = Automorphism::new(&field, &field, s1)?;

        let mut s2: Vec<FieldElement> = (1..=kd).map(|d| field.level_generator(d)).collect();
        s2.push(field.level_generator(kd + 1));
        s2.push(right_embedding.on(right_sigma.top_image()));
        let sigma2 = Automorphism::new(&field, &field, s2)?;

        let first = CyclicExtension::new(&sigma1, left_ext.degree())?;
        let second = CyclicExtension::new(&sigma2, right_ext.degree())?;
        Ok(CompositeExtension {
            base,
            left,
            right,
            field,
            left_sigma: left_sigma.clone(),
            right_sigma: right_sigma.clone(),
            right_embedding,
            first,
            second,
            fieldness: Fieldness::Unknown,
        })
    }

    pub fn base(&self) -> &FieldTower {
        &self.base
    }

    /// `L1`, the fixed field of `σ2`.
    pub fn left(&self) -> &FieldTower {
        &self.left
    }

    /// `L2`, the fixed field of `σ1`.
    pub fn right(&self) -> &FieldTower {
        &self.right
    }

    pub fn field(&self) -> &FieldTower {
        &self.field
    }

    pub fn left_sigma(&self) -> &Automorphism {
        &self.left_sigma
    }

    pub fn right_sigma(&self) -> &Automorphism {
        &self.right_sigma
    }

    pub fn sigma1(&self) -> &Automorphism {
        self.first.sigma()
    }

    pub fn sigma2(&self) -> &Automorphism {
        self.second.sigma()
    }

    /// `F/F1` with group generated by `σ1`.
    pub fn first(&self) -> &CyclicExtension {
        &self.first
    }

    /// `F/F2` with group generated by `σ2`.
    pub fn second(&self) -> &CyclicExtension {
        &self.second
    }

    pub fn n1(&self) -> usize {
        self.first.degree()
    }

    pub fn n2(&self) -> usize {
        self.second.degree()
    }

    pub fn fieldness(&self) -> &Fieldness {
        &self.fieldness
    }

    pub fn embed_left(&self, x: &FieldElement) -> FieldElement {
        x.lift(&self.field)
    }

    pub fn embed_right(&self, x: &FieldElement) -> FieldElement {
        self.right_embedding.on(x)
    }

    pub fn right_embedding(&self) -> &Automorphism {
        &self.right_embedding
    }

    pub fn project_left(&self, x: &FieldElement) -> Option<FieldElement> {
        x.lower(&self.left)
    }

    /// Preimage in `L2` of a `σ1`-fixed element.
    pub fn project_right(&self, x: &FieldElement) -> Option<FieldElement> {
        let blocks: Option<Vec<FieldElement>> = x.blocks().iter().map(|b| b.lower(&self.base)).collect();
        FieldElement::from_blocks(&self.right, &blocks?).ok()
    }

    pub fn project_base(&self, x: &FieldElement) -> Option<FieldElement> {
        x.lower(&self.base)
    }

    pub fn n1_norm(&self, x: &FieldElement) -> FieldElement {
        self.first.norm(x)
    }

    pub fn n2_norm(&self, x: &FieldElement) -> FieldElement {
        self.second.norm(x)
    }

    /// Coordinates of `x` in the basis `θ^i` over `F1 = L2`.
    pub fn coords_over_right(&self, x: &FieldElement) -> Vec<FieldElement> {
        let n1 = self.n1();
        let blocks = x.blocks(); // over L1, indexed by powers of η
        (0..n1)
            .map(|i| {
                let ks: Vec<FieldElement> = blocks.iter().map(|b| b.blocks()[i].clone()).collect();
                FieldElement::from_blocks(&self.right, &ks).unwrap()
            })
            .collect()
    }

    /// `N1(x)` as the determinant of multiplication by `x` over `F1`.
    pub fn n1_norm_by_determinant(&self, x: &FieldElement) -> Result<FieldElement> {
        let n1 = self.n1();
        let theta = self.field.level_generator(self.left.depth());
        let mut m = Matrix::zeros(&self.right, n1, n1);
        let mut basis = self.field.one();
        for j in 0..n1 {
            for (i, c) in self.coords_over_right(&(x * &basis)).into_iter().enumerate() {
                m.set(i, j, c);
            }
            basis = &basis * &theta;
        }
        Ok(self.embed_right(&m.det()?))
    }

    /// `N2(x)` as the determinant of multiplication by `x` over `F2 = L1`.
    pub fn n2_norm_by_determinant(&self, x: &FieldElement) -> Result<FieldElement> {
        super::cyclic::norm_by_determinant(x)
    }

    /// Decides whether the composite is a field where this is cheap.
    ///
    /// Over a finite base the answer is always definite. Over a number field
    /// a prime `p` is sought with a degree-one prime of the base, a simple root
    /// of one defining polynomial and an irreducible reduction of the other;
    /// this rules out any factorization over the completion. Failing that, small
    /// elements of one side are probed as roots of the other side's polynomial.
    pub fn check_linear_disjointness(&self, budget: DisjointnessBudget) -> Fieldness {
        match self.base.prime() {
            PrimeField::Modular(p) => self.check_finite(p).unwrap_or(Fieldness::Unknown),
            PrimeField::Rationals => {
                if let Some(c) = self.reduction_certificate(budget.prime_bound) {
                    return Fieldness::Field(c);
                }
                self.probe_common_root(budget.probe_limit).map_or(Fieldness::Unknown, Fieldness::NotField)
            }
        }
    }

    /// Returns a copy carrying the outcome of [`Self::check_linear_disjointness`].
    pub fn certified(mut self, budget: DisjointnessBudget) -> Self {
        self.fieldness = self.check_linear_disjointness(budget);
        self
    }

    /// Records a caller assertion that the composite is a field.
    pub fn assume_field(mut self, detail: &str) -> Self {
        self.fieldness = Fieldness::Field(DisjointnessCertificate { prime: 0, detail: format!("asserted: {detail}") });
        self
    }

    fn check_finite(&self, p: u64) -> Result<Fieldness> {
        let p1 = self.left.modulus().lift(&self.right);
        if p1.is_irreducible_finite()? {
            return Ok(Fieldness::Field(DisjointnessCertificate {
                prime: p,
                detail: format!("{} stays irreducible over {}", self.left.label(), self.right.label()),
            }));
        }
        let Some(g) = p1.proper_factor_finite()? else {
            return Ok(Fieldness::Unknown);
        };
        let theta = self.field.level_generator(self.left.depth());
        let mut w = self.field.zero();
        for c in g.coeffs().iter().rev() {
            w = &(&w * &theta) + &self.embed_right(c);
        }
        Ok(Fieldness::NotField(w))
    }

    fn reduction_certificate(&self, bound: u64) -> Option<DisjointnessCertificate> {
        let p1 = self.left.modulus();
        let p2 = self.right.modulus();
        'primes: for p in 2..=bound {
            if !modp::is_prime(p) {
                continue;
            }
            let mut roots: Vec<u64> = Vec::new();
            for d in 1..=self.base.depth() {
                let f = self.base.level(d).modulus();
                let Some(fp) = reduce_poly(&f, &roots, p) else {
                    continue 'primes;
                };
                match modp::poly::simple_roots(&fp, p).first() {
                    Some(&r) => roots.push(r),
                    None => continue 'primes,
                }
            }
            let (Some(f1), Some(f2)) = (reduce_poly(&p1, &roots, p), reduce_poly(&p2, &roots, p)) else {
                continue;
            };
            for (irr, split, irr_name, split_name) in
                [(&f1, &f2, self.left.label(), self.right.label()), (&f2, &f1, self.right.label(), self.left.label())]
            {
                if modp::poly::is_irreducible(irr, p) {
                    if let Some(&r) = modp::poly::simple_roots(split, p).first() {
                        return Some(DisjointnessCertificate {
                            prime: p,
                            detail: format!(
                                "mod {p} at base roots {roots:?}: {irr_name} irreducible, {split_name} has simple root {r}"
                            ),
                        });
                    }
                }
            }
        }
        None
    }

    fn probe_common_root(&self, limit: usize) -> Option<FieldElement> {
        let p2 = self.right.modulus().lift(&self.left);
        let eta = self.field.generator();
        for v in SmallVectors::new(self.left.absolute_degree()).take(limit) {
            let t = FieldElement::from_int_coords(&self.left, &v);
            if p2.eval(&t).is_zero() {
                return Some(&eta - &t.lift(&self.field));
            }
        }
        let p1 = self.left.modulus().lift(&self.right);
        let theta = self.field.level_generator(self.left.depth());
        for v in SmallVectors::new(self.right.absolute_degree()).take(limit) {
            let s = FieldElement::from_int_coords(&self.right, &v);
            if p1.eval(&s).is_zero() {
                return Some(&theta - &self.embed_right(&s));
            }
        }
        None
    }
}

/// Image of `x` under the ring map sending the generator of level `d` to
/// `roots[d-1]` mod `p`; `None` if a denominator is divisible by `p`.
pub(crate) fn reduce_element(x: &FieldElement, roots: &[u64], p: u64) -> Option<u64> {
    let depth = x.field().depth();
    if depth == 0 {
        return rational_mod(&x.as_rational()?, p);
    }
    let r = roots[depth - 1];
    let mut acc = 0u64;
    for b in x.blocks().iter().rev() {
        acc = (modp::mul_mod(acc, r, p) + reduce_element(b, roots, p)?) % p;
    }
    Some(acc)
}

pub(crate) fn reduce_poly(f: &Poly, roots: &[u64], p: u64) -> Option<Vec<u64>> {
    let v: Option<Vec<u64>> = f.coeffs().iter().map(|c| reduce_element(c, roots, p)).collect();
    Some(modp::poly::trim(v?))
}

impl fmt::Debug for CompositeExtension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (x) {} over {}", self.left.label(), self.right.label(), self.base.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadratic(q: &FieldTower, c: i64, label: &str) -> Automorphism {
        let k = FieldTower::extension(q, &[q.int(c), q.zero(), q.one()], label).unwrap();
        Automorphism::top_level(&k, -k.generator()).unwrap()
    }

    #[test]
    fn gaussian_times_sqrt2_is_a_field() {
        let q = FieldTower::rationals();
        let c = CompositeExtension::new(&quadratic(&q, 1, "i"), &quadratic(&q, -2, "s"), "s").unwrap();
        let c = c.certified(DisjointnessBudget::default());
        match c.fieldness() {
            Fieldness::Field(cert) => assert_eq!(cert.prime, 5),
            other => panic!("expected a certificate, got {other:?}"),
        }
        let x = FieldElement::from_int_coords(c.field(), &[1, 2, 3, 4]);
        assert_eq!(c.n1_norm(&x), c.n1_norm_by_determinant(&x).unwrap());
        assert_eq!(c.n2_norm(&x), c.n2_norm_by_determinant(&x).unwrap());
        assert!(c.first().is_fixed(&c.n1_norm(&x)));
        assert!(c.second().is_fixed(&c.n2_norm(&x)));
    }

    #[test]
    fn gaussian_times_itself_has_a_zero_divisor() {
        let q = FieldTower::rationals();
        let c = CompositeExtension::new(&quadratic(&q, 1, "i"), &quadratic(&q, 1, "j"), "j").unwrap();
        match c.check_linear_disjointness(DisjointnessBudget::default()) {
            Fieldness::NotField(w) => {
                assert!(!w.is_zero());
                assert!(w.inverse().is_err());
            }
            other => panic!("expected a zero divisor, got {other:?}"),
        }
    }

    #[test]
    fn finite_composites() {
        let f2 = FieldTower::prime_field(2).unwrap();
        let f4 = FieldTower::finite_extension(&f2, 2, "a").unwrap();
        let f8 = FieldTower::finite_extension(&f2, 3, "b").unwrap();
        let s4 = Automorphism::frobenius(&f4, &f2).unwrap();
        let s8 = Automorphism::frobenius(&f8, &f2).unwrap();
        let c = CompositeExtension::new(&s4, &s8, "b").unwrap();
        assert!(c.check_linear_disjointness(DisjointnessBudget::default()).is_field());
        let d = CompositeExtension::new(&s4, &s4.clone(), "c").unwrap();
        assert!(matches!(d.check_linear_disjointness(DisjointnessBudget::default()), Fieldness::NotField(_)));
    }
}
