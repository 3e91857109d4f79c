use std::sync::OnceLock;

use super::cyclic::CyclicPresentation;
use super::morphism::{AlgebraMorphism, Codomain};
use super::sca::{power_label, StructureConstantAlgebra};
use crate::fields::{Automorphism, CompositeExtension, FieldElement, FieldTower, Fieldness};
use crate::par::{self, Execution};
use crate::{Error, Result};

/// Outcome of checking the compatibility conditions of a bicyclic presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BicyclicReport {
    /// `σ1(b1) = b1`.
    pub b1_fixed: bool,
    /// `σ2(b2) = b2`.
    pub b2_fixed: bool,
    /// `N1(u) = σ2(b1)/b1`.
    pub first_relation: bool,
    /// `N2(u) = b2/σ1(b2)`.
    pub second_relation: bool,
}

impl BicyclicReport {
    pub fn is_ok(&self) -> bool {
        self.b1_fixed && self.b2_fixed && self.first_relation && self.second_relation
    }
}

/// The algebra `⊕ F z1^k z2^l` over a composite `F = L1 L2` with
/// `z_i λ = σ_i(λ) z_i`, `z1^n1 = b1`, `z2^n2 = b2` and `z2 z1 = u z1 z2`.
#[derive(Clone, Debug)]
pub struct BicyclicPresentation {
    comp: CompositeExtension,
    z_labels: (String, String),
    u: FieldElement,
    b1: FieldElement,
    b2: FieldElement,
    sca: OnceLock<StructureConstantAlgebra>,
    /// `σ1^k σ2^l` at index `k + n1 l`.
    shifts: OnceLock<Vec<Automorphism>>,
    /// `c(l, s)` at index `s + n1 l`.
    factors: OnceLock<Vec<FieldElement>>,
}

impl BicyclicPresentation {
    /// Records the data without checking the relations; see [`Self::validate`].
    pub fn new(
        comp: &CompositeExtension,
        u: &FieldElement,
        b1: &FieldElement,
        b2: &FieldElement,
        z_labels: (&str, &str),
    ) -> Result<Self> {
        let f = comp.field();
        let lift = |x: &FieldElement| x.try_lift(f);
        let (u, b1, b2) = (lift(u)?, lift(b1)?, lift(b2)?);
        if u.is_zero() || b1.is_zero() || b2.is_zero() {
            return Err(Error::InvalidPresentation("u, b1 and b2 must be nonzero".into()));
        }
        Ok(BicyclicPresentation {
            comp: comp.clone(),
            z_labels: (z_labels.0.to_string(), z_labels.1.to_string()),
            u,
            b1,
            b2,
            sca: OnceLock::new(),
            shifts: OnceLock::new(),
            factors: OnceLock::new(),
        })
    }

    /// [`Self::new`] followed by [`Self::validate`].
    pub fn checked(
        comp: &CompositeExtension,
        u: &FieldElement,
        b1: &FieldElement,
        b2: &FieldElement,
        z_labels: (&str, &str),
    ) -> Result<Self> {
        let c = Self::new(comp, u, b1, b2, z_labels)?;
        let report = c.validate();
        if !report.is_ok() {
            return Err(Error::InvalidPresentation(format!("{report:?}")));
        }
        Ok(c)
    }

    pub fn composite(&self) -> &CompositeExtension {
        &self.comp
    }

    pub fn field(&self) -> &FieldTower {
        self.comp.field()
    }

    pub fn base(&self) -> &FieldTower {
        self.comp.base()
    }

    pub fn u(&self) -> &FieldElement {
        &self.u
    }

    pub fn b1(&self) -> &FieldElement {
        &self.b1
    }

    pub fn b2(&self) -> &FieldElement {
        &self.b2
    }

    pub fn z_labels(&self) -> (&str, &str) {
        (&self.z_labels.0, &self.z_labels.1)
    }

    pub fn validate(&self) -> BicyclicReport {
        let (s1, s2) = (self.comp.sigma1(), self.comp.sigma2());
        let ratio = |num: &FieldElement, den: &FieldElement| num.checked_div(den).ok();
        BicyclicReport {
            b1_fixed: s1.on(&self.b1) == self.b1,
            b2_fixed: s2.on(&self.b2) == self.b2,
            first_relation: ratio(&s2.on(&self.b1), &self.b1) == Some(self.comp.n1_norm(&self.u)),
            second_relation: ratio(&self.b2, &s1.on(&self.b2)) == Some(self.comp.n2_norm(&self.u)),
        }
    }

    fn shifts(&self) -> &[Automorphism] {
        self.shifts.get_or_init(|| {
            let (n1, n2) = (self.comp.n1(), self.comp.n2());
            (0..n1 * n2)
                .map(|kl| {
                    let (k, l) = (kl % n1, kl / n1);
                    self.comp.first().power(k).compose(self.comp.second().power(l)).expect("same field")
                })
                .collect()
        })
    }

    /// `σ1^k σ2^l`.
    pub fn shift(&self, k: usize, l: usize) -> &Automorphism {
        let (n1, n2) = (self.comp.n1(), self.comp.n2());
        &self.shifts()[k % n1 + n1 * (l % n2)]
    }

    /// `c(l, s)` with `z2^l z1^s = c(l, s) z1^s z2^l`.
    fn commutator_factor(&self, l: usize, s: usize) -> FieldElement {
        let first = self.comp.first();
        let mut c1 = self.field().one();
        for r in 0..s {
            c1 = &c1 * &first.conjugate(&self.u, r);
        }
        let mut c = self.field().one();
        for _ in 0..l {
            c = &self.comp.sigma2().on(&c) * &c1;
        }
        c
    }

    /// Degree of `F` over `K`, the number of `F`-coordinates of each part.
    pub fn field_degree(&self) -> usize {
        self.comp.n1() * self.comp.n2()
    }

    /// Product of elements given as `F`-parts at index `k + n1 l`.
    pub fn mul_parts(&self, x: &[FieldElement], y: &[FieldElement]) -> Vec<FieldElement> {
        let (n1, n2) = (self.comp.n1(), self.comp.n2());
        let mut out = vec![self.field().zero(); n1 * n2];
        let first = self.comp.first();
        let factors =
            self.factors.get_or_init(|| (0..n1 * n2).map(|sl| self.commutator_factor(sl / n1, sl % n1)).collect());
        for (kl, f) in x.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let (k, l) = (kl % n1, kl / n1);
            for (st, g) in y.iter().enumerate() {
                if g.is_zero() {
                    continue;
                }
                let (s, t) = (st % n1, st / n1);
                let mut c = f * &self.shift(k, l).on(g);
                c = &c * &first.conjugate(&factors[s + n1 * l], k);
                let mut e1 = k + s;
                if e1 >= n1 {
                    c = &c * &self.b1;
                    e1 -= n1;
                }
                let mut e2 = l + t;
                if e2 >= n2 {
                    c = &c * &first.conjugate(&self.b2, e1);
                    e2 -= n2;
                }
                let idx = e1 + n1 * e2;
                out[idx] = &out[idx] + &c;
            }
        }
        out
    }

    /// Basis of `F` over `K` in flat order `θ^i η^j` (index `j n1 + i`).
    fn field_basis(&self) -> Vec<FieldElement> {
        let n = self.field_degree();
        let k = self.base();
        (0..n)
            .map(|i| {
                let mut coords = vec![k.zero(); n];
                coords[i] = k.one();
                FieldElement::from_coords_over(self.field(), k, &coords).expect("coordinate count")
            })
            .collect()
    }

    /// `Σ parts[k + n1 l] z1^k z2^l` in algebra coordinates.
    pub fn element(&self, parts: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if parts.len() != self.field_degree() {
            return Err(Error::DimensionMismatch("wrong number of parts".into()));
        }
        let parts: Vec<FieldElement> = parts.iter().map(|p| p.try_lift(self.field())).collect::<Result<_>>()?;
        Ok(self.to_coords(&parts))
    }

    fn to_coords(&self, parts: &[FieldElement]) -> Vec<FieldElement> {
        parts.iter().flat_map(|p| p.coords_over(self.base())).collect()
    }

    pub fn parts(&self, x: &[FieldElement]) -> Result<Vec<FieldElement>> {
        let n = self.field_degree();
        if x.len() != n * n {
            return Err(Error::DimensionMismatch("not an element of this algebra".into()));
        }
        x.chunks(n).map(|c| FieldElement::from_coords_over(self.field(), self.base(), c)).collect()
    }

    /// `λ ∈ F` in algebra coordinates.
    pub fn scalar(&self, lambda: &FieldElement) -> Vec<FieldElement> {
        let mut p = vec![self.field().zero(); self.field_degree()];
        p[0] = lambda.lift(self.field());
        self.to_coords(&p)
    }

    /// `z1^k z2^l`.
    pub fn z_power(&self, k: usize, l: usize) -> Vec<FieldElement> {
        let n1 = self.comp.n1();
        let mut p = vec![self.field().zero(); self.field_degree()];
        p[k + n1 * l] = self.field().one();
        self.to_coords(&p)
    }

    /// The structure constants on the basis `θ^i η^j z1^k z2^l`, index
    /// `(j n1 + i) + n1 n2 (k + n1 l)`.
    pub fn sca(&self) -> &StructureConstantAlgebra {
        self.sca.get_or_init(|| {
            let n = self.field_degree();
            let n1 = self.comp.n1();
            let basis = self.field_basis();
            let (left, right) = (self.comp.left().label(), self.field().label());
            let labels = (0..n * n)
                .map(|idx| {
                    let (a, kl) = (idx % n, idx / n);
                    let mut parts = Vec::new();
                    for (lab, e) in [
                        (left, a % n1),
                        (right, a / n1),
                        (self.z_labels.0.as_str(), kl % n1),
                        (self.z_labels.1.as_str(), kl / n1),
                    ] {
                        if e > 0 {
                            parts.push(power_label(lab, e));
                        }
                    }
                    if parts.is_empty() {
                        "1".to_string()
                    } else {
                        parts.join("*")
                    }
                })
                .collect::<Vec<_>>();
            // Warm the shared caches before the parallel table build.
            self.shifts();
            self.mul_parts(&[], &[]);
            let zero = self.field().zero();
            let unit = |idx: usize| {
                let mut p = vec![zero.clone(); n];
                p[idx / n] = basis[idx % n].clone();
                p
            };
            let alg = StructureConstantAlgebra::from_products(self.base(), labels, |x, y| {
                self.to_coords(&self.mul_parts(&unit(x), &unit(y)))
            })
            .expect("valid table");
            alg.with_generators(self.generator_indices())
        })
    }

    fn generator_indices(&self) -> Vec<usize> {
        let (n1, n2) = (self.comp.n1(), self.comp.n2());
        let n = n1 * n2;
        let mut g = Vec::new();
        if n1 > 1 {
            g.extend([1, n]);
        }
        if n2 > 1 {
            g.extend([n1, n * n1]);
        }
        g
    }

    /// Images of the generators `(θ, η, z1, z2)` in algebra coordinates.
    pub fn generators(&self) -> Vec<Vec<FieldElement>> {
        let f = self.field();
        let theta = f.level_generator(self.comp.left().depth());
        let (n1, n2) = (self.comp.n1(), self.comp.n2());
        vec![self.scalar(&theta), self.scalar(&f.generator()), self.z_power(1 % n1, 0), self.z_power(0, 1 % n2)]
    }

    /// Basis element `θ^i η^j z1^k z2^l` as a word in [`Self::generators`].
    pub fn basis_words(&self) -> Vec<Vec<usize>> {
        let (n1, n) = (self.comp.n1(), self.field_degree());
        (0..n * n)
            .map(|idx| {
                let (a, kl) = (idx % n, idx / n);
                [vec![0; a % n1], vec![1; a / n1], vec![2; kl % n1], vec![3; kl / n1]].concat()
            })
            .collect()
    }

    /// For `u = 1`: the factors `(L1/K, τ1, b1)` and `(L2/K, τ2, b2)` with the
    /// isomorphism from their tensor product sending `v1 ↦ z1`, `v2 ↦ z2`.
    pub fn decompose_trivial_u(&self) -> Result<(CyclicPresentation, CyclicPresentation, AlgebraMorphism)> {
        if !self.u.is_one() {
            return Err(Error::NonTrivialTwist);
        }
        let k = self.base();
        let b1 = self.b1.lower(k).ok_or_else(|| Error::InvalidPresentation("b1 outside the base".into()))?;
        let b2 = self.b2.lower(k).ok_or_else(|| Error::InvalidPresentation("b2 outside the base".into()))?;
        let a1 = CyclicPresentation::new(self.comp.left_sigma(), &b1, &self.z_labels.0)?;
        let a2 = CyclicPresentation::new(self.comp.right_sigma(), &b2, &self.z_labels.1)?;
        let target = self.sca().clone();
        let gens = self.generators();
        let eta2 = self.scalar(&self.comp.embed_right(&self.comp.right().generator()));
        let m1 = AlgebraMorphism::from_words(
            a1.sca(),
            Codomain::Algebra(target.clone()),
            &a1.basis_words(),
            &[gens[0].clone(), gens[2].clone()],
            false,
        )?;
        let m2 = AlgebraMorphism::from_words(
            a2.sca(),
            Codomain::Algebra(target.clone()),
            &a2.basis_words(),
            &[eta2, gens[3].clone()],
            false,
        )?;
        let iso = tensor_map(a1.sca(), &m1, a2.sca(), &m2, &target)?;
        Ok((a1, a2, iso))
    }
}

/// The map `A1 ⊗ B → C`, `x ⊗ y ↦ f1(x) f2(y)`, on the tensor basis.
fn tensor_map(
    s1: &StructureConstantAlgebra,
    f1: &AlgebraMorphism,
    s2: &StructureConstantAlgebra,
    f2: &AlgebraMorphism,
    target: &StructureConstantAlgebra,
) -> Result<AlgebraMorphism> {
    let (t, _, _) = s1.tensor(s2)?;
    let d2 = s2.dim();
    let images =
        par::map_range(Execution::default(), t.dim(), |pq| target.mul(&f1.images()[pq / d2], &f2.images()[pq % d2]));
    AlgebraMorphism::new(&t, Codomain::Algebra(target.clone()), images.into_iter().collect::<Result<_>>()?, false)
}

/// `C = (F/K, z, 1, (a1, a2^-1))` for cyclic `A1`, `A2` over the two sides of
/// `F`, with the isomorphism `A1 ⊗ A2° → C` given by `λ v1^i ⊗ 1 ↦ λ z1^i`
/// and `1 ⊗ λ v2^i ↦ z2^-i λ`.
pub fn pair_to_bicyclic(
    a1: &CyclicPresentation,
    a2: &CyclicPresentation,
    comp: &CompositeExtension,
) -> Result<(BicyclicPresentation, AlgebraMorphism)> {
    if a1.sigma() != comp.left_sigma() || a2.sigma() != comp.right_sigma() {
        return Err(Error::FieldMismatch);
    }
    if let Fieldness::NotField(w) = comp.fieldness() {
        return Err(Error::NotDisjoint(Some(Box::new(w.clone()))));
    }
    let f = comp.field();
    let b2 = a2.a().inverse()?;
    let c = BicyclicPresentation::new(comp, &f.one(), a1.a(), &b2, ("z1", "z2"))?;
    let target = c.sca().clone();
    let gens = c.generators();
    let m1 = AlgebraMorphism::from_words(
        a1.sca(),
        Codomain::Algebra(target.clone()),
        &a1.basis_words(),
        &[gens[0].clone(), gens[2].clone()],
        false,
    )?;
    let op = a2.sca().opposite();
    let (n, n2) = (c.field_degree(), comp.n2());
    let basis2 = a2.field().relative_basis(a2.field().depth() - 1);
    let a2k = a2.a().lift(f);
    let images2 = (0..n2 * n2)
        .map(|idx| {
            let (p, i) = (idx % n2, idx / n2);
            let lambda = comp.embed_right(&basis2[p]);
            let m = (n2 - i) % n2;
            let mut coeff = comp.second().conjugate(&lambda, m);
            if i > 0 {
                coeff = &coeff * &a2k;
            }
            let mut parts = vec![f.zero(); n];
            parts[comp.n1() * m] = coeff;
            c.element(&parts)
        })
        .collect::<Result<_>>()?;
    let m2 = AlgebraMorphism::new(&op, Codomain::Algebra(target.clone()), images2, false)?;
    let iso = tensor_map(a1.sca(), &m1, &op, &m2, &target)?;
    Ok((c, iso))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{verify_morphism, MorphismKind};
    use crate::fields::DisjointnessBudget;

    fn gaussian_sqrt2() -> (CompositeExtension, Automorphism, Automorphism) {
        let q = FieldTower::rationals();
        let li = FieldTower::extension(&q, &[q.int(1), q.zero(), q.one()], "i").unwrap();
        let lr = FieldTower::extension(&q, &[q.int(-2), q.zero(), q.one()], "r").unwrap();
        let ci = Automorphism::top_level(&li, -&li.generator()).unwrap();
        let cr = Automorphism::top_level(&lr, -&lr.generator()).unwrap();
        let comp = CompositeExtension::new(&ci, &cr, "s").unwrap().certified(DisjointnessBudget::default());
        (comp, ci, cr)
    }

    #[test]
    fn trivial_twist_validates() {
        let (comp, _, _) = gaussian_sqrt2();
        let f = comp.field();
        let c = BicyclicPresentation::checked(&comp, &f.one(), &f.int(2), &f.int(3), ("z1", "z2")).unwrap();
        let alg = c.sca();
        assert_eq!(alg.dim(), 16);
        assert!(alg.is_associative());
        assert!(alg.has_identity());
        assert_eq!(alg.center().unwrap().len(), 1);
        let bad = BicyclicPresentation::new(&comp, &f.level_generator(1), &f.int(2), &f.int(3), ("z1", "z2")).unwrap();
        assert!(!bad.validate().is_ok());
    }

    #[test]
    fn twisted_relations() {
        let (comp, _, _) = gaussian_sqrt2();
        let f = comp.field();
        let (i, r) = (f.level_generator(1), f.generator());
        // Planted: u = σ2(x1)/x1 · x2/σ1(x2), b_i = N_i(x_i).
        let x1 = &f.int(1) + &(&i + &r);
        let x2 = &f.int(2) + &(&i * &r);
        let (s1, s2) = (comp.sigma1(), comp.sigma2());
        let u = &(&s2.on(&x1) / &x1) * &(&x2 / &s1.on(&x2));
        let (b1, b2) = (comp.n1_norm(&x1), comp.n2_norm(&x2));
        let c = BicyclicPresentation::checked(&comp, &u, &b1, &b2, ("z1", "z2")).unwrap();
        let alg = c.sca();
        assert!(alg.is_associative());
        let g = c.generators();
        let z2z1 = alg.mul(&g[3], &g[2]).unwrap();
        let z1z2 = alg.mul(&g[2], &g[3]).unwrap();
        assert_eq!(z2z1, alg.mul(&c.scalar(&u), &z1z2).unwrap());
        assert_eq!(alg.pow(&g[2], 2).unwrap(), c.scalar(&b1));
        assert_eq!(alg.pow(&g[3], 2).unwrap(), c.scalar(&b2));
    }

    #[test]
    fn quaternion_pair() {
        let (comp, ci, cr) = gaussian_sqrt2();
        let q = comp.base().clone();
        let a1 = CyclicPresentation::new(&ci, &q.int(2), "v1").unwrap();
        let a2 = CyclicPresentation::new(&cr, &q.int(3), "v2").unwrap();
        let (c, iso) = pair_to_bicyclic(&a1, &a2, &comp).unwrap();
        assert!(c.validate().is_ok());
        assert!(verify_morphism(&iso, MorphismKind::Isomorphism));
    }

    #[test]
    fn trivial_twist_decomposes() {
        let (comp, _, _) = gaussian_sqrt2();
        let f = comp.field();
        let c = BicyclicPresentation::checked(&comp, &f.one(), &f.int(-1), &f.int(5), ("z1", "z2")).unwrap();
        let (a1, a2, iso) = c.decompose_trivial_u().unwrap();
        assert_eq!(a1.sca().dim() * a2.sca().dim(), c.sca().dim());
        assert!(verify_morphism(&iso, MorphismKind::Isomorphism));
        let twisted = BicyclicPresentation::new(&comp, &f.int(-1), &f.int(-1), &f.int(5), ("z1", "z2")).unwrap();
        assert!(matches!(twisted.decompose_trivial_u(), Err(Error::NonTrivialTwist)));
    }
}
