use std::sync::OnceLock;

use num_integer::Integer;

use super::morphism::{AlgebraMorphism, Codomain};
use super::sca::{power_label, StructureConstantAlgebra};
use crate::fields::{Automorphism, CyclicExtension, FieldElement, FieldTower};
use crate::{Error, Result};

/// The cyclic algebra `⊕ L v^j` with `v λ = σ(λ) v` and `v^n = a`, where
/// `L` is a simple extension of `K` of degree `n` and `a ∈ K*`.
#[derive(Clone, Debug)]
pub struct CyclicPresentation {
    ext: CyclicExtension,
    a: FieldElement,
    v_label: String,
    sca: OnceLock<StructureConstantAlgebra>,
}

impl CyclicPresentation {
    pub fn new(sigma: &Automorphism, a: &FieldElement, v_label: &str) -> Result<Self> {
        let ext = CyclicExtension::over_base(sigma)
            .map_err(|e| Error::InvalidPresentation(format!("automorphism is not a generator: {e}")))?;
        let base = ext.field().base().expect("extension has a base").clone();
        let a = a.lower(&base).ok_or_else(|| Error::InvalidPresentation("a does not lie in the base".into()))?;
        if a.is_zero() {
            return Err(Error::InvalidPresentation("a is zero".into()));
        }
        Ok(CyclicPresentation { ext, a, v_label: v_label.to_string(), sca: OnceLock::new() })
    }

    pub fn extension(&self) -> &CyclicExtension {
        &self.ext
    }

    pub fn field(&self) -> &FieldTower {
        self.ext.field()
    }

    pub fn base(&self) -> &FieldTower {
        self.ext.field().base().expect("extension has a base")
    }

    pub fn sigma(&self) -> &Automorphism {
        self.ext.sigma()
    }

    pub fn a(&self) -> &FieldElement {
        &self.a
    }

    pub fn v_label(&self) -> &str {
        &self.v_label
    }

    pub fn degree(&self) -> usize {
        self.ext.degree()
    }

    /// The structure constants on the basis `θ^i v^j` (index `j n + i`).
    pub fn sca(&self) -> &StructureConstantAlgebra {
        self.sca.get_or_init(|| {
            let n = self.degree();
            let theta = self.field().label().to_string();
            let labels = (0..n * n)
                .map(|k| {
                    let (i, j) = (k % n, k / n);
                    match (i, j) {
                        (_, 0) => power_label(&theta, i),
                        (0, _) => power_label(&self.v_label, j),
                        _ => format!("{}*{}", power_label(&theta, i), power_label(&self.v_label, j)),
                    }
                })
                .collect();
            let basis = self.field().relative_basis(self.field().depth() - 1);
            let alg = StructureConstantAlgebra::from_products(self.base(), labels, |x, y| {
                let mut p = self.zero_parts();
                p[x / n] = basis[x % n].clone();
                let mut q = self.zero_parts();
                q[y / n] = basis[y % n].clone();
                self.to_coords(&self.mul_parts(&p, &q))
            })
            .expect("valid table");
            alg.with_generators(if n > 1 { vec![1, n] } else { vec![] })
        })
    }

    fn zero_parts(&self) -> Vec<FieldElement> {
        vec![self.field().zero(); self.degree()]
    }

    /// `Σ parts[j] v^j` in algebra coordinates.
    pub fn element(&self, parts: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if parts.len() != self.degree() {
            return Err(Error::DimensionMismatch(format!("{} parts for degree {}", parts.len(), self.degree())));
        }
        let parts: Vec<FieldElement> = parts.iter().map(|p| p.try_lift(self.field())).collect::<Result<_>>()?;
        Ok(self.to_coords(&parts))
    }

    fn to_coords(&self, parts: &[FieldElement]) -> Vec<FieldElement> {
        parts.iter().flat_map(|p| p.blocks()).collect()
    }

    /// Inverse of [`CyclicPresentation::element`].
    pub fn parts(&self, x: &[FieldElement]) -> Result<Vec<FieldElement>> {
        let n = self.degree();
        if x.len() != n * n {
            return Err(Error::DimensionMismatch("not an element of this algebra".into()));
        }
        x.chunks(n).map(|c| FieldElement::from_blocks(self.field(), c)).collect()
    }

    /// `(Σ x_j v^j)(Σ y_l v^l)` on `L`-parts.
    pub fn mul_parts(&self, x: &[FieldElement], y: &[FieldElement]) -> Vec<FieldElement> {
        let n = self.degree();
        let a = self.a.lift(self.field());
        let mut out = self.zero_parts();
        for (j, xj) in x.iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            for (l, yl) in y.iter().enumerate() {
                if yl.is_zero() {
                    continue;
                }
                let mut c = xj * &self.ext.conjugate(yl, j);
                if j + l >= n {
                    c = &c * &a;
                }
                let k = (j + l) % n;
                out[k] = &out[k] + &c;
            }
        }
        out
    }

    /// Image of `λ ∈ L`.
    pub fn scalar(&self, lambda: &FieldElement) -> Vec<FieldElement> {
        let mut p = self.zero_parts();
        p[0] = lambda.lift(self.field());
        self.to_coords(&p)
    }

    pub fn theta(&self) -> Vec<FieldElement> {
        self.scalar(&self.field().generator())
    }

    pub fn v(&self) -> Vec<FieldElement> {
        let mut p = self.zero_parts();
        p[1 % self.degree()] = self.field().one();
        self.to_coords(&p)
    }

    /// Basis element `θ^i v^j` as the word `[0; i] ++ [1; j]` in the
    /// generators `(θ, v)`.
    pub fn basis_words(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        (0..n * n).map(|k| [vec![0; k % n], vec![1; k / n]].concat()).collect()
    }

    /// `(L/K, σ^k, a^k)` with `v' = v^k`.
    pub fn power_presentation(&self, k: i64) -> Result<CyclicPresentation> {
        let n = self.degree();
        if k.gcd(&(n as i64)) != 1 {
            return Err(Error::NotCoprime(k, n));
        }
        // Negative k only changes v^k by a scalar of K; the reduced exponent
        // gives the same algebra.
        let e = k.rem_euclid(n as i64) as usize;
        let sigma = self.sigma().pow(e);
        let a = self.a.pow(e as u128);
        let label = if e == 1 { self.v_label.clone() } else { format!("{}^{e}", self.v_label) };
        CyclicPresentation::new(&sigma, &a, &label)
    }

    /// The identification of [`Self::power_presentation`]`(k)` with `self`:
    /// `θ ↦ θ`, `v' ↦ v^k`.
    pub fn power_isomorphism(&self, k: i64) -> Result<(CyclicPresentation, AlgebraMorphism)> {
        let p = self.power_presentation(k)?;
        let e = k.rem_euclid(self.degree() as i64) as usize;
        let target = self.sca().clone();
        let vk = target.pow(&self.v(), e)?;
        let m = AlgebraMorphism::from_words(
            p.sca(),
            Codomain::Algebra(target),
            &p.basis_words(),
            &[self.theta(), vk],
            false,
        )?;
        Ok((p, m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::par::Execution;

    fn gaussian() -> (FieldTower, Automorphism) {
        let q = FieldTower::rationals();
        let l = FieldTower::extension(&q, &[q.int(1), q.zero(), q.one()], "i").unwrap();
        let conj = Automorphism::top_level(&l, -&l.generator()).unwrap();
        (l, conj)
    }

    fn quaternions() -> CyclicPresentation {
        let (l, conj) = gaussian();
        CyclicPresentation::new(&conj, &l.int(-1), "j").unwrap()
    }

    #[test]
    fn hamilton_relations() {
        let h = quaternions();
        let a = h.sca();
        assert_eq!(a.dim(), 4);
        assert!(a.has_identity());
        assert!(a.is_associative());
        let (i, v) = (h.theta(), h.v());
        let minus_one = a.scalar(&a.field().int(-1));
        assert_eq!(a.mul(&i, &i).unwrap(), minus_one);
        assert_eq!(a.mul(&v, &v).unwrap(), minus_one);
        let vi = a.mul(&v, &i).unwrap();
        let iv = a.mul(&i, &v).unwrap();
        assert_eq!(vi, a.scale(&a.field().int(-1), &iv));
        // (vi)^2 = -v^2 i^2 = -1.
        assert_eq!(a.mul(&vi, &vi).unwrap(), minus_one);
    }

    #[test]
    fn center_and_centralizers() {
        let h = quaternions();
        let a = h.sca();
        let all: Vec<_> = (0..4).map(|k| a.basis(k)).collect();
        assert_eq!(a.centralizer(&all).unwrap().len(), 1);
        assert_eq!(a.center().unwrap().len(), 1);
        assert_eq!(a.centralizer(&[a.one()]).unwrap().len(), 4);
        let ci = a.centralizer(&[h.theta()]).unwrap();
        assert_eq!(ci.len(), 2);
        for c in &ci {
            assert!(c[2].is_zero() && c[3].is_zero());
        }
    }

    #[test]
    fn opposite_and_regular_representations() {
        let h = quaternions();
        let a = h.sca();
        let op = a.opposite();
        assert_eq!(op.opposite(), *a);
        let (i, v) = (h.theta(), h.v());
        assert_eq!(op.mul(&i, &v).unwrap(), a.mul(&v, &i).unwrap());
        let lam = a.regular_representation(crate::csa::Side::Left).unwrap();
        let rho = a.regular_representation(crate::csa::Side::Right).unwrap();
        for m in [&lam, &rho] {
            assert!(m.is_unital());
            assert!(m.is_multiplicative_exhaustive(Execution::Sequential));
            assert!(m.is_injective().unwrap());
        }
        let x = lam.apply_matrix(&i).unwrap();
        let y = rho.apply_matrix(&v).unwrap();
        assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
    }

    #[test]
    fn tensor_commutes_and_centralizes() {
        let h = quaternions();
        let a = h.sca();
        let op = a.opposite();
        let (t, e1, e2) = a.tensor(&op).unwrap();
        assert_eq!(t.dim(), 16);
        assert!(t.is_associative());
        for x in 0..4 {
            for y in 0..4 {
                let p = e1.apply(&a.basis(x)).unwrap();
                let q = e2.apply(&op.basis(y)).unwrap();
                assert_eq!(t.mul(&p, &q).unwrap(), t.mul(&q, &p).unwrap());
            }
        }
        let s: Vec<_> = (0..4).map(|y| e2.apply(&op.basis(y)).unwrap()).collect();
        assert_eq!(t.centralizer(&s).unwrap().len(), 4);
    }

    #[test]
    fn field_is_a_commutative_algebra() {
        let (l, _) = gaussian();
        let f = StructureConstantAlgebra::field_algebra(&l).unwrap();
        assert_eq!(f.opposite(), f);
        assert_eq!(f.generators(), &[1]);
    }

    #[test]
    fn closure_finds_generators() {
        let h = quaternions();
        let q = h.sca();
        let bare = StructureConstantAlgebra::new(
            q.field(),
            q.labels().to_vec(),
            (0..16).map(|k| q.product(k / 4, k % 4).to_vec()).collect(),
        )
        .unwrap();
        let gens = bare.generators().to_vec();
        assert_eq!(gens, vec![1, 2]);
    }

    #[test]
    fn power_presentations() {
        let h = quaternions();
        let (p, m) = h.power_isomorphism(1).unwrap();
        assert_eq!(p.a(), h.a());
        assert!(m.is_bijective().unwrap());
        assert!(matches!(h.power_presentation(2), Err(Error::NotCoprime(2, 2))));

        let f7 = FieldTower::finite_field(7, 1, "t").unwrap();
        let l = FieldTower::finite_extension(&f7, 3, "s").unwrap();
        let frob = Automorphism::frobenius(&l, &f7).unwrap();
        let d = CyclicPresentation::new(&frob, &l.int(3), "v").unwrap();
        let (p, m) = d.power_isomorphism(2).unwrap();
        assert_eq!(p.a(), &l.base().unwrap().int(2));
        assert!(m.is_unital());
        assert!(m.is_multiplicative_exhaustive(Execution::Sequential));
        assert!(m.is_bijective().unwrap());
    }

    #[test]
    fn rejects_bad_presentations() {
        let (l, conj) = gaussian();
        assert!(CyclicPresentation::new(&conj, &l.generator(), "v").is_err());
        assert!(CyclicPresentation::new(&conj, &l.zero(), "v").is_err());
        let id = Automorphism::identity(&l);
        assert!(CyclicPresentation::new(&id, &l.one(), "v").is_err());
    }
}
