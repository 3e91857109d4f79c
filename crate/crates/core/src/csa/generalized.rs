use std::sync::OnceLock;

use super::cyclic::CyclicPresentation;
use super::sca::{power_label, StructureConstantAlgebra};
use crate::fields::{Automorphism, FieldElement, FieldTower};
use crate::{Error, Result};

/// The algebra `⊕ B w^j` (`0 <= j < m`) over `K`, where `B = (L/L0, σ_B, a_B)`
/// is cyclic over an intermediate field `K < L0 < L` of degree `m` over `K`,
/// `w β w^-1 = σ̃(β)` and `w^m = b ∈ B*`.
///
/// `σ̃` is given by an automorphism `σ_L` of `L` (restricting to a generator
/// of `Gal(L0/K)`) and the image `s = σ̃(v)`; elements of `B` are `L`-parts
/// indexed by powers of `v`.
#[derive(Clone, Debug)]
pub struct GeneralizedCyclicPresentation {
    centralizer: CyclicPresentation,
    sigma_l: Automorphism,
    s: Vec<FieldElement>,
    b: Vec<FieldElement>,
    m: usize,
    w_label: String,
    sca: OnceLock<StructureConstantAlgebra>,
}

impl GeneralizedCyclicPresentation {
    pub fn new(
        centralizer: &CyclicPresentation,
        sigma_l: &Automorphism,
        s: &[FieldElement],
        b: &[FieldElement],
        w_label: &str,
    ) -> Result<Self> {
        let l = centralizer.field();
        let l0 = centralizer.base();
        let k = l0.base().ok_or_else(|| Error::InvalidPresentation("L0 has no base field".into()))?;
        if sigma_l.domain() != l || sigma_l.codomain() != l {
            return Err(Error::FieldMismatch);
        }
        let restricted = sigma_l.restrict(l0).ok_or(Error::NotGenerator)?;
        let m = l0.degree();
        if !restricted.fixes(k) || restricted.order() != Some(m) {
            return Err(Error::NotGenerator);
        }
        let nb = centralizer.degree();
        if s.len() != nb || b.len() != nb {
            return Err(Error::DimensionMismatch("B-elements are given by one part per power of v".into()));
        }
        let lift = |v: &[FieldElement]| v.iter().map(|x| x.try_lift(l)).collect::<Result<Vec<_>>>();
        let p = GeneralizedCyclicPresentation {
            centralizer: centralizer.clone(),
            sigma_l: sigma_l.clone(),
            s: lift(s)?,
            b: lift(b)?,
            m,
            w_label: w_label.to_string(),
            sca: OnceLock::new(),
        };
        p.check_relations()?;
        Ok(p)
    }

    /// `σ̃` respects the relations of `B`, fixes `b`, and `σ̃^m = Inn(b)`.
    fn check_relations(&self) -> Result<()> {
        let bp = &self.centralizer;
        let l = bp.field();
        let fail = |what: &str| Err(Error::InvalidPresentation(format!("σ̃ {what}")));
        let mut s_pow = self.b_scalar(&l.one());
        for _ in 0..bp.degree() {
            s_pow = bp.mul_parts(&s_pow, &self.s);
        }
        if s_pow != self.b_scalar(&self.sigma_l.on(&bp.a().lift(l))) {
            return fail("does not send v^n to σ(a)");
        }
        let k_depth = bp.base().depth() - 1;
        for d in k_depth + 1..=l.depth() {
            let g = l.level_generator(d);
            let lhs = bp.mul_parts(&self.s, &self.b_scalar(&self.sigma_l.on(&g)));
            let rhs = bp.mul_parts(&self.b_scalar(&self.sigma_l.on(&bp.sigma().on(&g))), &self.s);
            if lhs != rhs {
                return fail("does not respect v λ = σ(λ) v");
            }
        }
        if self.tilde(&self.b) != self.b {
            return fail("moves b");
        }
        let gens = [self.b_scalar(&l.generator()), self.b_scalar(&l.level_generator(k_depth + 1)), self.v_part()];
        for g in gens {
            let lhs = bp.mul_parts(&self.tilde_pow(&g, self.m), &self.b);
            if lhs != bp.mul_parts(&self.b, &g) {
                return fail("to the power m is not conjugation by b");
            }
        }
        Ok(())
    }

    pub fn centralizer(&self) -> &CyclicPresentation {
        &self.centralizer
    }

    pub fn base(&self) -> &FieldTower {
        self.centralizer.base().base().expect("checked at construction")
    }

    pub fn sigma_l(&self) -> &Automorphism {
        &self.sigma_l
    }

    pub fn s(&self) -> &[FieldElement] {
        &self.s
    }

    pub fn b(&self) -> &[FieldElement] {
        &self.b
    }

    pub fn m(&self) -> usize {
        self.m
    }

    fn b_scalar(&self, x: &FieldElement) -> Vec<FieldElement> {
        let l = self.centralizer.field();
        let mut p = vec![l.zero(); self.centralizer.degree()];
        p[0] = x.lift(l);
        p
    }

    fn v_part(&self) -> Vec<FieldElement> {
        let l = self.centralizer.field();
        let n = self.centralizer.degree();
        let mut p = vec![l.zero(); n];
        p[1 % n] = l.one();
        p
    }

    /// `σ̃` on `B`-parts.
    pub fn tilde(&self, x: &[FieldElement]) -> Vec<FieldElement> {
        let bp = &self.centralizer;
        let mut out = self.b_scalar(&bp.field().zero());
        let mut s_pow = self.b_scalar(&bp.field().one());
        for xp in x {
            let term = bp.mul_parts(&self.b_scalar(&self.sigma_l.on(xp)), &s_pow);
            out = out.iter().zip(&term).map(|(a, b)| a + b).collect();
            s_pow = bp.mul_parts(&s_pow, &self.s);
        }
        out
    }

    pub fn tilde_pow(&self, x: &[FieldElement], j: usize) -> Vec<FieldElement> {
        (0..j).fold(x.to_vec(), |acc, _| self.tilde(&acc))
    }

    /// Product on parts indexed `p + nB j` (coefficient of `v^p w^j`).
    pub fn mul_parts(&self, x: &[FieldElement], y: &[FieldElement]) -> Vec<FieldElement> {
        let nb = self.centralizer.degree();
        let bp = &self.centralizer;
        let l = bp.field();
        let mut out = vec![l.zero(); nb * self.m];
        let xs: Vec<&[FieldElement]> = x.chunks(nb).collect();
        let ys: Vec<&[FieldElement]> = y.chunks(nb).collect();
        for (j, xj) in xs.iter().enumerate() {
            if xj.iter().all(FieldElement::is_zero) {
                continue;
            }
            for (t, yt) in ys.iter().enumerate() {
                if yt.iter().all(FieldElement::is_zero) {
                    continue;
                }
                let mut c = bp.mul_parts(xj, &self.tilde_pow(yt, j));
                let mut e = j + t;
                if e >= self.m {
                    c = bp.mul_parts(&c, &self.b);
                    e -= self.m;
                }
                for (o, v) in out[e * nb..(e + 1) * nb].iter_mut().zip(&c) {
                    *o = &*o + v;
                }
            }
        }
        out
    }

    fn to_coords(&self, parts: &[FieldElement]) -> Vec<FieldElement> {
        let k = self.base();
        parts.iter().flat_map(|p| p.coords_over(k)).collect()
    }

    /// Parts indexed `p + nB j` to algebra coordinates.
    pub fn element(&self, parts: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if parts.len() != self.centralizer.degree() * self.m {
            return Err(Error::DimensionMismatch("wrong number of parts".into()));
        }
        let l = self.centralizer.field();
        let parts: Vec<FieldElement> = parts.iter().map(|p| p.try_lift(l)).collect::<Result<_>>()?;
        Ok(self.to_coords(&parts))
    }

    /// `β w^j` for `β` given by `B`-parts.
    pub fn monomial(&self, beta: &[FieldElement], j: usize) -> Result<Vec<FieldElement>> {
        let nb = self.centralizer.degree();
        let mut parts = vec![self.centralizer.field().zero(); nb * self.m];
        parts[j * nb..(j + 1) * nb].clone_from_slice(beta);
        self.element(&parts)
    }

    /// Basis `e_q v^p w^j` with `e_q` running over a `K`-basis of `L`;
    /// index `q + [L:K] (p + nB j)`.
    pub fn sca(&self) -> &StructureConstantAlgebra {
        self.sca.get_or_init(|| {
            let k = self.base();
            let l = self.centralizer.field();
            let nb = self.centralizer.degree();
            let dl = l.absolute_degree() / k.absolute_degree();
            let basis: Vec<FieldElement> = (0..dl)
                .map(|q| {
                    let mut c = vec![k.zero(); dl];
                    c[q] = k.one();
                    FieldElement::from_coords_over(l, k, &c).expect("coordinate count")
                })
                .collect();
            let n = dl * nb * self.m;
            let unit = |idx: usize| {
                let mut p = vec![l.zero(); nb * self.m];
                p[idx / dl] = basis[idx % dl].clone();
                p
            };
            let labels = (0..n)
                .map(|idx| {
                    let (q, pj) = (idx % dl, idx / dl);
                    format!(
                        "e{q}*{}*{}",
                        power_label(self.centralizer.v_label(), pj % nb),
                        power_label(&self.w_label, pj / nb)
                    )
                })
                .collect();
            StructureConstantAlgebra::from_products(k, labels, |x, y| {
                self.to_coords(&self.mul_parts(&unit(x), &unit(y)))
            })
            .expect("valid table")
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn planted(b: i64) -> GeneralizedCyclicPresentation {
        let q = FieldTower::rationals();
        let l0 = FieldTower::extension(&q, &[q.int(-2), q.zero(), q.one()], "r").unwrap();
        let l = FieldTower::extension(&l0, &[l0.int(1), l0.zero(), l0.one()], "i").unwrap();
        let conj = Automorphism::top_level(&l, -&l.generator()).unwrap();
        let bc = CyclicPresentation::new(&conj, &l0.int(5), "v").unwrap();
        let flip = Automorphism::new(&l, &l, vec![-&l.level_generator(1), l.generator()]).unwrap();
        let v = vec![l.zero(), l.one()];
        GeneralizedCyclicPresentation::new(&bc, &flip, &v, &[l.int(b), l.zero()], "w").unwrap()
    }

    #[test]
    fn planted_algebra_is_central_simple_shaped() {
        let g = planted(3);
        let a = g.sca();
        assert_eq!(a.dim(), 16);
        assert!(a.has_identity());
        assert!(a.is_associative());
        assert_eq!(a.center().unwrap().len(), 1);
        let w = g.monomial(&g.b_scalar(&g.centralizer().field().one()), 1).unwrap();
        assert_eq!(a.pow(&w, 2).unwrap(), a.scalar(&a.field().int(3)));
    }

    #[test]
    fn rejects_inconsistent_twist() {
        let g = planted(3);
        let l = g.centralizer().field().clone();
        let bad = GeneralizedCyclicPresentation::new(
            g.centralizer(),
            g.sigma_l(),
            &[l.zero(), l.generator()],
            &[l.int(3), l.zero()],
            "w",
        );
        assert!(bad.is_err());
    }
}
