use super::{ensure, iso_cyclic, Decision, MorphismKind, Options};
use crate::csa::{AlgebraMorphism, Codomain, CyclicPresentation};
use crate::fields::{Automorphism, FieldElement, FieldTower};
use crate::{Error, Result};

/// `σA = (σL/K, τ', σ(a))`, where `σL` is defined by `p^σ` and `τ'` acts on
/// its generator by `q^σ` for `τ(θ) = q(θ)`.
pub fn twist_presentation(a: &CyclicPresentation, sigma: &Automorphism, label: &str) -> Result<CyclicPresentation> {
    let k = a.base();
    if sigma.domain() != k || sigma.codomain() != k {
        return Err(Error::FieldMismatch);
    }
    if sigma.order().is_none() {
        return Err(Error::NotGenerator);
    }
    let l = a.field();
    let twisted = FieldTower::extension_by(k, &sigma.apply_poly(&l.modulus()), label)?;
    let q: Vec<FieldElement> = a.sigma().on(&l.generator()).blocks().iter().map(|c| sigma.on(c)).collect();
    let mut images: Vec<FieldElement> = (1..=k.depth()).map(|d| twisted.level_generator(d)).collect();
    images.push(FieldElement::from_blocks(&twisted, &q)?);
    let tau = Automorphism::new(&twisted, &twisted, images)?;
    CyclicPresentation::new(&tau, &sigma.on(a.a()), a.v_label())
}

/// `p^σ(t) = 0`, `w t = q^σ(t) w` and `w^n = σ(a)` in `A`.
pub fn verify_extension(a: &CyclicPresentation, sigma: &Automorphism, t: &[FieldElement], w: &[FieldElement]) -> bool {
    let alg = a.sca();
    let l = a.field();
    if t.len() != alg.dim() || w.len() != alg.dim() || sigma.domain() != a.base() {
        return false;
    }
    let eval = |coeffs: &[FieldElement]| -> Option<Vec<FieldElement>> {
        let mut acc = alg.zero();
        for c in coeffs.iter().rev() {
            acc = alg.add(&alg.mul(&acc, t).ok()?, &alg.scalar(&sigma.on(c)));
        }
        Some(acc)
    };
    let p: Vec<FieldElement> = l.modulus().coeffs().to_vec();
    let q = a.sigma().on(&l.generator()).blocks();
    let (Some(pt), Some(qt)) = (eval(&p), eval(&q)) else {
        return false;
    };
    let (Ok(wt), Ok(qtw), Ok(wn)) = (alg.mul(w, t), alg.mul(&qt, w), alg.pow(w, a.degree())) else {
        return false;
    };
    pt == alg.zero() && wt == qtw && wn == alg.scalar(&sigma.on(a.a()))
}

/// Images of `θ` and `v` under a `σ`-semilinear automorphism of `A`, and
/// the automorphism itself.
#[derive(Clone, Debug)]
pub struct ExtensionWitness {
    pub theta: Vec<FieldElement>,
    pub v: Vec<FieldElement>,
    pub morphism: AlgebraMorphism,
}

/// Extends `σ ∈ Aut(K)` to `A` iff `A ≅ σA`; from `χ: A → σA` the
/// extension sends `θ ↦ χ^-1(θ')` and `v ↦ χ^-1(v')`.
pub fn extend_automorphism(
    a: &CyclicPresentation,
    sigma: &Automorphism,
    opts: &Options,
) -> Result<Decision<ExtensionWitness>> {
    let label = format!("{}'", a.field().label());
    let twisted = twist_presentation(a, sigma, &label)?;
    let chi = match iso_cyclic(a, &twisted, opts)? {
        Decision::Yes(chi) => chi,
        Decision::No(c) => return Ok(Decision::No(c)),
        Decision::Undecided(r) => return Ok(Decision::Undecided(r)),
    };
    let back = chi.inverse()?;
    let theta = back.apply(&twisted.theta())?;
    let v = back.apply(&twisted.v())?;
    if !verify_extension(a, sigma, &theta, &v) {
        return Err(Error::VerificationFailed("extension relations".into()));
    }
    let morphism = AlgebraMorphism::from_words(
        a.sca(),
        Codomain::Algebra(a.sca().clone()),
        &a.basis_words(),
        &[theta.clone(), v.clone()],
        false,
    )?
    .with_twist(sigma.clone())?;
    ensure(&morphism, MorphismKind::Isomorphism, "semilinear extension")?;
    Ok(Decision::Yes(ExtensionWitness { theta, v, morphism }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normeq::{Certificate, Place};

    fn cubic_base() -> (FieldTower, Automorphism) {
        let q = FieldTower::rationals();
        let k = FieldTower::extension(&q, &[q.int(-1), q.int(-2), q.one(), q.one()], "a").unwrap();
        let a = k.generator();
        let s = &(&k.one() - &a) - &(&a * &a);
        let sigma = Automorphism::top_level(&k, s).unwrap();
        (k, sigma)
    }

    fn cubic_algebra() -> (CyclicPresentation, Automorphism) {
        let (k, sigma) = cubic_base();
        let a = k.generator();
        let l = FieldTower::extension(&k, &[k.one(), &(-&a) - &k.one(), &a - &k.int(2), k.one()], "t").unwrap();
        let (al, t) = (a.lift(&l), l.generator());
        let tau_t = &(&(-&(&t * &t)) + &(&(&l.one() - &al) * &t)) + &l.int(2);
        let tau = Automorphism::top_level(&l, tau_t).unwrap();
        let c = &(&(&a * &a) - &a) - &k.int(2);
        (CyclicPresentation::new(&tau, &c.scale_int(2), "v").unwrap(), sigma)
    }

    #[test]
    fn identity_twist_is_trivial() {
        let (a, _) = cubic_algebra();
        let id = Automorphism::identity(a.base());
        let t = twist_presentation(&a, &id, "t").unwrap();
        assert_eq!(t.sca(), a.sca());
        assert_eq!(t.a(), a.a());
        assert!(verify_extension(&a, &id, &a.theta(), &a.v()));
    }

    #[test]
    fn cubic_twist_data() {
        let (a, sigma) = cubic_algebra();
        let t = twist_presentation(&a, &sigma, "e").unwrap();
        let k = a.base();
        let al = k.generator();
        let a2 = &al * &al;
        let p2 = t.field().modulus();
        assert_eq!(p2.coeffs()[0], k.one());
        assert_eq!(p2.coeffs()[1], &(&a2 + &al) - &k.int(2));
        assert_eq!(p2.coeffs()[2], -&(&(&a2 + &al) + &k.one()));
        let e = t.field().generator();
        let (ael, a2l) = (al.lift(t.field()), a2.lift(t.field()));
        let expected = &(&(-&(&e * &e)) + &(&(&a2l + &ael) * &e)) + &t.field().int(2);
        assert_eq!(t.sigma().top_image(), &expected);
        assert_eq!(t.a(), &(&(&a2 + &al.scale_int(2)) - &k.one()).scale_int(2));
        // θ ↦ θ, v ↦ v does not satisfy the twisted relations.
        assert!(!verify_extension(&a, &sigma, &a.theta(), &a.v()));
    }

    #[test]
    fn quaternion_conjugation_does_not_extend() {
        // K = Q(√2), A = (K(i)/K, conj, 1 + √2); σ(√2) = -√2 sends a to a
        // negative element at the other real place.
        let q = FieldTower::rationals();
        let k = FieldTower::extension(&q, &[q.int(-2), q.zero(), q.one()], "s").unwrap();
        let l = FieldTower::extension(&k, &[k.one(), k.zero(), k.one()], "i").unwrap();
        let conj = Automorphism::top_level(&l, -&l.generator()).unwrap();
        let a = CyclicPresentation::new(&conj, &(&k.one() + &k.generator()), "v").unwrap();
        let sigma = Automorphism::top_level(&k, -&k.generator()).unwrap();
        let d = extend_automorphism(&a, &sigma, &Options::default()).unwrap();
        assert!(matches!(d, Decision::No(Certificate::LocalObstruction { place: Place::Real(_), .. })), "{d:?}");
        let id = Automorphism::identity(&k);
        assert!(extend_automorphism(&a, &id, &Options::default()).unwrap().is_yes());
    }

    #[test]
    fn conjugation_extends_to_hamilton_over_sqrt2() {
        let q = FieldTower::rationals();
        let k = FieldTower::extension(&q, &[q.int(-2), q.zero(), q.one()], "s").unwrap();
        let l = FieldTower::extension(&k, &[k.one(), k.zero(), k.one()], "i").unwrap();
        let conj = Automorphism::top_level(&l, -&l.generator()).unwrap();
        let a = CyclicPresentation::new(&conj, &k.int(-1), "v").unwrap();
        let sigma = Automorphism::top_level(&k, -&k.generator()).unwrap();
        let Decision::Yes(w) = extend_automorphism(&a, &sigma, &Options::default()).unwrap() else { panic!() };
        assert!(verify_extension(&a, &sigma, &w.theta, &w.v));
        assert_eq!(w.morphism.twist(), Some(&sigma));
    }
}
