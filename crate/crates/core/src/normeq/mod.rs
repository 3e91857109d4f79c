//! Relative norm equations `N_{L/K}(x) = t` for cyclic `L/K`, solved by a
//! cascade of backends, and constructive Hilbert 90.
//!
//! The cascade: replay of a hinted solution; a complete discrete-log solver
//! over finite fields; a complete decision for quadratic fields over `Q`
//! (Hilbert symbols plus descent); a sign obstruction at real places for
//! quadratic extensions of a number field; `n`-th roots when the target is a
//! power in the base; and finally a bounded search, which never answers no.

mod hilbert90;
mod hints;
mod quadratic;
mod real;
mod roots;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub use hilbert90::{bicyclic_hilbert90, hilbert90, hilbert90_linear};
pub use hints::{Hint, Hints};

use crate::fields::{modp, CyclicExtension, FieldElement, SmallVectors};
use crate::par::{self, Execution};
use crate::{Error, Result};

/// `N(x) = target` over a cyclic extension; the target must be fixed by `σ`.
#[derive(Clone, Debug)]
pub struct NormProblem {
    ext: CyclicExtension,
    target: FieldElement,
}

impl NormProblem {
    pub fn new(ext: &CyclicExtension, target: &FieldElement) -> Result<Self> {
        let target = target.try_lift(ext.field())?;
        if target.is_zero() {
            return Err(Error::HypothesisViolated("norm target is zero".into()));
        }
        if !ext.is_fixed(&target) {
            return Err(Error::HypothesisViolated("norm target is not in the fixed field".into()));
        }
        Ok(NormProblem { ext: ext.clone(), target })
    }

    pub fn ext(&self) -> &CyclicExtension {
        &self.ext
    }

    pub fn target(&self) -> &FieldElement {
        &self.target
    }

    /// Hex SHA-256 of the canonical form of the problem.
    pub fn fingerprint(&self) -> String {
        hints::fingerprint(self)
    }
}

/// A place of the base field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    /// The real embedding with the given index (roots in increasing order).
    Real(usize),
    Finite(BigInt),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real(i) => write!(f, "real place {i}"),
            Place::Finite(p) => write!(f, "p = {p}"),
        }
    }
}

/// Why a norm equation has no solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Every element of a finite field was accounted for.
    Enumeration {
        checked: u128,
    },
    LocalObstruction {
        place: Place,
        detail: String,
    },
}

#[derive(Clone, Debug)]
pub enum NormOutcome {
    /// A verified solution.
    Solution(FieldElement),
    NoSolution(Certificate),
    /// No backend could decide; the reason names the last one tried.
    Unknown(String),
}

/// Limits for the bounded search backend.
#[derive(Clone, Debug)]
pub struct SearchBudget {
    /// Largest absolute value of a numerator coordinate.
    pub height: i64,
    /// Number of numerator vectors tried.
    pub max_candidates: usize,
    pub denominators: Vec<i64>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { height: 4, max_candidates: 20_000, denominators: vec![1, 2, 3, 4, 6] }
    }
}

impl SearchBudget {
    pub fn with_height(height: i64) -> Self {
        SearchBudget { height, ..Self::default() }
    }
}

pub fn verify_norm(ext: &CyclicExtension, x: &FieldElement, target: &FieldElement) -> bool {
    match (x.try_lift(ext.field()), target.try_lift(ext.field())) {
        (Ok(x), Ok(t)) => ext.norm(&x) == t,
        _ => false,
    }
}

/// Runs the backend cascade. Every returned solution has been verified.
pub fn solve_norm(problem: &NormProblem, hints: &Hints, budget: &SearchBudget) -> Result<NormOutcome> {
    let outcome = cascade(problem, hints, budget)?;
    if let NormOutcome::Solution(x) = &outcome {
        if !verify_norm(problem.ext(), x, problem.target()) {
            return Err(Error::VerificationFailed("norm solution".into()));
        }
    }
    Ok(outcome)
}

fn cascade(problem: &NormProblem, hints: &Hints, budget: &SearchBudget) -> Result<NormOutcome> {
    if let Some(x) = hints.replay(problem)? {
        return Ok(NormOutcome::Solution(x));
    }
    if problem.target().is_one() {
        return Ok(NormOutcome::Solution(problem.ext().field().one()));
    }
    if problem.ext().degree() == 1 {
        return Ok(NormOutcome::Solution(problem.target().clone()));
    }
    if problem.ext().field().is_finite() {
        return finite_field(problem);
    }
    if let Some(outcome) = quadratic_over_q(problem) {
        return Ok(outcome);
    }
    if let Some(cert) = real_obstruction(problem) {
        return Ok(NormOutcome::NoSolution(cert));
    }
    if let Some(x) = base_root(problem) {
        return Ok(NormOutcome::Solution(x));
    }
    Ok(search(problem, budget))
}

/// The norm is onto over finite fields: with `g` primitive, `N(g)` generates
/// the fixed group and `t = N(g)^k` gives `x = g^k`.
fn finite_field(problem: &NormProblem) -> Result<NormOutcome> {
    let field = problem.ext().field();
    let order = field.order().ok_or_else(|| Error::Unsupported("finite field too large".into()))?;
    let group = order - 1;
    let g64 = u64::try_from(group).map_err(|_| Error::Unsupported("group order beyond 64 bits".into()))?;
    let primes: Vec<u64> = modp::factor(g64).into_iter().map(|(p, _)| p).collect();
    let g = (1..order)
        .map(|i| FieldElement::from_index(field, i))
        .find(|x| primes.iter().all(|&p| !x.pow(group / u128::from(p)).is_one()))
        .ok_or_else(|| Error::Unsupported("no primitive element".into()))?;
    let h = problem.ext().norm(&g);
    let mut acc = field.one();
    let mut gk = field.one();
    let mut k: u128 = 0;
    loop {
        if acc == *problem.target() {
            return Ok(NormOutcome::Solution(gk));
        }
        acc = &acc * &h;
        gk = &gk * &g;
        k += 1;
        if acc.is_one() || k > group {
            return Ok(NormOutcome::NoSolution(Certificate::Enumeration { checked: k }));
        }
    }
}

/// `Q(θ)` with `θ² + bθ + c = 0`: decide by Hilbert symbols, then descend.
fn quadratic_over_q(problem: &NormProblem) -> Option<NormOutcome> {
    let field = problem.ext().field();
    if problem.ext().degree() != 2 || field.absolute_degree() != 2 || field.depth() != 1 {
        return None;
    }
    let coeffs = field.modulus();
    let (c, b) = (coeffs.coeff(0).as_rational()?, coeffs.coeff(1).as_rational()?);
    let disc = &b * &b - BigRational::from_integer(4.into()) * &c;
    // disc = d0 m² / den² with d0 squarefree.
    let (num, den) = (disc.numer() * disc.denom(), disc.denom().clone());
    let (d0, m) = quadratic::squarefree(&num)?;
    let t = problem.target().as_rational()?;
    let a = t.numer() * t.denom();
    match quadratic::local_obstruction(&a, &d0)? {
        Some(cert) => Some(NormOutcome::NoSolution(cert)),
        None => {
            // X² = d0 Y² + a Z².
            let [x, y, z] = quadratic::legendre_solve(&d0, &a, 0)?;
            if z.is_zero() {
                return None;
            }
            let (xx, yy) = (x / &z, y / &z);
            // √d0 = (2θ + b) den / m, and t = a / t.denom()².
            let theta = field.generator();
            let sqrt_d0 = &(&theta.scale_int(2) + &FieldElement::from_rational(field, &b))
                * &FieldElement::from_rational(field, &BigRational::new(den, m));
            let q = |r: &BigRational| FieldElement::from_rational(field, r);
            let scale = BigRational::new(BigInt::one(), t.denom().clone());
            let sol = &(&q(&xx) + &(&q(&yy) * &sqrt_d0)) * &q(&scale);
            Some(NormOutcome::Solution(sol))
        }
    }
}

/// For `L = K(√δ)` over a number field `K = Q(α)`: at a real place where
/// `δ < 0`, norms are positive, so a negative target there is no norm.
fn real_obstruction(problem: &NormProblem) -> Option<Certificate> {
    let ext = problem.ext();
    let field = ext.field();
    if ext.degree() != 2 || field.depth() != 2 || field.degree() != 2 {
        return None;
    }
    let base = field.base()?;
    if !ext.sigma().fixes(base) {
        return None;
    }
    let m = field.modulus();
    let (c, b) = (m.coeff(0), m.coeff(1));
    let delta = &(&b * &b) - &c.scale_int(4);
    let t = problem.target().lower(base)?;
    let (sd, st) = (real::real_signs(&delta)?, real::real_signs(&t)?);
    let i = sd.iter().zip(&st).position(|(d, s)| *d < 0 && *s < 0)?;
    Some(Certificate::LocalObstruction {
        place: Place::Real(i),
        detail: format!("the extension is complex at real place {i} and the target is negative there"),
    })
}

/// When the fixed field is the base of the tower and `t = c^n` there,
/// `N(c) = c^n = t`.
fn base_root(problem: &NormProblem) -> Option<FieldElement> {
    let ext = problem.ext();
    let field = ext.field();
    let base = field.base()?;
    if ext.degree() != field.degree() || !ext.sigma().fixes(base) {
        return None;
    }
    let t = problem.target().lower(base)?;
    let c = roots::nth_root(&t, ext.degree().to_u32()?)?;
    Some(c.lift(field))
}

/// Small numerators over a few denominators, using `N(v/d) = N(v)/d^n`.
fn search(problem: &NormProblem, budget: &SearchBudget) -> NormOutcome {
    let ext = problem.ext();
    let field = ext.field();
    let n = ext.degree() as u32;
    let basis = field.flat_basis();
    let scaled: Vec<(i64, FieldElement)> = budget
        .denominators
        .iter()
        .filter(|d| **d != 0)
        .map(|&d| (d, problem.target() * &field.int(d).pow(u128::from(n))))
        .collect();
    let mut tried = 0usize;
    let mut vectors = SmallVectors::up_to(basis.len(), budget.height);
    const BATCH: usize = 512;
    while tried < budget.max_candidates {
        let batch: Vec<Vec<i64>> = vectors.by_ref().take(BATCH.min(budget.max_candidates - tried)).collect();
        if batch.is_empty() {
            break;
        }
        tried += batch.len();
        let hit = par::find_first(Execution::default(), batch.len(), |k| {
            let v = basis.iter().zip(&batch[k]).fold(
                field.zero(),
                |acc, (e, &c)| {
                    if c == 0 {
                        acc
                    } else {
                        &acc + &e.scale_int(c)
                    }
                },
            );
            let nv = ext.norm(&v);
            scaled.iter().find(|(_, t)| nv == *t).map(|(d, _)| &v * &field.int(*d).inverse().expect("nonzero"))
        });
        if let Some((_, x)) = hit {
            return NormOutcome::Solution(x);
        }
    }
    NormOutcome::Unknown(format!("bounded search exhausted {tried} candidates up to height {}", budget.height))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{Automorphism, CompositeExtension, FieldTower};

    fn gaussian() -> CyclicExtension {
        let q = FieldTower::rationals();
        let l = FieldTower::extension(&q, &[q.int(1), q.zero(), q.one()], "i").unwrap();
        let conj = Automorphism::top_level(&l, -&l.generator()).unwrap();
        CyclicExtension::over_base(&conj).unwrap()
    }

    fn solve(ext: &CyclicExtension, t: &FieldElement) -> NormOutcome {
        let p = NormProblem::new(ext, t).unwrap();
        solve_norm(&p, &Hints::new(), &SearchBudget::default()).unwrap()
    }

    #[test]
    fn sums_of_two_squares() {
        let ext = gaussian();
        let f = ext.field();
        match solve(&ext, &f.int(2)) {
            NormOutcome::Solution(x) => assert_eq!(ext.norm(&x), f.int(2)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(solve(&ext, &f.int(3)), NormOutcome::NoSolution(Certificate::LocalObstruction { .. })));
        for t in [5, 25, 65, 1105] {
            let t = FieldElement::from_rational(f, &BigRational::new(t.into(), 9.into()));
            assert!(matches!(solve(&ext, &t), NormOutcome::Solution(_)));
        }
        assert!(matches!(solve(&ext, &f.int(-1)), NormOutcome::NoSolution(_)));
        assert!(verify_norm(&ext, &(&f.one() + &f.generator()), &f.int(2)));
        assert!(!verify_norm(&ext, &f.one(), &f.int(2)));
    }

    #[test]
    fn other_quadratic_fields() {
        let q = FieldTower::rationals();
        // θ² + θ - 1: discriminant 5.
        let l = FieldTower::extension(&q, &[q.int(-1), q.one(), q.one()], "g").unwrap();
        let s = Automorphism::top_level(&l, &(-&l.generator()) - &l.one()).unwrap();
        let ext = CyclicExtension::over_base(&s).unwrap();
        for t in [-1, 4, 11, 19, -29] {
            assert!(matches!(solve(&ext, &l.int(t)), NormOutcome::Solution(_)), "{t}");
        }
        assert!(matches!(solve(&ext, &l.int(2)), NormOutcome::NoSolution(_)));
    }

    #[test]
    fn finite_fields_are_complete() {
        for (p, k) in [(2u64, 2usize), (2, 3), (3, 2), (3, 3), (5, 2), (7, 2), (2, 4)] {
            let base = FieldTower::prime_field(p).unwrap();
            let l = FieldTower::finite_extension(&base, k, "t").unwrap();
            let ext = CyclicExtension::over_base(&Automorphism::frobenius(&l, &base).unwrap()).unwrap();
            for a in 1..p as i64 {
                match solve(&ext, &l.int(a)) {
                    NormOutcome::Solution(x) => assert_eq!(ext.norm(&x), l.int(a)),
                    other => panic!("{other:?}"),
                }
            }
        }
    }

    #[test]
    fn real_place_obstruction() {
        let q = FieldTower::rationals();
        let k = FieldTower::extension(&q, &[q.int(-2), q.zero(), q.one()], "r").unwrap();
        let l = FieldTower::extension(&k, &[k.one(), k.zero(), k.one()], "i").unwrap();
        let conj = Automorphism::top_level(&l, -&l.generator()).unwrap();
        let ext = CyclicExtension::over_base(&conj).unwrap();
        let r = l.level_generator(1);
        let bad = &(&l.one() - &r) / &(&l.one() + &r);
        assert!(matches!(
            solve(&ext, &bad),
            NormOutcome::NoSolution(Certificate::LocalObstruction { place: Place::Real(_), .. })
        ));
        let good = &(&l.int(3) - &r.scale_int(2)) * &l.int(5);
        match solve(&ext, &good) {
            NormOutcome::Solution(x) => assert_eq!(ext.norm(&x), good),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn hints_replay_and_reject() {
        let ext = gaussian();
        let f = ext.field();
        let p = NormProblem::new(&ext, &f.int(13)).unwrap();
        let x = &f.int(2) + &f.generator().scale_int(3);
        let hints: Hints = [Hint::for_problem(&p, x.clone())].into_iter().collect();
        match solve_norm(&p, &hints, &SearchBudget::default()).unwrap() {
            NormOutcome::Solution(y) => assert_eq!(y, x),
            other => panic!("{other:?}"),
        }
        let bad: Hints = [Hint::for_problem(&p, f.int(3))].into_iter().collect();
        assert!(matches!(solve_norm(&p, &bad, &SearchBudget::default()), Err(Error::InvalidHint)));
        // Relabelled but identical towers share fingerprints.
        let q = FieldTower::rationals();
        let l = FieldTower::extension(&q, &[q.int(1), q.zero(), q.one()], "j").unwrap();
        let conj = Automorphism::top_level(&l, -&l.generator()).unwrap();
        let other = NormProblem::new(&CyclicExtension::over_base(&conj).unwrap(), &l.int(13)).unwrap();
        assert_eq!(other.fingerprint(), p.fingerprint());
    }

    #[test]
    fn hilbert90_round_trips() {
        let ext = gaussian();
        let f = ext.field();
        assert_eq!(hilbert90(&ext, &f.one()).unwrap().field(), f);
        let y0 = &f.int(3) + &f.generator().scale_int(2);
        let u = &ext.sigma().on(&y0) / &y0;
        for y in [hilbert90(&ext, &u).unwrap(), hilbert90_linear(&ext, &u).unwrap()] {
            assert_eq!(ext.sigma().on(&y), &u * &y);
        }
        assert!(matches!(hilbert90(&ext, &f.int(2)), Err(Error::NormNotOne)));
    }

    #[test]
    fn bicyclic_hilbert90_round_trips() {
        let q = FieldTower::rationals();
        let li = FieldTower::extension(&q, &[q.int(1), q.zero(), q.one()], "i").unwrap();
        let lr = FieldTower::extension(&q, &[q.int(-2), q.zero(), q.one()], "r").unwrap();
        let ci = Automorphism::top_level(&li, -&li.generator()).unwrap();
        let cr = Automorphism::top_level(&lr, -&lr.generator()).unwrap();
        let comp = CompositeExtension::new(&ci, &cr, "s").unwrap();
        let f = comp.field();
        let y0 = &(&f.int(1) + &f.level_generator(1)) + &(&f.generator() * &f.int(3));
        let x1 = &comp.sigma1().on(&y0) / &y0;
        let x2 = &comp.sigma2().on(&y0) / &y0;
        let y = bicyclic_hilbert90(&comp, &x1, &x2).unwrap();
        assert_eq!(comp.sigma1().on(&y), &x1 * &y);
        assert_eq!(comp.sigma2().on(&y), &x2 * &y);
        let fixed = bicyclic_hilbert90(&comp, &f.one(), &f.one()).unwrap();
        assert!(comp.project_base(&fixed).is_some_and(|c| !c.is_zero()));
        assert!(matches!(bicyclic_hilbert90(&comp, &f.int(2), &f.one()), Err(Error::HypothesisViolated(_))));
    }
}
