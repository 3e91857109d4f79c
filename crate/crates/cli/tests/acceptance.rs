//! End-to-end acceptance checks. Runs without the libtest harness so that
//! every criterion prints exactly one PASS or FAIL line.

use std::path::{Path, PathBuf};
use std::time::Instant;

use csa_cli::{execute, Bundle, Command, RunOptions, Status};
use csa_core::algorithms::{
    iso_from_tensor_splitting, iso_same_field, shift_solution, solve_split_system, split_cyclic, verify_extension,
    verify_morphism, verify_split_solution, Decision, IntertwinerBudget, MorphismKind, Options, SplitSolution,
};
use csa_core::csa::StructureConstantAlgebra;
use csa_core::csa::{pair_to_bicyclic, AlgebraMorphism, BicyclicPresentation, CyclicPresentation, Side};
use csa_core::fields::{
    Automorphism, CompositeExtension, CyclicExtension, DisjointnessBudget, FieldElement, FieldTower,
};
use csa_core::normeq::{bicyclic_hilbert90, hilbert90, solve_norm, Hints, NormOutcome, NormProblem, SearchBudget};
use csa_core::par::Execution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;
type Criterion = fn() -> Check;

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn load(name: &str) -> Result<Bundle, String> {
    Bundle::load(&fixture(name)).map_err(|e| e.to_string())
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// `c2 α² + c1 α + c0` over `den`.
fn kel(k: &FieldTower, [c2, c1, c0]: [i64; 3], den: i64) -> FieldElement {
    let al = k.generator();
    &(&(&(&al * &al) * &k.int(c2)) + &(&(&al * &k.int(c1)) + &k.int(c0))) / &k.int(den)
}

fn random_element(f: &FieldTower, rng: &mut ChaCha8Rng, height: i64) -> FieldElement {
    loop {
        let x = match f.order() {
            Some(q) => FieldElement::from_index(f, rng.gen_range(1..q)),
            None => {
                let coords: Vec<i64> = (0..f.absolute_degree()).map(|_| rng.gen_range(-height..=height)).collect();
                FieldElement::from_int_coords(f, &coords)
            }
        };
        if !x.is_zero() {
            return x;
        }
    }
}

fn cubic_composite(b: &Bundle) -> Result<CompositeExtension, String> {
    let (tau, tau_m) = (b.automorphism("tau").map_err(err)?, b.automorphism("tau_m").map_err(err)?);
    Ok(CompositeExtension::new(tau, tau_m, "F").map_err(err)?.assume_field("the composite is a field of degree 27"))
}

fn replay_values() -> Check {
    let b = load("cubic_extension.json")?;
    let comp = cubic_composite(&b)?;
    let f = comp.field();
    let k = comp.base();
    let value = |name: &str| b.field_value(name).map_err(err);
    ensure(f == b.field("F").map_err(err)?, || "composite differs from the fixture field".into())?;
    ensure(comp.sigma1() == b.automorphism("sigma1").map_err(err)?, || "sigma1 differs".into())?;
    ensure(comp.sigma2() == b.automorphism("sigma2").map_err(err)?, || "sigma2 differs".into())?;

    let sigma = b.automorphism("sigma").map_err(err)?;
    ensure(sigma.on(&k.generator()) == kel(k, [-1, -1, 1], 1), || "sigma on alpha".into())?;
    let a = kel(k, [2, -2, -4], 1);
    ensure(value("a")? == a, || "a".into())?;

    let (s1, s2) = (comp.sigma1(), comp.sigma2());
    let x1 = value("x1")?;
    ensure(comp.n1_norm(&x1) == a.lift(f), || "N1(x1) != a".into())?;

    let x2p = value("x2_prime")?;
    ensure(&s1.on(&x2p) / &x2p == &x1 / &s2.on(&x1), || "Hilbert 90 quotient".into())?;

    let b2 = sigma.on(&a).inverse().map_err(err)?;
    let target = kel(k, [-1601, 693, 609], 56);
    ensure(&b2.lift(f) * &comp.n2_norm(&x2p) == target.lift(f), || "b2 N2(x2')".into())?;
    ensure(value("b2_n2_x2_prime")? == target, || "stored b2 N2(x2')".into())?;

    let x2s = value("x2_second")?;
    ensure(x2s.pow(3) == target, || "(x2'')^3".into())?;
    let x2 = &x2s.lift(f) / &x2p;
    ensure(x2 == value("x2")?, || "x2 = x2''/x2'".into())?;

    let (d, dt) = (b.cyclic("D").map_err(err)?, b.cyclic("D_twisted").map_err(err)?);
    let (c, _) = pair_to_bicyclic(d, dt, &comp).map_err(err)?;
    ensure(verify_split_solution(&c, &SplitSolution { x1, x2 }), || "verify_split_solution".into())?;

    let (chi_eta, chi_w) = (b.algebra_value("chi_eta").map_err(err)?, b.algebra_value("chi_w").map_err(err)?);
    let l = d.field();
    let t = l.generator();
    let printed = &(&kel(k, [1, 1, 0], 1).lift(l) + &(&kel(k, [0, -1, 1], 1).lift(l) * &t)) - &(&t * &t);
    let expected_w = d.element(&[l.zero(), printed, l.zero()]).map_err(err)?;
    ensure(chi_w == expected_w, || "printed image of w".into())?;
    ensure(verify_extension(d, sigma, &chi_eta, &chi_w), || "printed extension relations".into())
}

fn end_to_end() -> Check {
    let b = load("cubic_extension.json")?;
    ensure(b.hints.len() == 1, || "the fixture should carry exactly one hint".into())?;
    let cmd = Command::Extend { algebra: "D".into(), auto: "sigma".into() };
    let report = execute(&cmd, &b, &RunOptions::default());
    ensure(report.status == Status::Yes, || format!("status {:?}: {:?}", report.status, report.reason))?;
    let w = report.witness.as_ref().ok_or("no witness")?;
    ensure(csa_cli::run::check_witness(&b, w).map_err(err)?, || "witness does not verify".into())
}

/// `a` is a sum of two rational squares iff `a > 0` and every prime
/// `p ≡ 3 mod 4` divides it to an even power.
fn two_squares(a: i64) -> bool {
    if a <= 0 {
        return false;
    }
    let (mut n, mut p) = (a, 2);
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if p % 4 == 3 && e % 2 == 1 {
            return false;
        }
        p += 1;
    }
    n % 4 != 3
}

fn quaternion_suite() -> Check {
    let q = FieldTower::rationals();
    let l = FieldTower::extension(&q, &[q.one(), q.zero(), q.one()], "i").map_err(err)?;
    let conj = Automorphism::top_level(&l, -&l.generator()).map_err(err)?;
    for a in [1, 2, 5, -1, 3, -2] {
        let alg = CyclicPresentation::new(&conj, &q.int(a), "j").map_err(err)?;
        let expected = two_squares(a);
        ensure(expected == [1, 2, 5].contains(&a), || format!("oracle disagrees at {a}"))?;
        match split_cyclic(&alg, &Options::default()).map_err(err)? {
            Decision::Yes(m) => {
                ensure(expected, || format!("{a} split unexpectedly"))?;
                ensure(verify_morphism(&m, MorphismKind::Isomorphism), || format!("splitting of {a}"))?;
            }
            Decision::No(_) => ensure(!expected, || format!("{a} reported non-split"))?,
            Decision::Undecided(r) => return Err(format!("{a} undecided: {r}")),
        }
    }
    Ok(())
}

fn finite_fields() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (p, k) in [(2, 2), (2, 3), (3, 2), (5, 2), (3, 3)] {
        let base = FieldTower::finite_field(p, k, "g").map_err(err)?;
        let q = base.order().unwrap();
        for n in [2, 3] {
            let l = FieldTower::finite_extension(&base, n, "t").map_err(err)?;
            let frob = Automorphism::frobenius(&l, &base).map_err(err)?;
            let ext = CyclicExtension::over_base(&frob).map_err(err)?;
            for _ in 0..50 {
                let a = random_element(&base, &mut rng, 0);
                let sigma = frob.pow(if n == 3 { rng.gen_range(1..3) } else { 1 });
                let alg = CyclicPresentation::new(&sigma, &a, "v").map_err(err)?;
                let Decision::Yes(m) = split_cyclic(&alg, &Options::default()).map_err(err)? else {
                    return Err(format!("GF({q}) degree {n}: {a} not split"));
                };
                ensure(m.is_multiplicative_exhaustive(Execution::default()), || "multiplicativity".into())?;
                ensure(verify_morphism(&m, MorphismKind::Isomorphism), || "splitting".into())?;
            }
            let order = l.order().unwrap();
            let mut norms = std::collections::HashSet::new();
            for idx in 1..order {
                norms.insert(ext.norm(&FieldElement::from_index(&l, idx)).lower(&base).unwrap());
            }
            for idx in 1..q {
                let target = FieldElement::from_index(&base, idx);
                let problem = NormProblem::new(&ext, &target).map_err(err)?;
                let solved = match solve_norm(&problem, &Hints::new(), &SearchBudget::default()).map_err(err)? {
                    NormOutcome::Solution(_) => true,
                    NormOutcome::NoSolution(_) => false,
                    NormOutcome::Unknown(r) => return Err(format!("GF({q}) undecided: {r}")),
                };
                ensure(solved == norms.contains(&target), || format!("GF({q}) degree {n}: target {target}"))?;
            }
        }
    }
    Ok(())
}

fn finite_composite() -> Result<CompositeExtension, String> {
    let f3 = FieldTower::prime_field(3).map_err(err)?;
    let f9 = FieldTower::finite_extension(&f3, 2, "a").map_err(err)?;
    let f27 = FieldTower::finite_extension(&f3, 3, "b").map_err(err)?;
    let s9 = Automorphism::frobenius(&f9, &f3).map_err(err)?;
    let s27 = Automorphism::frobenius(&f27, &f3).map_err(err)?;
    let comp = CompositeExtension::new(&s9, &s27, "c").map_err(err)?.certified(DisjointnessBudget::default());
    ensure(comp.fieldness().is_field(), || "GF(9) and GF(27) should be disjoint".into())?;
    Ok(comp)
}

fn hilbert90_round_trips() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(90);
    let cubic = cubic_composite(&load("cubic_extension.json")?)?;
    for comp in [finite_composite()?, cubic] {
        let f = comp.field().clone();
        let (s1, s2) = (comp.sigma1(), comp.sigma2());
        for i in 0..100 {
            let y = random_element(&f, &mut rng, 2);
            let ext = if i % 2 == 0 { comp.first() } else { comp.second() };
            let u = &ext.sigma().on(&y) / &y;
            let z = hilbert90(ext, &u).map_err(err)?;
            ensure(&ext.sigma().on(&z) / &z == u, || format!("hilbert90 over {}", f.label()))?;

            let (x1, x2) = (&s1.on(&y) / &y, &s2.on(&y) / &y);
            let z = bicyclic_hilbert90(&comp, &x1, &x2).map_err(err)?;
            ensure(&s1.on(&z) / &z == x1 && &s2.on(&z) / &z == x2, || {
                format!("bicyclic_hilbert90 over {}", f.label())
            })?;
        }
    }
    Ok(())
}

fn gaussian_sqrt2() -> Result<CompositeExtension, String> {
    let q = FieldTower::rationals();
    let li = FieldTower::extension(&q, &[q.one(), q.zero(), q.one()], "i").map_err(err)?;
    let lr = FieldTower::extension(&q, &[q.int(-2), q.zero(), q.one()], "r").map_err(err)?;
    let ci = Automorphism::top_level(&li, -&li.generator()).map_err(err)?;
    let cr = Automorphism::top_level(&lr, -&lr.generator()).map_err(err)?;
    Ok(CompositeExtension::new(&ci, &cr, "s").map_err(err)?.certified(DisjointnessBudget::default()))
}

fn planted(comp: &CompositeExtension, x1: &FieldElement, x2: &FieldElement) -> Result<BicyclicPresentation, String> {
    let (s1, s2) = (comp.sigma1(), comp.sigma2());
    let u = &(&s2.on(x1) / x1) * &(x2 / &s1.on(x2));
    BicyclicPresentation::checked(comp, &u, &comp.n1_norm(x1), &comp.n2_norm(x2), ("z1", "z2")).map_err(err)
}

fn split_coherence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let comps = [finite_composite()?, gaussian_sqrt2()?];
    let mut shifts = 0;
    for i in 0..25 {
        let comp = &comps[i % 2];
        let f = comp.field();
        let (x1, x2) = (random_element(f, &mut rng, 1), random_element(f, &mut rng, 1));
        let c = planted(comp, &x1, &x2)?;
        ensure(verify_split_solution(&c, &SplitSolution { x1, x2 }), || "planted solution".into())?;
        let s = match solve_split_system(&c, &Options::default()).map_err(err)? {
            Decision::Yes(s) => s,
            other => return Err(format!("instance {i}: {other:?}")),
        };
        ensure(verify_split_solution(&c, &s), || format!("instance {i}: solution does not verify"))?;
        let mut current = s;
        for _ in 0..4 {
            let y = random_element(f, &mut rng, 2);
            current = shift_solution(&c, &current, &y).map_err(err)?;
            shifts += 1;
            ensure(verify_split_solution(&c, &current), || format!("instance {i}: shifted solution"))?;
        }
    }
    ensure(shifts == 100, || format!("{shifts} shifts"))
}

fn is_identity(m: &AlgebraMorphism) -> bool {
    let s = m.source();
    (0..s.dim()).all(|i| m.images()[i] == s.basis(i))
}

fn tensor_route() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let q = FieldTower::rationals();
    let l = FieldTower::extension(&q, &[q.one(), q.zero(), q.one()], "i").map_err(err)?;
    let conj = Automorphism::top_level(&l, -&l.generator()).map_err(err)?;
    let id = Automorphism::identity(&l);
    for (n, a1) in [-1, 3, 2, -3, 6, 7, -6, 11, 5, -7].into_iter().enumerate() {
        let (s, t): (i64, i64) = (rng.gen_range(1..5), rng.gen_range(-4..5));
        let a2 = a1 * (s * s + t * t);
        let alg1 = CyclicPresentation::new(&conj, &q.int(a1), "j").map_err(err)?;
        let alg2 = CyclicPresentation::new(&conj, &q.int(a2), "j").map_err(err)?;
        let Decision::Yes(chi) = iso_same_field(&alg1, &alg2, &id, &Options::default()).map_err(err)? else {
            return Err(format!("pair {n}: ({a1}) and ({a2}) not recognized"));
        };
        let lambda = alg2.sca().regular_representation(Side::Left).map_err(err)?;
        let rho = alg2.sca().regular_representation(Side::Right).map_err(err)?;
        let phi1 = chi.compose(&lambda).map_err(err)?;
        let isos = iso_from_tensor_splitting(alg1.sca(), alg2.sca(), &phi1, &rho, IntertwinerBudget::default())
            .map_err(err)?;
        let there_and_back = isos.forward.compose(&isos.backward).map_err(err)?;
        let back_and_there = isos.backward.compose(&isos.forward).map_err(err)?;
        ensure(is_identity(&there_and_back) && is_identity(&back_and_there), || format!("pair {n}: not inverse"))?;
        ensure(
            verify_morphism(&isos.forward, MorphismKind::Isomorphism)
                && verify_morphism(&isos.backward, MorphismKind::Isomorphism),
            || format!("pair {n}: verify_morphism"),
        )?;
    }
    Ok(())
}

fn structural() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut cyclic: Vec<(String, StructureConstantAlgebra)> = Vec::new();
    let quaternions = load("quaternions.json")?;
    for name in ["Q8", "M2", "A2", "A5", "A3", "Am2", "H_r"] {
        cyclic.push((name.into(), quaternions.cyclic(name).map_err(err)?.sca().clone()));
    }
    let cubic = load("cubic_extension.json")?;
    for name in ["D", "D_twisted", "D2"] {
        cyclic.push((name.into(), cubic.cyclic(name).map_err(err)?.sca().clone()));
    }
    let f9 = FieldTower::finite_field(3, 2, "g").map_err(err)?;
    let l = FieldTower::finite_extension(&f9, 3, "t").map_err(err)?;
    let frob = Automorphism::frobenius(&l, &f9).map_err(err)?;
    let a = random_element(&f9, &mut rng, 0);
    cyclic.push(("GF(729)/GF(9)".into(), CyclicPresentation::new(&frob, &a, "v").map_err(err)?.sca().clone()));

    let mut all = cyclic.clone();
    let comp = cubic_composite(&cubic)?;
    let (c, _) = pair_to_bicyclic(cubic.cyclic("D").map_err(err)?, cubic.cyclic("D_twisted").map_err(err)?, &comp)
        .map_err(err)?;
    all.push(("C".into(), c.sca().clone()));
    let gq = gaussian_sqrt2()?;
    let one = gq.field().one();
    all.push((
        "C(i, r)".into(),
        BicyclicPresentation::checked(&gq, &one, &one.scale_int(3), &one, ("z1", "z2")).map_err(err)?.sca().clone(),
    ));

    for (name, alg) in &all {
        ensure(alg.dim() <= 81, || format!("{name} too large"))?;
        ensure(alg.associativity_violation(Execution::default()).is_none(), || format!("{name} not associative"))?;
        let pairs = if alg.dim() > 16 { 2 } else { 5 };
        for _ in 0..pairs {
            let random = |rng: &mut ChaCha8Rng| -> Vec<FieldElement> {
                (0..alg.dim()).map(|_| random_element(alg.field(), rng, 3)).collect()
            };
            let (x, y) = (random(&mut rng), random(&mut rng));
            let (lx, ry) = (alg.left_matrix(&x).map_err(err)?, alg.right_matrix(&y).map_err(err)?);
            ensure(lx.mul(&ry).map_err(err)? == ry.mul(&lx).map_err(err)?, || format!("{name}: λ and ρ"))?;
        }
    }
    for (name, alg) in &cyclic {
        let center = alg.center().map_err(err)?;
        ensure(center.len() == 1, || format!("{name}: center of dimension {}", center.len()))?;
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, Criterion); 8] = [
        ("cubic example value replay", replay_values),
        ("cubic example end to end", end_to_end),
        ("quaternion decisions", quaternion_suite),
        ("finite-field completeness", finite_fields),
        ("Hilbert 90 round trips", hilbert90_round_trips),
        ("bicyclic split coherence", split_coherence),
        ("tensor-route isomorphisms", tensor_route),
        ("structural invariants", structural),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS {} {name} ({secs:.1} s)", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {} {name} ({secs:.1} s): {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
