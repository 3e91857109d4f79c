use super::split::{intertwiners, split_bicyclic};
use super::{ensure, solve, Decision, MorphismKind, Options};
use crate::csa::{
    pair_to_bicyclic, AlgebraMorphism, Codomain, CyclicPresentation, GeneralizedCyclicPresentation,
    StructureConstantAlgebra,
};
use crate::fields::{
    Automorphism, CompositeExtension, CyclicExtension, FieldElement, FieldTower, Fieldness, SmallVectors,
};
use crate::matlin::Matrix;
use crate::normeq::NormOutcome;
use crate::{Error, Result};

/// Limits for the search of an invertible intertwiner among small
/// combinations of a kernel basis.
#[derive(Clone, Copy, Debug)]
pub struct IntertwinerBudget {
    pub height: i64,
    pub max_candidates: usize,
}

impl Default for IntertwinerBudget {
    fn default() -> Self {
        IntertwinerBudget { height: 2, max_candidates: 5_000 }
    }
}

/// `forward: A1 → A2` and `backward: A2 → A1`, mutually inverse.
#[derive(Clone, Debug)]
pub struct TensorIsomorphisms {
    pub forward: AlgebraMorphism,
    pub backward: AlgebraMorphism,
}

fn matrix_of(m: &AlgebraMorphism, x: &[FieldElement]) -> Result<Matrix> {
    m.apply_matrix(x)
}

fn is_identity(m: &AlgebraMorphism) -> bool {
    let s = m.source();
    (0..s.dim()).all(|i| m.images()[i] == s.basis(i))
}

fn generator_indices(a: &StructureConstantAlgebra) -> Vec<usize> {
    if a.generators().is_empty() {
        (0..a.dim()).collect()
    } else {
        a.generators().to_vec()
    }
}

/// From an embedding `φ1: A1 → M_N(K)` and an anti-embedding `φ2` of `A2`
/// with commuting images (`N = dim A1`), recovers `A1 ≅ A2`. An invertible
/// `X` with `X φ1(g) = λ(g) X` turns `φ2` into right multiplications on
/// `A1`, and `φ2'(f) = ρ(c)` is read off from the first column.
pub fn iso_from_tensor_splitting(
    a1: &StructureConstantAlgebra,
    a2: &StructureConstantAlgebra,
    phi1: &AlgebraMorphism,
    phi2: &AlgebraMorphism,
    budget: IntertwinerBudget,
) -> Result<TensorIsomorphisms> {
    let k = a1.field();
    let n = a1.dim();
    if a2.field() != k || a2.dim() != n {
        return Err(Error::DegreeMismatch("the two algebras differ in dimension".into()));
    }
    if phi1.codomain() != &Codomain::Matrices(k.clone(), n) || phi2.codomain() != phi1.codomain() {
        return Err(Error::DimensionMismatch(format!("embeddings must land in M_{n}")));
    }
    ensure(phi1, MorphismKind::Embedding, "first embedding")?;
    ensure(phi2, MorphismKind::Anti, "second anti-embedding")?;
    let g1 = generator_indices(a1);
    let g2 = generator_indices(a2);
    let m1: Vec<Matrix> = g1.iter().map(|&g| matrix_of(phi1, &a1.basis(g))).collect::<Result<_>>()?;
    let m2: Vec<Matrix> = g2.iter().map(|&g| matrix_of(phi2, &a2.basis(g))).collect::<Result<_>>()?;
    for (i, x) in m1.iter().enumerate() {
        for (j, y) in m2.iter().enumerate() {
            if x.mul(y)? != y.mul(x)? {
                return Err(Error::CentralizerMismatch(format!("generators {} and {}", g1[i], g2[j])));
            }
        }
    }
    let pairs =
        g1.iter().zip(&m1).map(|(&g, x)| Ok((x.clone(), a1.left_matrix(&a1.basis(g))?))).collect::<Result<Vec<_>>>()?;
    let kernel = intertwiners(k, n, &pairs)?;
    let x = find_invertible(k, &kernel, budget)?;
    let x_inv = x.inverse()?;
    let images = (0..n)
        .map(|q| {
            let p = x.mul(&matrix_of(phi2, &a2.basis(q))?)?.mul(&x_inv)?;
            let c = p.column(0);
            if a1.right_matrix(&c)? != p {
                return Err(Error::VerificationFailed("conjugated image is not a right multiplication".into()));
            }
            Ok(c)
        })
        .collect::<Result<Vec<_>>>()?;
    let backward = AlgebraMorphism::new(a2, Codomain::Algebra(a1.clone()), images, false)?;
    ensure(&backward, MorphismKind::Isomorphism, "isomorphism recovered from the splitting")?;
    let forward = backward.inverse()?;
    ensure(&forward, MorphismKind::Isomorphism, "inverse isomorphism")?;
    if !is_identity(&forward.compose(&backward)?) || !is_identity(&backward.compose(&forward)?) {
        return Err(Error::VerificationFailed("the two maps are not mutually inverse".into()));
    }
    Ok(TensorIsomorphisms { forward, backward })
}

fn find_invertible(k: &FieldTower, kernel: &[Matrix], budget: IntertwinerBudget) -> Result<Matrix> {
    let invertible = |m: &Matrix| m.det().is_ok_and(|d| !d.is_zero());
    if let Some(m) = kernel.iter().find(|m| invertible(m)) {
        return Ok(m.clone());
    }
    for v in SmallVectors::up_to(kernel.len(), budget.height).take(budget.max_candidates) {
        let mut m = Matrix::zeros(k, kernel[0].rows(), kernel[0].cols());
        for (c, b) in v.iter().zip(kernel) {
            if *c != 0 {
                m = m.add(&b.scale(&k.int(*c)))?;
            }
        }
        if invertible(&m) {
            return Ok(m);
        }
    }
    Err(Error::NoInvertibleIntertwiner)
}

/// `A1 → A2` for presentations over fields identified by the `K`-embedding
/// `chi0: L1 → L2`. With `σ2^i χ0 = χ0 σ1`, `A2 = (L2/K, σ2^i, a2^i)` and
/// the map is `θ ↦ χ0(θ)`, `v1 ↦ x v2^i` for `N(x) = a1/a2^i`.
pub fn iso_same_field(
    a1: &CyclicPresentation,
    a2: &CyclicPresentation,
    chi0: &Automorphism,
    opts: &Options,
) -> Result<Decision<AlgebraMorphism>> {
    let (l1, l2) = (a1.field(), a2.field());
    let n = a1.degree();
    if a2.degree() != n || a1.base() != a2.base() {
        return Err(Error::DegreeMismatch("presentations over different bases or of different degrees".into()));
    }
    if chi0.domain() != l1 || chi0.codomain() != l2 || !chi0.fixes(a1.base()) {
        return Err(Error::HypothesisViolated("the field map is not a K-embedding L1 → L2".into()));
    }
    let lhs = chi0.compose(a1.sigma())?;
    let i = (1..=n)
        .filter(|i| num_integer::gcd(*i, n) == 1)
        .find(|&i| a2.sigma().pow(i).compose(chi0).is_ok_and(|rhs| rhs == lhs))
        .ok_or(Error::NotGenerator)?;
    let a2p = a2.power_presentation(i as i64)?;
    let target = a1.a() / a2p.a();
    let x = match solve(a2p.extension(), &target, opts)? {
        NormOutcome::Solution(x) => x,
        NormOutcome::NoSolution(c) => return Ok(Decision::No(c)),
        NormOutcome::Unknown(r) => return Ok(Decision::Undecided(r)),
    };
    let mut parts = vec![l2.zero(); n];
    parts[i % n] = x;
    let m = AlgebraMorphism::from_words(
        a1.sca(),
        Codomain::Algebra(a2.sca().clone()),
        &a1.basis_words(),
        &[a2.scalar(&chi0.on(&l1.generator())), a2.element(&parts)?],
        false,
    )?;
    ensure(&m, MorphismKind::Isomorphism, "isomorphism over a common field")?;
    Ok(Decision::Yes(m))
}

/// Linearly disjoint `L1`, `L2`: `A1 ⊗ A2°` is the bicyclic algebra over
/// `L1 L2`, whose splitting feeds [`iso_from_tensor_splitting`].
pub fn iso_disjoint(
    a1: &CyclicPresentation,
    a2: &CyclicPresentation,
    opts: &Options,
) -> Result<Decision<AlgebraMorphism>> {
    let comp = composite(a1, a2, opts)?;
    match comp.fieldness() {
        Fieldness::Field(_) => {}
        Fieldness::NotField(w) => return Err(Error::NotDisjoint(Some(Box::new(w.clone())))),
        Fieldness::Unknown => return Err(Error::NotDisjoint(None)),
    }
    disjoint_with(a1, a2, &comp, opts)
}

fn composite(a1: &CyclicPresentation, a2: &CyclicPresentation, opts: &Options) -> Result<CompositeExtension> {
    let comp = CompositeExtension::new(a1.sigma(), a2.sigma(), "F")?;
    Ok(if opts.assert_disjoint { comp.assume_field("by request") } else { comp.certified(opts.disjointness) })
}

fn disjoint_with(
    a1: &CyclicPresentation,
    a2: &CyclicPresentation,
    comp: &CompositeExtension,
    opts: &Options,
) -> Result<Decision<AlgebraMorphism>> {
    let (c, iso) = pair_to_bicyclic(a1, a2, comp)?;
    let phi = match split_bicyclic(&c, opts)? {
        Decision::Yes(m) => m,
        Decision::No(cert) => return Ok(Decision::No(cert)),
        Decision::Undecided(r) => return Ok(Decision::Undecided(r)),
    };
    let d2 = a2.sca().dim();
    let on = |idx: usize| phi.apply_matrix(&iso.images()[idx]);
    let phi1 = (0..a1.sca().dim()).map(|p| on(p * d2)).collect::<Result<Vec<_>>>()?;
    let phi2 = (0..d2).map(on).collect::<Result<Vec<_>>>()?;
    let phi1 = AlgebraMorphism::from_matrices(a1.sca(), phi1, false)?;
    let phi2 = AlgebraMorphism::from_matrices(a2.sca(), phi2, true)?;
    let t = iso_from_tensor_splitting(a1.sca(), a2.sca(), &phi1, &phi2, opts.intertwiner)?;
    Ok(Decision::Yes(t.forward))
}

/// A `K`-embedding `L1 → L2` sending `θ1` to `root`.
fn field_map(l1: &FieldTower, l2: &FieldTower, root: FieldElement) -> Result<Automorphism> {
    let k = l1.base().ok_or(Error::FieldMismatch)?;
    let mut images: Vec<FieldElement> = (1..=k.depth()).map(|d| l2.level_generator(d)).collect();
    images.push(root);
    Automorphism::new(l1, l2, images)
}

/// Decides `A1 ≅ A2` for cyclic presentations of the same degree over `K`:
/// directly when the fields coincide or a root of one defining polynomial
/// is known in the other field, through the tensor product when the fields
/// are linearly disjoint.
pub fn iso_cyclic(
    a1: &CyclicPresentation,
    a2: &CyclicPresentation,
    opts: &Options,
) -> Result<Decision<AlgebraMorphism>> {
    let (l1, l2) = (a1.field(), a2.field());
    if a1.base() != a2.base() || a1.degree() != a2.degree() {
        return Err(Error::DegreeMismatch("presentations over different bases or of different degrees".into()));
    }
    if l1 == l2 {
        return iso_same_field(a1, a2, &field_map(l1, l2, l2.generator())?, opts);
    }
    let p1 = l1.modulus().lift(l2);
    if l1.is_finite() {
        let root = p1.roots_finite()?.into_iter().next().ok_or(Error::FieldMismatch)?;
        return iso_same_field(a1, a2, &field_map(l1, l2, root)?, opts);
    }
    let comp = composite(a1, a2, opts)?;
    match comp.fieldness() {
        Fieldness::Field(_) => disjoint_with(a1, a2, &comp, opts),
        Fieldness::NotField(w) => {
            let theta = comp.field().level_generator(l1.depth());
            if let Some(s) = comp.project_right(&(&theta - w)).filter(|s| p1.eval(s).is_zero()) {
                return iso_same_field(a1, a2, &field_map(l1, l2, s)?, opts);
            }
            let p2 = l2.modulus().lift(l1);
            if let Some(t) = comp.project_left(&(&comp.field().generator() - w)).filter(|t| p2.eval(t).is_zero()) {
                return Ok(match iso_same_field(a2, a1, &field_map(l2, l1, t)?, opts)? {
                    Decision::Yes(m) => Decision::Yes(m.inverse()?),
                    other => other,
                });
            }
            Ok(Decision::Undecided("the fields share a proper subfield".into()))
        }
        Fieldness::Unknown => {
            Ok(Decision::Undecided("no common root found and linear disjointness could not be certified".into()))
        }
    }
}

/// `B ⊕ B w ⊕ ... ⊕ B w^{m-1}` with `w^m = b1` against `w^m = b2`, over the
/// same `B` and `σ̃`: with `b1 = c b2`, `c ∈ K`, the map `w1 ↦ x w2` for
/// `N_{L0/K}(x) = c` is an isomorphism.
pub fn iso_generalized(
    g1: &GeneralizedCyclicPresentation,
    g2: &GeneralizedCyclicPresentation,
    opts: &Options,
) -> Result<Decision<AlgebraMorphism>> {
    let (b1, b2) = (g1.centralizer(), g2.centralizer());
    if b1.sca() != b2.sca() || b1.sigma() != b2.sigma() || g1.sigma_l() != g2.sigma_l() || g1.s() != g2.s() {
        return Err(Error::HypothesisViolated("presentations differ in their centralizer or twist".into()));
    }
    let k = g1.base();
    let l = b1.field();
    let l0 = b1.base();
    let j = g2.b().iter().position(|x| !x.is_zero()).ok_or(Error::InvalidPresentation("b is zero".into()))?;
    let c = (&g1.b()[j] / &g2.b()[j])
        .lower(k)
        .ok_or_else(|| Error::HypothesisViolated("b1/b2 is not in the base field".into()))?;
    let cl = c.lift(l);
    if g1.b().iter().zip(g2.b()).any(|(x, y)| *x != &cl * y) {
        return Err(Error::HypothesisViolated("b1 is not a base multiple of b2".into()));
    }
    let sigma0 = g1.sigma_l().restrict(l0).ok_or(Error::NotGenerator)?;
    let ext = CyclicExtension::over_base(&sigma0)?;
    let x = match solve(&ext, &c, opts)? {
        NormOutcome::Solution(x) => x,
        NormOutcome::NoSolution(cert) => return Ok(Decision::No(cert)),
        NormOutcome::Unknown(r) => return Ok(Decision::Undecided(r)),
    };
    let nb = b1.degree();
    let m = g1.m();
    let dl = l.absolute_degree() / k.absolute_degree();
    let mut xw = vec![l.zero(); nb * m];
    xw[nb % (nb * m)] = x.lift(l);
    let mut xw_pows = vec![{
        let mut one = vec![l.zero(); nb * m];
        one[0] = l.one();
        one
    }];
    for t in 1..m {
        xw_pows.push(g2.mul_parts(&xw_pows[t - 1], &xw));
    }
    let images = (0..g1.sca().dim())
        .map(|idx| {
            let (q, p, t) = (idx % dl, (idx / dl) % nb, idx / (dl * nb));
            let mut coords = vec![k.zero(); dl];
            coords[q] = k.one();
            let mut parts = vec![l.zero(); nb * m];
            parts[p] = FieldElement::from_coords_over(l, k, &coords)?;
            g2.element(&g2.mul_parts(&parts, &xw_pows[t]))
        })
        .collect::<Result<Vec<_>>>()?;
    let iso = AlgebraMorphism::new(g1.sca(), Codomain::Algebra(g2.sca().clone()), images, false)?;
    ensure(&iso, MorphismKind::Isomorphism, "isomorphism of generalized presentations")?;
    Ok(Decision::Yes(iso))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::verify_morphism;
    use crate::par::Execution;

    fn gaussian() -> (FieldTower, Automorphism) {
        let q = FieldTower::rationals();
        let l = FieldTower::extension(&q, &[q.int(1), q.zero(), q.one()], "i").unwrap();
        let conj = Automorphism::top_level(&l, -&l.generator()).unwrap();
        (l, conj)
    }

    fn quadratic(d: i64, label: &str) -> (FieldTower, Automorphism) {
        let q = FieldTower::rationals();
        let l = FieldTower::extension(&q, &[q.int(-d), q.zero(), q.one()], label).unwrap();
        let conj = Automorphism::top_level(&l, -&l.generator()).unwrap();
        (l, conj)
    }

    #[test]
    fn same_field_quaternions() {
        let (l, conj) = gaussian();
        let q = l.base().unwrap().clone();
        let opts = Options::default();
        let a2 = CyclicPresentation::new(&conj, &q.int(2), "v").unwrap();
        let a8 = CyclicPresentation::new(&conj, &q.int(8), "v").unwrap();
        let Decision::Yes(m) = iso_cyclic(&a2, &a8, &opts).unwrap() else { panic!() };
        assert!(m.is_multiplicative_exhaustive(Execution::default()));
        let h = CyclicPresentation::new(&conj, &q.int(-1), "v").unwrap();
        assert!(iso_cyclic(&h, &a2, &opts).unwrap().is_no());
        let h2 = CyclicPresentation::new(&conj, &q.int(-2), "v").unwrap();
        assert!(iso_cyclic(&h, &h2, &opts).unwrap().is_yes());
    }

    #[test]
    fn relabelled_field_is_recognized() {
        let (l, conj) = gaussian();
        let (l2, conj2) = quadratic(-1, "j");
        let q = l.base().unwrap().clone();
        let a = CyclicPresentation::new(&conj, &q.int(3), "v").unwrap();
        let b = CyclicPresentation::new(&conj2, &q.int(6), "u").unwrap();
        assert!(iso_cyclic(&a, &b, &Options::default()).unwrap().is_yes());
        assert_eq!(l, l2);
    }

    #[test]
    fn disjoint_quaternions() {
        let (li, ci) = gaussian();
        let (_, cr) = quadratic(-2, "r");
        let q = li.base().unwrap().clone();
        let opts = Options::default();
        // Hamilton's quaternions as (Q(i), -1) and (Q(√-2), -1).
        let h1 = CyclicPresentation::new(&ci, &q.int(-1), "v").unwrap();
        let h2 = CyclicPresentation::new(&cr, &q.int(-1), "u").unwrap();
        let d = iso_cyclic(&h1, &h2, &opts).unwrap();
        let Decision::Yes(m) = d else { panic!("{d:?}") };
        assert!(verify_morphism(&m, MorphismKind::Isomorphism));
        assert!(m.is_multiplicative_exhaustive(Execution::default()));
        // (Q(i), 3) is ramified at 2 and 3, the other at 2 and infinity.
        let a3 = CyclicPresentation::new(&ci, &q.int(3), "v").unwrap();
        assert!(!iso_cyclic(&a3, &h2, &opts).unwrap().is_yes());
    }

    #[test]
    fn tensor_splitting_of_matrix_algebras() {
        // Q(i) ⊗ Q(i)° acting on Q(i) ⊕ Q(i) j by left and right multiplication.
        let (l, conj) = gaussian();
        let q = l.base().unwrap().clone();
        let a = CyclicPresentation::new(&conj, &q.int(2), "v").unwrap();
        let alg = a.sca();
        let phi1 = alg.regular_representation(crate::csa::Side::Left).unwrap();
        let phi2 = alg.regular_representation(crate::csa::Side::Right).unwrap();
        let t = iso_from_tensor_splitting(alg, alg, &phi1, &phi2, IntertwinerBudget::default()).unwrap();
        assert!(verify_morphism(&t.forward, MorphismKind::Isomorphism));
        let wrong =
            iso_from_tensor_splitting(alg, alg, &phi1, &phi1.with_opposite_source(), IntertwinerBudget::default());
        assert!(wrong.is_err());
    }

    #[test]
    fn finite_field_presentations() {
        let k = FieldTower::finite_field(5, 1, "g").unwrap();
        let l1 = FieldTower::finite_extension(&k, 2, "s").unwrap();
        let f1 = Automorphism::frobenius(&l1, &k).unwrap();
        let a = CyclicPresentation::new(&f1, &k.int(2), "v").unwrap();
        let b = CyclicPresentation::new(&f1, &k.int(3), "v").unwrap();
        assert!(iso_cyclic(&a, &b, &Options::default()).unwrap().is_yes());
    }

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
    fn generalized_presentations() {
        let opts = Options::default();
        // 6/3 = N(2 + √2).
        let Decision::Yes(m) = iso_generalized(&planted(3), &planted(6), &opts).unwrap() else { panic!() };
        assert!(m.is_multiplicative_exhaustive(Execution::default()));
        // 3 is not a norm from Q(√2).
        assert!(!iso_generalized(&planted(1), &planted(3), &opts).unwrap().is_yes());
    }
}
