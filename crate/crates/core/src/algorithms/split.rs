use super::{ensure, solve, Decision, MorphismKind, Options};
use crate::csa::{AlgebraMorphism, BicyclicPresentation, Codomain, CyclicPresentation, Side, StructureConstantAlgebra};
use crate::fields::{Automorphism, CyclicExtension, FieldElement, FieldTower};
use crate::matlin::Matrix;
use crate::normeq::{hilbert90, NormOutcome};
use crate::{Error, Result};

/// A solution of `N1(x1) = b1`, `N2(x2) = b2`, `(σ2(x1)/x1)(x2/σ1(x2)) = u`.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitSolution {
    pub x1: FieldElement,
    pub x2: FieldElement,
}

/// `ψ: L → M_n(K)` sending `θ` to its companion matrix, i.e. the left
/// regular representation on the power basis.
pub fn embed_subfield(l: &FieldTower, n: usize) -> Result<AlgebraMorphism> {
    if l.depth() == 0 || l.degree() != n {
        return Err(Error::DegreeMismatch(format!("[{}:base] is not {n}", l.label())));
    }
    StructureConstantAlgebra::field_algebra(l)?.regular_representation(Side::Left)
}

/// `ψ(x)` for `x ∈ L`, where `ψ` comes from [`embed_subfield`].
fn image_of(psi: &AlgebraMorphism, x: &FieldElement) -> Result<Matrix> {
    psi.apply_matrix(&x.blocks())
}

/// The matrix of `σ` on the power basis of `L` over `K`. It conjugates
/// `ψ(λ)` to `ψ(σ(λ))` and its `n`-th power is `1`.
pub fn galois_matrix(sigma: &Automorphism) -> Result<Matrix> {
    let l = sigma.domain();
    let k = l.base().ok_or(Error::FieldMismatch)?;
    let cols: Vec<Vec<FieldElement>> = l.relative_basis(l.depth() - 1).iter().map(|e| sigma.on(e).blocks()).collect();
    Matrix::from_columns(k, l.degree(), &cols)
}

/// Basis of `{X : X A = B X for all pairs (A, B)}` for square matrices of size `n`.
pub(super) fn intertwiners(field: &FieldTower, n: usize, pairs: &[(Matrix, Matrix)]) -> Result<Vec<Matrix>> {
    let mut rows = Vec::with_capacity(pairs.len() * n * n);
    for (a, b) in pairs {
        for r in 0..n {
            for c in 0..n {
                let mut row = vec![field.zero(); n * n];
                for j in 0..n {
                    let x = a.get(j, c);
                    if !x.is_zero() {
                        row[r * n + j] = &row[r * n + j] + x;
                    }
                }
                for i in 0..n {
                    let y = b.get(r, i);
                    if !y.is_zero() {
                        row[i * n + c] = &row[i * n + c] - y;
                    }
                }
                rows.push(row);
            }
        }
    }
    let system = Matrix::from_rows(field, rows)?;
    system.kernel()?.into_iter().map(|v| Matrix::from_entries(field, n, n, v)).collect()
}

/// An invertible `X` with `X ψ(λ) X^-1 = ψ(f(λ))`, and `b` with `X^m = b`
/// when that power is scalar (`m` the order of `f`).
#[derive(Clone, Debug)]
pub struct Conjugator {
    pub matrix: Matrix,
    pub b: Option<FieldElement>,
}

/// Solves the intertwining system on the generators of the source of `psi`
/// and returns the first invertible kernel vector.
pub fn conjugator(psi: &AlgebraMorphism, f: &Automorphism) -> Result<Conjugator> {
    let Codomain::Matrices(k, n) = psi.codomain() else {
        return Err(Error::Unsupported("conjugator needs a matrix embedding".into()));
    };
    let l = f.domain();
    if f.codomain() != l || l.base() != Some(k) || l.degree() != psi.source().dim() {
        return Err(Error::FieldMismatch);
    }
    let basis = l.relative_basis(l.depth() - 1);
    let pairs = psi
        .source()
        .generators()
        .iter()
        .map(|&g| Ok((image_of(psi, &basis[g])?, image_of(psi, &f.on(&basis[g]))?)))
        .collect::<Result<Vec<_>>>()?;
    let kernel = intertwiners(k, *n, &pairs)?;
    let x = kernel.into_iter().find(|x| x.det().is_ok_and(|d| !d.is_zero())).ok_or(Error::NoConjugator)?;
    let m = f.order().unwrap_or(*n);
    let p = x.pow(m)?;
    let c = p.get(0, 0).clone();
    let scalar = (0..*n).all(|i| (0..*n).all(|j| *p.get(i, j) == if i == j { c.clone() } else { k.zero() }));
    Ok(Conjugator { matrix: x, b: scalar.then_some(c) })
}

/// Splits `(L/K, σ, a)`: embed `L`, conjugate by the Galois matrix, solve
/// `N(x) = a` and send `v ↦ ψ(x) X`.
pub fn split_cyclic(a: &CyclicPresentation, opts: &Options) -> Result<Decision<AlgebraMorphism>> {
    let n = a.degree();
    let x = match solve(a.extension(), a.a(), opts)? {
        NormOutcome::Solution(x) => x,
        NormOutcome::NoSolution(c) => return Ok(Decision::No(c)),
        NormOutcome::Unknown(r) => return Ok(Decision::Undecided(r)),
    };
    let psi = embed_subfield(a.field(), n)?;
    let g = galois_matrix(a.sigma())?;
    let theta = image_of(&psi, &a.field().generator())?;
    let v = image_of(&psi, &x)?.mul(&g)?;
    let m = AlgebraMorphism::from_words(
        a.sca(),
        Codomain::Matrices(a.base().clone(), n),
        &a.basis_words(),
        &[theta.into_entries(), v.into_entries()],
        false,
    )?;
    ensure(&m, MorphismKind::Isomorphism, "splitting of a cyclic algebra")?;
    Ok(Decision::Yes(m))
}

pub fn verify_split_solution(c: &BicyclicPresentation, s: &SplitSolution) -> bool {
    let comp = c.composite();
    let (Ok(x1), Ok(x2)) = (s.x1.try_lift(c.field()), s.x2.try_lift(c.field())) else {
        return false;
    };
    if x1.is_zero() || x2.is_zero() {
        return false;
    }
    let (s1, s2) = (comp.sigma1(), comp.sigma2());
    comp.n1_norm(&x1) == *c.b1()
        && comp.n2_norm(&x2) == *c.b2()
        && &(&s2.on(&x1) / &x1) * &(&x2 / &s1.on(&x2)) == *c.u()
}

/// `(x1 σ1(y)/y, x2 σ2(y)/y)`, again a solution.
pub fn shift_solution(c: &BicyclicPresentation, s: &SplitSolution, y: &FieldElement) -> Result<SplitSolution> {
    let comp = c.composite();
    let y = y.try_lift(c.field())?;
    let yi = y.inverse()?;
    Ok(SplitSolution { x1: &(&s.x1 * &comp.sigma1().on(&y)) * &yi, x2: &(&s.x2 * &comp.sigma2().on(&y)) * &yi })
}

/// Two norm equations and a Hilbert 90 step: `N1(x1) = b1`; `x2'` with
/// `σ1(x2')/x2' = u x1/σ2(x1)`; `x2'' ∈ F1` with `N2(x2'') = b2 N2(x2')`;
/// then `x2 = x2''/x2'`.
pub fn solve_split_system(c: &BicyclicPresentation, opts: &Options) -> Result<Decision<SplitSolution>> {
    let report = c.validate();
    if !report.is_ok() {
        return Err(Error::InvalidPresentation(format!("{report:?}")));
    }
    let comp = c.composite();
    let x1 = match solve(comp.first(), c.b1(), opts)? {
        NormOutcome::Solution(x) => x,
        NormOutcome::NoSolution(cert) => return Ok(Decision::No(cert)),
        NormOutcome::Unknown(r) => return Ok(Decision::Undecided(format!("first norm equation: {r}"))),
    };
    let rhs = &(c.u() * &x1) / &comp.sigma2().on(&x1);
    let x2p = hilbert90(comp.first(), &rhs)?;
    let t = &comp.n2_norm(&x2p) * c.b2();
    let t =
        comp.project_base(&t).ok_or_else(|| Error::HypothesisViolated("b2 N2(x2') is not in the base field".into()))?;
    let right = CyclicExtension::over_base(comp.right_sigma())?;
    let y = match solve(&right, &t, opts)? {
        NormOutcome::Solution(y) => y,
        NormOutcome::NoSolution(cert) => return Ok(Decision::No(cert)),
        NormOutcome::Unknown(r) => return Ok(Decision::Undecided(format!("second norm equation: {r}"))),
    };
    let x2 = &comp.embed_right(&y) / &x2p;
    let s = SplitSolution { x1, x2 };
    if !verify_split_solution(c, &s) {
        return Err(Error::VerificationFailed("split system".into()));
    }
    Ok(Decision::Yes(s))
}

/// `C → M_n(K)`: with `z_i = x_i w_i` the `w_i` satisfy `w_i^{n_i} = 1` and
/// commute, so `C ≅ (L1/K, τ1, 1) ⊗ (L2/K, τ2, 1)`; each factor splits by
/// its Galois matrix and the two are combined by Kronecker products.
pub fn split_bicyclic(c: &BicyclicPresentation, opts: &Options) -> Result<Decision<AlgebraMorphism>> {
    let s = match solve_split_system(c, opts)? {
        Decision::Yes(s) => s,
        Decision::No(cert) => return Ok(Decision::No(cert)),
        Decision::Undecided(r) => return Ok(Decision::Undecided(r)),
    };
    let comp = c.composite();
    let k = c.base();
    let (l1, l2) = (comp.left(), comp.right());
    let (n1, n2) = (comp.n1(), comp.n2());
    let (i1, i2) = (Matrix::identity(k, n1), Matrix::identity(k, n2));
    let psi1 = embed_subfield(l1, n1)?;
    let psi2 = embed_subfield(l2, n2)?;
    let theta = image_of(&psi1, &l1.generator())?.kron(&i2)?;
    let eta = i1.kron(&image_of(&psi2, &l2.generator())?)?;
    let w1 = galois_matrix(comp.left_sigma())?.kron(&i2)?;
    let w2 = i1.kron(&galois_matrix(comp.right_sigma())?)?;
    let n = n1 * n2;
    let embed = |x: &FieldElement| -> Result<Matrix> {
        let coords = x.coords_over(k);
        let mut out = Matrix::zeros(k, n, n);
        let mut eta_pow = Matrix::identity(k, n);
        for j in 0..n2 {
            let mut term = eta_pow.clone();
            for i in 0..n1 {
                let cij = &coords[j * n1 + i];
                if !cij.is_zero() {
                    out = out.add(&term.scale(cij))?;
                }
                term = theta.mul(&term)?;
            }
            eta_pow = eta_pow.mul(&eta)?;
        }
        Ok(out)
    };
    let z1 = embed(&s.x1)?.mul(&w1)?;
    let z2 = embed(&s.x2)?.mul(&w2)?;
    let m = AlgebraMorphism::from_words(
        c.sca(),
        Codomain::Matrices(k.clone(), n),
        &c.basis_words(),
        &[theta.into_entries(), eta.into_entries(), z1.into_entries(), z2.into_entries()],
        false,
    )?;
    ensure(&m, MorphismKind::Isomorphism, "splitting of a bicyclic algebra")?;
    Ok(Decision::Yes(m))
}
