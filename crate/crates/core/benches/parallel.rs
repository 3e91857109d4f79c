use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use csa_core::algorithms::{embed_subfield, galois_matrix};
use csa_core::csa::{AlgebraMorphism, Codomain, CyclicPresentation};
use csa_core::fields::{Automorphism, FieldTower};
use csa_core::matlin::Matrix;
use csa_core::par::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

/// `(L/K, τ, 1)` over the cubic field of conductor 7.
fn cubic_algebra() -> CyclicPresentation {
    let q = FieldTower::rationals();
    let k = FieldTower::extension(&q, &[q.int(-1), q.int(-2), q.one(), q.one()], "a").unwrap();
    let a = k.generator();
    let l = FieldTower::extension(&k, &[k.one(), &(-&a) - &k.one(), &a - &k.int(2), k.one()], "t").unwrap();
    let (al, t) = (a.lift(&l), l.generator());
    let tau_t = &(&(-&(&t * &t)) + &(&(&l.one() - &al) * &t)) + &l.int(2);
    let tau = Automorphism::top_level(&l, tau_t).unwrap();
    CyclicPresentation::new(&tau, &k.one(), "v").unwrap()
}

fn rational_matrix(n: usize) -> Matrix {
    let q = FieldTower::rationals();
    Matrix::from_fn(&q, n, n, |i, j| &q.int(((i * 7 + j * 3) % 11) as i64 - 5) / &q.int((i + j) as i64 % 4 + 1))
}

fn matrix_products(c: &mut Criterion) {
    let mut group = c.benchmark_group("matrix_mul");
    for n in [16, 32, 48] {
        let m = rational_matrix(n);
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &m, |b, m| b.iter(|| m.mul_with(m, exec).unwrap()));
        }
    }
    group.finish();
}

/// The splitting `θ ↦ ψ(θ)`, `v ↦ G` of a cubic algebra with `a = 1`.
fn splitting_checks(c: &mut Criterion) {
    let alg = cubic_algebra();
    let psi = embed_subfield(alg.field(), 3).unwrap();
    let theta = psi.apply_matrix(&alg.field().generator().blocks()).unwrap();
    let g = galois_matrix(alg.sigma()).unwrap();
    let m = AlgebraMorphism::from_words(
        alg.sca(),
        Codomain::Matrices(alg.base().clone(), 3),
        &alg.basis_words(),
        &[theta.into_entries(), g.into_entries()],
        false,
    )
    .unwrap();
    assert!(m.is_multiplicative_exhaustive(Execution::Sequential));
    let mut group = c.benchmark_group("exhaustive_multiplicativity");
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| m.is_multiplicative_exhaustive(exec)));
    }
    group.finish();

    let mut group = c.benchmark_group("associativity");
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| alg.sca().associativity_violation(exec)));
    }
    group.finish();
}

criterion_group!(benches, matrix_products, splitting_checks);
criterion_main!(benches);
