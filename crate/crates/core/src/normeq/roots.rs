//! `n`-th roots in `Q` and in simple extensions of `Q`, by lifting roots
//! modulo a completely split prime and rational reconstruction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::fields::{modp, FieldElement};

/// Largest number of residue combinations tried per prime.
const MAX_COMBINATIONS: usize = 4096;
/// Primes tried when looking for a completely split one.
const PRIME_BOUND: u64 = 20_000;

/// Some `c` with `c^n = t`, if `t` is an `n`-th power in its field (which
/// must be `Q` or a simple extension of `Q`).
pub(crate) fn nth_root(t: &FieldElement, n: u32) -> Option<FieldElement> {
    if n == 0 || t.is_zero() {
        return None;
    }
    if n == 1 {
        return Some(t.clone());
    }
    match t.field().depth() {
        0 => {
            let r = t.as_rational()?;
            let root = rational_root(&r, n)?;
            Some(FieldElement::from_rational(t.field(), &root))
        }
        1 => padic_root(t, n),
        _ => None,
    }
}

fn integer_root(x: &BigInt, n: u32) -> Option<BigInt> {
    if x.is_negative() && n.is_multiple_of(2) {
        return None;
    }
    let r = if x.is_negative() { -((-x).nth_root(n)) } else { x.nth_root(n) };
    (num_traits::pow(r.clone(), n as usize) == *x).then_some(r)
}

fn rational_root(r: &BigRational, n: u32) -> Option<BigRational> {
    Some(BigRational::new(integer_root(r.numer(), n)?, integer_root(r.denom(), n)?))
}

fn rat_mod(r: &BigRational, m: &BigInt) -> Option<BigInt> {
    let inv = mod_inverse(r.denom(), m)?;
    Some((r.numer() * inv).mod_floor(m))
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

fn eval_mod(f: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    f.iter().rev().fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(m))
}

/// Newton iteration for a simple root of `f` modulo `m = p^k`, from a root mod `p`.
fn lift_root(f: &[BigInt], r0: u64, m: &BigInt, k: u32) -> Option<BigInt> {
    let df: Vec<BigInt> = f.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    let mut r = BigInt::from(r0);
    let steps = 32 - k.leading_zeros() + 1;
    for _ in 0..steps {
        let d = mod_inverse(&eval_mod(&df, &r, m), m)?;
        r = (&r - eval_mod(f, &r, m) * d).mod_floor(m);
    }
    eval_mod(f, &r, m).is_zero().then_some(r)
}

/// Rational `a/b` with `a ≡ x b (mod m)` and `|a|, b <= sqrt(m/2)`.
fn reconstruct(x: &BigInt, m: &BigInt) -> Option<BigRational> {
    let half: BigInt = m / 2;
    let bound = half.sqrt();
    let (mut r0, mut r1) = (m.clone(), x.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// Solves `V c = y` modulo `m` for the Vandermonde matrix of distinct roots.
fn vandermonde_solve(roots: &[BigInt], y: &[BigInt], m: &BigInt) -> Option<Vec<BigInt>> {
    let n = roots.len();
    let mut a: Vec<Vec<BigInt>> = roots
        .iter()
        .zip(y)
        .map(|(r, yi)| {
            let mut row: Vec<BigInt> = (0..n as u32).map(|j| r.modpow(&BigInt::from(j), m)).collect();
            row.push(yi.clone());
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&i| mod_inverse(&a[i][col], m).is_some())?;
        a.swap(col, piv);
        let inv = mod_inverse(&a[col][col], m)?;
        for x in a[col].iter_mut() {
            *x = (&*x * &inv).mod_floor(m);
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                let pivot_row = a[col].clone();
                for (x, p) in a[i].iter_mut().zip(&pivot_row) {
                    *x = (&*x - &f * p).mod_floor(m);
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

/// A prime `p ∤ n` at which the modulus splits into distinct linear factors
/// and `t` is a unit, with the roots.
fn split_prime(f: &[BigRational], t: &[BigRational], n: u32, start: u64) -> Option<(u64, Vec<u64>)> {
    let deg = f.len() - 1;
    let mut p = start;
    while p < PRIME_BOUND {
        p += 1;
        if !modp::is_prime(p) || u64::from(n) % p == 0 {
            continue;
        }
        let Some(fp) = f.iter().map(|c| rat_mod(c, &BigInt::from(p))?.to_u64()).collect::<Option<Vec<u64>>>() else {
            continue;
        };
        let roots = modp::poly::simple_roots(&fp, p);
        if roots.len() != deg {
            continue;
        }
        let Some(tp) = t.iter().map(|c| rat_mod(c, &BigInt::from(p))?.to_u64()).collect::<Option<Vec<u64>>>() else {
            continue;
        };
        if roots.iter().all(|&r| modp::poly::eval(&tp, r, p) != 0) {
            return Some((p, roots));
        }
    }
    None
}

fn padic_root(t: &FieldElement, n: u32) -> Option<FieldElement> {
    let field = t.field();
    let f: Vec<BigRational> = field.modulus().coeffs().iter().map(|c| c.as_rational()).collect::<Option<_>>()?;
    let tc = t.rational_coords()?;
    // Clear denominators so that Newton works over the integers.
    let fden = f.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let fi: Vec<BigInt> = f.iter().map(|c| (c * BigRational::from_integer(fden.clone())).to_integer()).collect();
    let mut start = 2;
    for _ in 0..4 {
        let (p, roots) = split_prime(&f, &tc, n, start)?;
        start = p;
        let tp: Vec<u64> =
            tc.iter().map(|c| rat_mod(c, &BigInt::from(p)).and_then(|x| x.to_u64())).collect::<Option<_>>()?;
        let residues: Vec<Vec<u64>> = roots
            .iter()
            .map(|&r| {
                let a = modp::poly::eval(&tp, r, p);
                (1..p).filter(|&y| modp::pow_mod(y, u64::from(n), p) == a).collect()
            })
            .collect();
        if residues.iter().any(Vec::is_empty) {
            // Not an n-th power locally, hence not globally.
            return None;
        }
        let combos: usize = residues.iter().map(Vec::len).product();
        if combos > MAX_COMBINATIONS {
            continue;
        }
        let mut k = 8u32;
        while k <= 512 {
            let m = BigInt::from(p).pow(k);
            if let Some(c) = try_precision(field, &fi, &roots, &residues, &tc, n, k, &m, t) {
                return Some(c);
            }
            k *= 2;
        }
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn try_precision(
    field: &crate::fields::FieldTower,
    f: &[BigInt],
    roots: &[u64],
    residues: &[Vec<u64>],
    t: &[BigRational],
    n: u32,
    k: u32,
    m: &BigInt,
    target: &FieldElement,
) -> Option<FieldElement> {
    let lifted: Vec<BigInt> = roots.iter().map(|&r| lift_root(f, r, m, k)).collect::<Option<_>>()?;
    let tm: Vec<BigInt> = t.iter().map(|c| rat_mod(c, m)).collect::<Option<_>>()?;
    let values: Vec<BigInt> = lifted.iter().map(|r| eval_mod(&tm, r, m)).collect();
    let mut idx = vec![0usize; residues.len()];
    loop {
        let ys: Option<Vec<BigInt>> = idx
            .iter()
            .zip(residues)
            .zip(&values)
            .map(|((&i, res), a)| {
                let poly = [-a.clone(), BigInt::zero()]
                    .into_iter()
                    .chain(std::iter::repeat_n(BigInt::zero(), n as usize - 2))
                    .chain(std::iter::once(BigInt::one()))
                    .collect::<Vec<_>>();
                lift_root(&poly, res[i], m, k)
            })
            .collect();
        if let Some(ys) = ys {
            if let Some(coeffs) = vandermonde_solve(&lifted, &ys, m) {
                let rats: Option<Vec<BigRational>> = coeffs.iter().map(|c| reconstruct(c, m)).collect();
                if let Some(rats) = rats {
                    if let Ok(c) = FieldElement::from_rational_coords(field, &rats) {
                        if c.pow(u128::from(n)) == *target {
                            return Some(c);
                        }
                    }
                }
            }
        }
        // Next combination.
        let mut j = 0;
        loop {
            if j == idx.len() {
                return None;
            }
            idx[j] += 1;
            if idx[j] < residues[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FieldTower;

    #[test]
    fn rational_roots() {
        let q = FieldTower::rationals();
        let t = FieldElement::from_rational(&q, &BigRational::new((-27).into(), 8.into()));
        assert_eq!(nth_root(&t, 3).unwrap().as_rational().unwrap(), BigRational::new((-3).into(), 2.into()));
        assert!(nth_root(&q.int(2), 2).is_none());
    }

    #[test]
    fn roots_in_a_cubic_field() {
        let q = FieldTower::rationals();
        let k = FieldTower::extension(&q, &[q.int(-1), q.int(-2), q.one(), q.one()], "a").unwrap();
        let a = k.generator();
        let c = &(&(&a * &a) * &k.int(-19)) - &(&a + &k.int(6));
        let c = &c / &k.int(14);
        let t = c.pow(3);
        let r = nth_root(&t, 3).unwrap();
        assert_eq!(r.pow(3), t);
        assert!(nth_root(&a, 3).is_none());
        let s = &(&a + &k.int(3)) / &k.int(5);
        assert_eq!(nth_root(&s.pow(2), 2).unwrap().pow(2), s.pow(2));
    }
}
