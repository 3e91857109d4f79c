//! Norms from quadratic fields `Q(√d)`: local solvability via Hilbert
//! symbols and explicit solutions of `X² - d Y² = a` by Lagrange descent.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Certificate, Place};
use crate::fields::modp;

/// Squarefree part (with sign) of a nonzero integer, and the square root of
/// the cofactor: `n = s * m²`.
pub(crate) fn squarefree(n: &BigInt) -> Option<(BigInt, BigInt)> {
    let mut s = n.signum();
    let mut m = BigInt::one();
    for (p, e) in modp::factor_bigint(n)? {
        if e % 2 == 1 {
            s *= p;
        }
        m *= BigInt::from(p).pow(e / 2);
    }
    Some((s, m))
}

fn valuation(n: &BigInt, p: u64) -> (u32, BigInt) {
    let mut v = 0;
    let mut u = n.clone();
    let bp = BigInt::from(p);
    while (&u % &bp).is_zero() {
        u /= &bp;
        v += 1;
    }
    (v, u)
}

fn legendre(u: &BigInt, p: u64) -> i32 {
    let r = modp::reduce_bigint(u, p);
    if modp::pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

fn mod8(u: &BigInt) -> u64 {
    u.mod_floor(&BigInt::from(8)).to_u64().expect("small residue")
}

/// The Hilbert symbol `(a, b)_p` of nonzero integers; `p = 0` is the real place.
pub(crate) fn hilbert_symbol(a: &BigInt, b: &BigInt, p: u64) -> i32 {
    if p == 0 {
        return if a.is_negative() && b.is_negative() { -1 } else { 1 };
    }
    let (alpha, u) = valuation(a, p);
    let (beta, v) = valuation(b, p);
    if p == 2 {
        let eps = |x: &BigInt| (mod8(x) - 1) / 2 % 2;
        let omega = |x: &BigInt| {
            let r = mod8(x);
            (r * r - 1) / 8 % 2
        };
        let e = eps(&u) * eps(&v) + alpha as u64 * omega(&v) + beta as u64 * omega(&u);
        return if e.is_multiple_of(2) { 1 } else { -1 };
    }
    let mut s = if (alpha * beta) % 2 == 1 && (p - 1) / 2 % 2 == 1 { -1 } else { 1 };
    if beta % 2 == 1 {
        s *= legendre(&u, p);
    }
    if alpha % 2 == 1 {
        s *= legendre(&v, p);
    }
    s
}

/// Whether `a` is a norm from `Q(√d)` for squarefree `d != 1`: a local
/// obstruction at the first failing place, `None` if `a` is a norm
/// everywhere (hence globally), or an error if factoring is out of reach.
pub(crate) fn local_obstruction(a: &BigInt, d: &BigInt) -> Option<Option<Certificate>> {
    let mut places = vec![0u64, 2];
    for n in [a, d] {
        for (p, _) in modp::factor_bigint(n)? {
            if !places.contains(&p) {
                places.push(p);
            }
        }
    }
    for p in places {
        if hilbert_symbol(a, d, p) == -1 {
            let place = if p == 0 { Place::Real(0) } else { Place::Finite(BigInt::from(p)) };
            let detail = format!("Hilbert symbol ({a}, {d}) is -1 at {place}");
            return Some(Some(Certificate::LocalObstruction { place, detail }));
        }
    }
    Some(None)
}

/// `t` with `t² ≡ a (mod |b|)` for squarefree `b`, by CRT over its primes.
fn sqrt_mod_composite(a: &BigInt, b: &BigInt) -> Option<BigInt> {
    let mut t = BigInt::zero();
    let mut m = BigInt::one();
    for (p, e) in modp::factor_bigint(b)? {
        if e > 1 {
            return None;
        }
        let r = BigInt::from(modp::sqrt_mod(modp::reduce_bigint(a, p), p)?);
        if (&r * &r - a).mod_floor(&BigInt::from(p)) != BigInt::zero() {
            return None;
        }
        let bp = BigInt::from(p);
        // t ≡ current (mod m), t ≡ r (mod p)
        let inv = m.extended_gcd(&bp).x.mod_floor(&bp);
        let k = ((&r - &t) * inv).mod_floor(&bp);
        t += &m * k;
        m *= bp;
    }
    let half = &m / 2;
    if t > half {
        t -= &m;
    }
    Some(t)
}

fn is_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Nontrivial rational `(x, y, z)` with `x² = a y² + b z²`, assuming one
/// exists (local conditions hold). `None` if the descent gets stuck.
pub(crate) fn legendre_solve(a: &BigInt, b: &BigInt, depth: usize) -> Option<[BigRational; 3]> {
    let q = |n: &BigInt| BigRational::from_integer(n.clone());
    let one = BigRational::one();
    let zero = BigRational::zero();
    if depth > 200 || a.is_zero() || b.is_zero() {
        return None;
    }
    if let Some(s) = is_square(a) {
        return Some([q(&s), one, zero]);
    }
    if let Some(s) = is_square(b) {
        return Some([q(&s), zero, one]);
    }
    // Strip square factors: a = a0 m², then y' = m y.
    let (a0, ma) = squarefree(a)?;
    let (b0, mb) = squarefree(b)?;
    if !ma.is_one() || !mb.is_one() {
        let [x, y, z] = legendre_solve(&a0, &b0, depth + 1)?;
        return Some([x, y / q(&ma), z / q(&mb)]);
    }
    if a.abs() > b.abs() {
        let [x, y, z] = legendre_solve(b, a, depth + 1)?;
        return Some([x, z, y]);
    }
    if b.abs().is_one() {
        // |a| <= |b| = 1 and neither is a square: x² = -y² - z².
        return None;
    }
    let t = sqrt_mod_composite(a, b)?;
    let b1 = (&t * &t - a) / b;
    // (t + √a)(x' + y'√a) with x'² - a y'² = b1 z'².
    let [x1, y1, z1] = legendre_solve(a, &b1, depth + 1)?;
    let x = q(&t) * &x1 + q(a) * &y1;
    let y = x1 + q(&t) * y1;
    let z = q(&b1) * z1;
    Some([x, y, z])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: i64, b: i64) {
        let (a, b) = (BigInt::from(a), BigInt::from(b));
        let [x, y, z] = legendre_solve(&a, &b, 0).unwrap();
        let q = |n: &BigInt| BigRational::from_integer(n.clone());
        assert!(!(x.is_zero() && y.is_zero() && z.is_zero()));
        assert_eq!(&x * &x, q(&a) * &y * &y + q(&b) * &z * &z);
    }

    #[test]
    fn descent_finds_points() {
        check(-1, 2);
        check(2, 7);
        check(5, 11);
        check(-3, 7);
        check(13, 17);
        check(3, -2);
        check(-1, 5 * 13);
    }

    #[test]
    fn hilbert_symbols() {
        let h = |a: i64, b: i64, p: u64| hilbert_symbol(&BigInt::from(a), &BigInt::from(b), p);
        assert_eq!(h(-1, -1, 0), -1);
        assert_eq!(h(-1, -1, 2), -1);
        assert_eq!(h(3, -1, 3), -1);
        assert_eq!(h(2, -1, 3), 1);
        assert_eq!(h(5, -1, 5), 1);
        // Product formula for (3, -7).
        let prod: i32 = [0, 2, 3, 7].iter().map(|&p| h(3, -7, p)).product();
        assert_eq!(prod, 1);
    }

    #[test]
    fn two_squares() {
        let minus_one = BigInt::from(-1);
        assert!(local_obstruction(&BigInt::from(2), &minus_one).unwrap().is_none());
        assert!(local_obstruction(&BigInt::from(3), &minus_one).unwrap().is_some());
        assert!(local_obstruction(&BigInt::from(-1), &minus_one).unwrap().is_some());
    }
}
