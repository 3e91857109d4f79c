use std::fmt;

use super::element::FieldElement;
use super::modp;
use super::tower::FieldTower;
use crate::{Error, Result};

/// Dense univariate polynomial with coefficients in a [`FieldTower`],
/// ascending order, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: FieldTower,
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn new(field: &FieldTower, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        debug_assert!(coeffs.iter().all(|c| c.field() == field));
        Poly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &FieldTower) -> Self {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn constant(c: &FieldElement) -> Self {
        Poly::new(c.field(), vec![c.clone()])
    }

    /// `c * x^k`.
    pub fn monomial(c: &FieldElement, k: usize) -> Self {
        let mut coeffs = vec![c.field().zero(); k];
        coeffs.push(c.clone());
        Poly::new(c.field(), coeffs)
    }

    pub fn x(field: &FieldTower) -> Self {
        Poly::monomial(&field.one(), 1)
    }

    pub fn field(&self) -> &FieldTower {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(&self.field, (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(&self.field, (0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Poly::new(&self.field, out)
    }

    pub fn scale(&self, c: &FieldElement) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|a| -a).collect())
    }

    /// Euclidean division; the divisor's leading coefficient must be invertible.
    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dl = d.leading().ok_or(Error::ZeroDivisor(Box::new(self.field.zero())))?;
        let inv = dl.inverse()?;
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(&self.field), self.clone()));
        }
        let mut q = vec![self.field.zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (i, di) in d.coeffs.iter().enumerate() {
                r[k + i] = &r[k + i] - &(&c * di);
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Poly::new(&self.field, q), Poly::new(&self.field, r)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.divrem(d)?.1)
    }

    pub fn monic(&self) -> Result<Poly> {
        match self.leading() {
            None => Ok(self.clone()),
            Some(l) => Ok(self.scale(&l.inverse()?)),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*self + t*other = g` (g not normalized).
    pub fn ext_gcd(&self, other: &Poly) -> Result<(Poly, Poly, Poly)> {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::constant(&f.one()), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::constant(&f.one()));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        Ok((r0, s0, t0))
    }

    /// Evaluates at an element of any tower containing the coefficient field.
    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let target = x.field();
        let mut acc = target.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &c.lift(target);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.scale_int(i as i64)).collect())
    }

    /// Applies `f` to every coefficient, landing in `field`.
    pub fn map_coeffs(&self, field: &FieldTower, f: impl Fn(&FieldElement) -> FieldElement) -> Poly {
        Poly::new(field, self.coeffs.iter().map(f).collect())
    }

    /// Lifts the coefficients into a tower that contains their field.
    pub fn lift(&self, target: &FieldTower) -> Poly {
        self.map_coeffs(target, |c| c.lift(target))
    }

    fn powmod(&self, e: u128, m: &Poly) -> Result<Poly> {
        let mut result = Poly::constant(&self.field.one());
        let mut b = self.rem(m)?;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&b).rem(m)?;
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b).rem(m)?;
            }
        }
        Ok(result)
    }

    /// `x^(q^k) mod self` over a finite field of order `q`.
    pub(crate) fn frobenius_power_of_x(&self, k: usize) -> Result<Poly> {
        let q = self.field.order().ok_or_else(|| Error::Unsupported("infinite field".into()))?;
        let mut cur = Poly::x(&self.field).rem(self)?;
        for _ in 0..k {
            cur = cur.powmod(q, self)?;
        }
        Ok(cur)
    }

    /// Rabin's test over a finite coefficient field.
    pub fn is_irreducible_finite(&self) -> Result<bool> {
        let n = match self.degree() {
            None | Some(0) => return Ok(false),
            Some(1) => return Ok(true),
            Some(n) => n,
        };
        let f = self.monic()?;
        let x = Poly::x(&self.field);
        if f.frobenius_power_of_x(n)?.sub(&x).rem(&f)? != Poly::zero(&self.field) {
            return Ok(false);
        }
        for (r, _) in modp::factor(n as u64) {
            let h = f.frobenius_power_of_x(n / r as usize)?.sub(&x);
            if f.gcd(&h)?.degree() != Some(0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Roots in a finite coefficient field, by exhaustive evaluation.
    pub fn roots_finite(&self) -> Result<Vec<FieldElement>> {
        let q = self.field.order().ok_or_else(|| Error::Unsupported("infinite field".into()))?;
        Ok((0..q).map(|i| FieldElement::from_index(&self.field, i)).filter(|x| self.eval(x).is_zero()).collect())
    }

    /// A proper monic factor over a finite field, if the polynomial is
    /// reducible: a linear factor from a root when one exists, otherwise a
    /// distinct-degree factor. `None` also when only equal-degree splitting
    /// (not implemented) would separate the factors.
    pub fn proper_factor_finite(&self) -> Result<Option<Poly>> {
        let Some(n) = self.degree() else {
            return Ok(None);
        };
        if n < 2 {
            return Ok(None);
        }
        if self.field.order().is_some_and(|q| q <= 1 << 20) {
            if let Some(r) = self.roots_finite()?.first() {
                return Ok(Some(Poly::new(&self.field, vec![-r, self.field.one()])));
            }
        }
        let f = self.monic()?;
        let x = Poly::x(&self.field);
        for k in 1..n {
            let h = f.frobenius_power_of_x(k)?.sub(&x);
            let g = f.gcd(&h)?;
            if let Some(d) = g.degree() {
                if d > 0 && d < n {
                    return Ok(Some(g));
                }
            }
        }
        Ok(None)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})*x"),
                _ => format!("({c})*x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} over {}", self.field.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_and_gcd() {
        let q = FieldTower::rationals();
        let x = Poly::x(&q);
        let one = Poly::constant(&q.one());
        let a = x.mul(&x).sub(&one); // x^2 - 1
        let b = x.sub(&one);
        let (quo, r) = a.divrem(&b).unwrap();
        assert!(r.is_zero());
        assert_eq!(quo, x.add(&one));
        assert_eq!(a.gcd(&x.mul(&b)).unwrap(), b);
        let (g, s, t) = a.ext_gcd(&x).unwrap();
        assert_eq!(s.mul(&a).add(&t.mul(&x)), g);
    }

    #[test]
    fn finite_irreducibility_and_factors() {
        let f4 = FieldTower::finite_field(2, 2, "w").unwrap();
        let x = Poly::x(&f4);
        let one = Poly::constant(&f4.one());
        // x^2 + x + 1 splits over GF(4).
        let f = x.mul(&x).add(&x).add(&one);
        assert!(!f.is_irreducible_finite().unwrap());
        let g = f.proper_factor_finite().unwrap().unwrap();
        assert_eq!(g.degree(), Some(1));
        // x^3 + x + 1 stays irreducible over GF(4) (degrees coprime).
        let h = x.mul(&x).mul(&x).add(&x).add(&one);
        assert!(h.is_irreducible_finite().unwrap());
    }
}
