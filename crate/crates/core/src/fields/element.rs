use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::modp;
use super::poly::Poly;
use super::tower::{FieldTower, Level, PrimeField};
use crate::{Error, Result};

/// Flat coordinates over the prime field. Rational coordinates share one
/// positive denominator, kept coprime to the numerators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Coords {
    Q { num: Vec<BigInt>, den: BigInt },
    P(Vec<u64>),
}

/// An element of a [`FieldTower`], stored in the flat power basis over the
/// prime field (block-major: the coefficient of `y^i` over the base occupies
/// the `i`-th block).
#[derive(Clone)]
pub struct FieldElement {
    pub(crate) field: FieldTower,
    pub(crate) coords: Coords,
}

fn normalize(num: &mut [BigInt], den: &mut BigInt) {
    if den.is_negative() {
        for x in num.iter_mut() {
            *x = -&*x;
        }
        *den = -&*den;
    }
    if num.iter().all(|x| x.is_zero()) {
        *den = BigInt::one();
        return;
    }
    if den.is_one() {
        return;
    }
    let mut g = den.clone();
    for x in num.iter() {
        if g.is_one() {
            return;
        }
        if !x.is_zero() {
            g = g.gcd(x);
        }
    }
    if !g.is_one() {
        for x in num.iter_mut() {
            *x /= &g;
        }
        *den /= &g;
    }
}

fn is_zero_slice(v: &[BigInt]) -> bool {
    v.iter().all(|x| x.is_zero())
}

fn add_into(acc: &mut [BigInt], v: &[BigInt]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += b;
    }
}

fn sub_into(acc: &mut [BigInt], v: &[BigInt]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a -= b;
    }
}

/// Product of integer coordinate vectors in a tower whose moduli are integral.
fn mul_int(t: &Level, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if t.depth == 0 {
        return vec![&a[0] * &b[0]];
    }
    let base = &t.base.as_ref().unwrap().0;
    let bd = base.abs_degree;
    let n = t.degree;
    let mut prod = vec![vec![BigInt::zero(); bd]; 2 * n - 1];
    for i in 0..n {
        let ai = &a[i * bd..(i + 1) * bd];
        if is_zero_slice(ai) {
            continue;
        }
        for j in 0..n {
            let bj = &b[j * bd..(j + 1) * bd];
            if is_zero_slice(bj) {
                continue;
            }
            if bd == 1 {
                prod[i + j][0] += &ai[0] * &bj[0];
            } else {
                let p = mul_int(base, ai, bj);
                add_into(&mut prod[i + j], &p);
            }
        }
    }
    for k in (n..2 * n - 1).rev() {
        let h = std::mem::take(&mut prod[k]);
        if is_zero_slice(&h) {
            continue;
        }
        for (s, m) in t.modulus_int.iter().enumerate() {
            if is_zero_slice(m) {
                continue;
            }
            if bd == 1 {
                let x = &h[0] * &m[0];
                prod[k - n + s][0] -= x;
            } else {
                let x = mul_int(base, &h, m);
                sub_into(&mut prod[k - n + s], &x);
            }
        }
    }
    prod.truncate(n);
    prod.concat()
}

type Scaled = (Vec<BigInt>, BigInt);

fn acc_scaled(acc: &mut Scaled, v: &[BigInt], d: &BigInt, negate: bool) {
    if acc.1 == *d {
        if negate {
            sub_into(&mut acc.0, v);
        } else {
            add_into(&mut acc.0, v);
        }
        return;
    }
    let l = acc.1.lcm(d);
    let fa = &l / &acc.1;
    let fv = &l / d;
    for (a, x) in acc.0.iter_mut().zip(v) {
        *a = &*a * &fa + if negate { -(x * &fv) } else { x * &fv };
    }
    acc.1 = l;
}

/// Product of integer coordinate vectors in a general rational tower; the
/// result carries its own denominator.
fn mul_scaled(t: &Level, a: &[BigInt], b: &[BigInt]) -> Scaled {
    if t.depth == 0 {
        return (vec![&a[0] * &b[0]], BigInt::one());
    }
    let base = &t.base.as_ref().unwrap().0;
    let bd = base.abs_degree;
    let n = t.degree;
    let mut prod: Vec<Scaled> = vec![(vec![BigInt::zero(); bd], BigInt::one()); 2 * n - 1];
    for i in 0..n {
        let ai = &a[i * bd..(i + 1) * bd];
        if is_zero_slice(ai) {
            continue;
        }
        for j in 0..n {
            let bj = &b[j * bd..(j + 1) * bd];
            if is_zero_slice(bj) {
                continue;
            }
            let (p, d) = mul_scaled(base, ai, bj);
            acc_scaled(&mut prod[i + j], &p, &d, false);
        }
    }
    for k in (n..2 * n - 1).rev() {
        let (h, hd) = std::mem::take(&mut prod[k]);
        if is_zero_slice(&h) {
            continue;
        }
        for (s, (mn, md)) in t.modulus_scaled.iter().enumerate() {
            if is_zero_slice(mn) {
                continue;
            }
            let (x, xd) = mul_scaled(base, &h, mn);
            let d = xd * &hd * md;
            acc_scaled(&mut prod[k - n + s], &x, &d, true);
        }
    }
    prod.truncate(n);
    let mut l = BigInt::one();
    for (_, d) in &prod {
        l = l.lcm(d);
    }
    let mut num = Vec::with_capacity(n * bd);
    for (v, d) in prod {
        let f = &l / &d;
        num.extend(v.into_iter().map(|x| x * &f));
    }
    normalize(&mut num, &mut l);
    (num, l)
}

fn mul_mod(t: &Level, a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if t.depth == 0 {
        return vec![a[0] * b[0] % p];
    }
    let base = &t.base.as_ref().unwrap().0;
    let bd = base.abs_degree;
    let n = t.degree;
    let mut prod = vec![vec![0u64; bd]; 2 * n - 1];
    for i in 0..n {
        let ai = &a[i * bd..(i + 1) * bd];
        if ai.iter().all(|&x| x == 0) {
            continue;
        }
        for j in 0..n {
            let bj = &b[j * bd..(j + 1) * bd];
            if bj.iter().all(|&x| x == 0) {
                continue;
            }
            let x = mul_mod(base, ai, bj, p);
            for (c, y) in prod[i + j].iter_mut().zip(x) {
                *c = (*c + y) % p;
            }
        }
    }
    for k in (n..2 * n - 1).rev() {
        let h = std::mem::take(&mut prod[k]);
        if h.iter().all(|&x| x == 0) {
            continue;
        }
        for (s, m) in t.modulus_mod.iter().enumerate() {
            if m.iter().all(|&x| x == 0) {
                continue;
            }
            let x = mul_mod(base, &h, m, p);
            for (c, y) in prod[k - n + s].iter_mut().zip(x) {
                *c = (*c + p - y) % p;
            }
        }
    }
    prod.truncate(n);
    prod.concat()
}

impl FieldElement {
    pub fn zero(field: &FieldTower) -> Self {
        let n = field.absolute_degree();
        let coords = match field.prime() {
            PrimeField::Rationals => Coords::Q { num: vec![BigInt::zero(); n], den: BigInt::one() },
            PrimeField::Modular(_) => Coords::P(vec![0; n]),
        };
        FieldElement { field: field.clone(), coords }
    }

    pub fn one(field: &FieldTower) -> Self {
        Self::unit_vector(field, 0)
    }

    pub(crate) fn unit_vector(field: &FieldTower, i: usize) -> Self {
        let mut e = Self::zero(field);
        match &mut e.coords {
            Coords::Q { num, .. } => num[i] = BigInt::one(),
            Coords::P(v) => v[i] = 1,
        }
        e
    }

    pub fn from_int(field: &FieldTower, n: i64) -> Self {
        Self::from_bigint(field, &BigInt::from(n))
    }

    pub fn from_bigint(field: &FieldTower, n: &BigInt) -> Self {
        Self::from_rational(field, &BigRational::from_integer(n.clone()))
    }

    pub fn from_rational(field: &FieldTower, r: &BigRational) -> Self {
        let mut e = Self::zero(field);
        match &mut e.coords {
            Coords::Q { num, den } => {
                num[0] = r.numer().clone();
                *den = r.denom().clone();
                normalize(num, den);
            }
            Coords::P(v) => {
                let p = field.characteristic();
                let n = modp::reduce_bigint(r.numer(), p);
                let d = modp::reduce_bigint(r.denom(), p);
                v[0] = n * modp::inv(d, p).expect("denominator divisible by the characteristic") % p;
            }
        }
        e
    }

    /// Element with the given flat rational coordinates (missing ones are 0).
    pub fn from_rational_coords(field: &FieldTower, coords: &[BigRational]) -> Result<Self> {
        if coords.len() > field.absolute_degree() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for a field of degree {}",
                coords.len(),
                field.absolute_degree()
            )));
        }
        match field.prime() {
            PrimeField::Rationals => {
                let mut den = BigInt::one();
                for c in coords {
                    den = den.lcm(c.denom());
                }
                let mut num: Vec<BigInt> = coords.iter().map(|c| c.numer() * (&den / c.denom())).collect();
                num.resize(field.absolute_degree(), BigInt::zero());
                normalize(&mut num, &mut den);
                Ok(FieldElement { field: field.clone(), coords: Coords::Q { num, den } })
            }
            PrimeField::Modular(p) => {
                let mut v = Vec::with_capacity(field.absolute_degree());
                for c in coords {
                    let d = modp::reduce_bigint(c.denom(), p);
                    let d = modp::inv(d, p)
                        .ok_or_else(|| Error::Unsupported("denominator divisible by the characteristic".into()))?;
                    v.push(modp::reduce_bigint(c.numer(), p) * d % p);
                }
                v.resize(field.absolute_degree(), 0);
                Ok(FieldElement { field: field.clone(), coords: Coords::P(v) })
            }
        }
    }

    pub fn from_int_coords(field: &FieldTower, coords: &[i64]) -> Self {
        let r: Vec<BigRational> = coords.iter().map(|&c| BigRational::from_integer(c.into())).collect();
        Self::from_rational_coords(field, &r).expect("too many coordinates")
    }

    /// Element whose coordinates over the base are `blocks`.
    pub fn from_blocks(field: &FieldTower, blocks: &[FieldElement]) -> Result<Self> {
        let base = field.base().ok_or(Error::FieldMismatch)?;
        if blocks.len() > field.degree() {
            return Err(Error::DimensionMismatch("too many blocks".into()));
        }
        if blocks.iter().any(|b| b.field != *base) {
            return Err(Error::FieldMismatch);
        }
        let mut e = Self::zero(field);
        let bd = base.absolute_degree();
        match &mut e.coords {
            Coords::Q { num, den } => {
                let mut l = BigInt::one();
                for b in blocks {
                    if let Coords::Q { den: d, .. } = &b.coords {
                        l = l.lcm(d);
                    }
                }
                for (i, b) in blocks.iter().enumerate() {
                    if let Coords::Q { num: bn, den: d } = &b.coords {
                        let f = &l / d;
                        for (k, x) in bn.iter().enumerate() {
                            num[i * bd + k] = x * &f;
                        }
                    }
                }
                *den = l;
                normalize(num, den);
            }
            Coords::P(v) => {
                for (i, b) in blocks.iter().enumerate() {
                    if let Coords::P(bv) = &b.coords {
                        v[i * bd..(i + 1) * bd].copy_from_slice(bv);
                    }
                }
            }
        }
        Ok(e)
    }

    pub fn generator(field: &FieldTower) -> Self {
        match field.base() {
            None => Self::one(field),
            Some(base) if field.degree() == 1 => {
                let c = -&field.0.modulus[0];
                FieldElement { field: field.clone(), coords: c.coords }.with_len(base.absolute_degree())
            }
            Some(base) => Self::unit_vector(field, base.absolute_degree()),
        }
    }

    fn with_len(mut self, n: usize) -> Self {
        match &mut self.coords {
            Coords::Q { num, .. } => num.resize(n, BigInt::zero()),
            Coords::P(v) => v.resize(n, 0),
        }
        self
    }

    /// Enumerates a finite field: the base-`p` digits of `idx` are the flat coordinates.
    pub fn from_index(field: &FieldTower, idx: u128) -> Self {
        let p = field.characteristic() as u128;
        assert!(p > 0, "indexing needs a finite field");
        let mut rest = idx;
        let mut v = Vec::with_capacity(field.absolute_degree());
        for _ in 0..field.absolute_degree() {
            v.push((rest % p) as u64);
            rest /= p;
        }
        FieldElement { field: field.clone(), coords: Coords::P(v) }
    }

    /// Inverse of [`FieldElement::from_index`].
    pub fn to_index(&self) -> Option<u128> {
        let p = self.field.characteristic() as u128;
        match &self.coords {
            Coords::P(v) => Some(v.iter().rev().fold(0u128, |acc, &x| acc * p + x as u128)),
            Coords::Q { .. } => None,
        }
    }

    pub fn field(&self) -> &FieldTower {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.coords {
            Coords::Q { num, .. } => is_zero_slice(num),
            Coords::P(v) => v.iter().all(|&x| x == 0),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.coords {
            Coords::Q { num, den } => den.is_one() && num[0].is_one() && is_zero_slice(&num[1..]),
            Coords::P(v) => v[0] == 1 && v[1..].iter().all(|&x| x == 0),
        }
    }

    /// Flat coordinates as rationals (`None` over a finite field).
    pub fn rational_coords(&self) -> Option<Vec<BigRational>> {
        match &self.coords {
            Coords::Q { num, den } => Some(num.iter().map(|x| BigRational::new(x.clone(), den.clone())).collect()),
            Coords::P(_) => None,
        }
    }

    /// Flat coordinates in `0..p` (`None` over the rationals).
    pub fn modular_coords(&self) -> Option<&[u64]> {
        match &self.coords {
            Coords::P(v) => Some(v),
            Coords::Q { .. } => None,
        }
    }

    /// Integer numerators and common denominator (rational fields only).
    pub fn integer_coords(&self) -> Option<(&[BigInt], &BigInt)> {
        match &self.coords {
            Coords::Q { num, den } => Some((num, den)),
            Coords::P(_) => None,
        }
    }

    /// The single prime-field coordinate, if the element lies in the prime field.
    pub fn as_rational(&self) -> Option<BigRational> {
        match &self.coords {
            Coords::Q { num, den } if is_zero_slice(&num[1..]) => Some(BigRational::new(num[0].clone(), den.clone())),
            _ => None,
        }
    }

    /// Total bit size of the coordinates; used to prefer small pivots and candidates.
    pub fn height(&self) -> u64 {
        match &self.coords {
            Coords::Q { num, den } => num.iter().map(|x| x.bits()).sum::<u64>() + den.bits(),
            Coords::P(v) => v.iter().filter(|&&x| x != 0).count() as u64,
        }
    }

    /// Coordinates over the immediate base.
    pub fn blocks(&self) -> Vec<FieldElement> {
        let base = self.field.base().expect("prime field element has no blocks");
        let bd = base.absolute_degree();
        (0..self.field.degree()).map(|i| self.slice(base, i * bd)).collect()
    }

    /// Coordinates over a level of the tower, in block order.
    pub fn coords_over(&self, sub: &FieldTower) -> Vec<FieldElement> {
        assert!(self.field.contains(sub), "not a level of this tower");
        let n = sub.absolute_degree();
        (0..self.field.absolute_degree() / n).map(|i| self.slice(sub, i * n)).collect()
    }

    /// Inverse of [`FieldElement::coords_over`].
    pub fn from_coords_over(field: &FieldTower, sub: &FieldTower, coords: &[FieldElement]) -> Result<Self> {
        if !field.contains(sub) || coords.iter().any(|c| c.field != *sub) {
            return Err(Error::FieldMismatch);
        }
        let n = sub.absolute_degree();
        if coords.len() * n > field.absolute_degree() {
            return Err(Error::DimensionMismatch("too many coordinates".into()));
        }
        let mut acc = Self::zero(field);
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let shifted = FieldElement { field: field.clone(), coords: c.coords.clone() }.shifted(i * n, field);
            acc = &acc + &shifted;
        }
        Ok(acc)
    }

    fn shifted(self, offset: usize, field: &FieldTower) -> FieldElement {
        let total = field.absolute_degree();
        let coords = match self.coords {
            Coords::Q { num, den } => {
                let mut v = vec![BigInt::zero(); total];
                for (i, x) in num.into_iter().enumerate() {
                    if offset + i < total {
                        v[offset + i] = x;
                    }
                }
                Coords::Q { num: v, den }
            }
            Coords::P(p) => {
                let mut v = vec![0; total];
                for (i, x) in p.into_iter().enumerate() {
                    if offset + i < total {
                        v[offset + i] = x;
                    }
                }
                Coords::P(v)
            }
        };
        FieldElement { field: field.clone(), coords }
    }

    fn slice(&self, sub: &FieldTower, start: usize) -> FieldElement {
        let n = sub.absolute_degree();
        let coords = match &self.coords {
            Coords::Q { num, den } => {
                let mut num = num[start..start + n].to_vec();
                let mut den = den.clone();
                normalize(&mut num, &mut den);
                Coords::Q { num, den }
            }
            Coords::P(v) => Coords::P(v[start..start + n].to_vec()),
        };
        FieldElement { field: sub.clone(), coords }
    }

    /// Embeds into a tower that has `self.field()` as one of its levels.
    pub fn lift(&self, target: &FieldTower) -> FieldElement {
        self.try_lift(target).expect("target does not contain the element's field")
    }

    pub fn try_lift(&self, target: &FieldTower) -> Result<FieldElement> {
        if !target.contains(&self.field) {
            return Err(Error::FieldMismatch);
        }
        let n = target.absolute_degree();
        Ok(FieldElement { field: target.clone(), coords: self.coords.clone() }.with_len(n))
    }

    /// Restricts to a level of the tower if the element lies in it.
    pub fn lower(&self, sub: &FieldTower) -> Option<FieldElement> {
        if !self.field.contains(sub) {
            return None;
        }
        let n = sub.absolute_degree();
        let fits = match &self.coords {
            Coords::Q { num, .. } => is_zero_slice(&num[n..]),
            Coords::P(v) => v[n..].iter().all(|&x| x == 0),
        };
        fits.then(|| self.slice(sub, 0))
    }

    fn check_same(&self, other: &FieldElement) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn combine(&self, other: &FieldElement, negate: bool) -> FieldElement {
        let coords = match (&self.coords, &other.coords) {
            (Coords::Q { num: a, den: da }, Coords::Q { num: b, den: db }) => {
                let (mut num, mut den) = if da == db {
                    let num = a.iter().zip(b).map(|(x, y)| if negate { x - y } else { x + y }).collect::<Vec<_>>();
                    (num, da.clone())
                } else {
                    let num = a
                        .iter()
                        .zip(b)
                        .map(|(x, y)| {
                            let (l, r) = (x * db, y * da);
                            if negate {
                                l - r
                            } else {
                                l + r
                            }
                        })
                        .collect::<Vec<_>>();
                    (num, da * db)
                };
                normalize(&mut num, &mut den);
                Coords::Q { num, den }
            }
            (Coords::P(a), Coords::P(b)) => {
                let p = self.field.characteristic();
                Coords::P(a.iter().zip(b).map(|(&x, &y)| if negate { (x + p - y) % p } else { (x + y) % p }).collect())
            }
            _ => unreachable!("coordinate kinds differ within one field"),
        };
        FieldElement { field: self.field.clone(), coords }
    }

    pub fn checked_add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_same(other)?;
        Ok(self.combine(other, false))
    }

    pub fn checked_sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_same(other)?;
        Ok(self.combine(other, true))
    }

    pub fn checked_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_same(other)?;
        let level = &self.field.0;
        let coords = match (&self.coords, &other.coords) {
            (Coords::Q { num: a, den: da }, Coords::Q { num: b, den: db }) => {
                if is_zero_slice(a) || is_zero_slice(b) {
                    return Ok(FieldElement::zero(&self.field));
                }
                let (mut num, mut den) = if level.integral {
                    (mul_int(level, a, b), da * db)
                } else {
                    let (n, d) = mul_scaled(level, a, b);
                    (n, d * da * db)
                };
                normalize(&mut num, &mut den);
                Coords::Q { num, den }
            }
            (Coords::P(a), Coords::P(b)) => Coords::P(mul_mod(level, a, b, self.field.characteristic())),
            _ => unreachable!("coordinate kinds differ within one field"),
        };
        Ok(FieldElement { field: self.field.clone(), coords })
    }

    pub fn checked_div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_same(other)?;
        self.checked_mul(&other.inverse()?)
    }

    /// Multiplicative inverse, by the extended Euclidean algorithm level by level.
    pub fn inverse(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::ZeroDivisor(Box::new(self.clone())));
        }
        let Some(base) = self.field.base() else {
            let coords = match &self.coords {
                Coords::Q { num, den } => {
                    let mut n = vec![den.clone()];
                    let mut d = num[0].clone();
                    normalize(&mut n, &mut d);
                    Coords::Q { num: n, den: d }
                }
                Coords::P(v) => {
                    let p = self.field.characteristic();
                    Coords::P(vec![modp::inv(v[0], p).expect("nonzero residue")])
                }
            };
            return Ok(FieldElement { field: self.field.clone(), coords });
        };
        if self.field.degree() == 1 {
            let b = self.blocks().remove(0).inverse()?;
            return FieldElement::from_blocks(&self.field, &[b]);
        }
        let a = Poly::new(base, self.blocks());
        let m = self.field.modulus();
        let (g, s, _) = a.ext_gcd(&m).map_err(|e| match e {
            Error::ZeroDivisor(_) => Error::ZeroDivisor(Box::new(self.clone())),
            e => e,
        })?;
        if g.degree() != Some(0) {
            return Err(Error::ZeroDivisor(Box::new(self.clone())));
        }
        let c = g.coeffs()[0].inverse()?;
        let s = s.scale(&c);
        let mut blocks = s.coeffs().to_vec();
        blocks.resize(self.field.degree(), base.zero());
        FieldElement::from_blocks(&self.field, &blocks)
    }

    pub fn pow(&self, mut e: u128) -> FieldElement {
        let mut result = FieldElement::one(&self.field);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        result
    }

    /// Signed power; negative exponents need an invertible element.
    pub fn powi(&self, e: i64) -> Result<FieldElement> {
        if e >= 0 {
            Ok(self.pow(e as u128))
        } else {
            Ok(self.inverse()?.pow(e.unsigned_abs() as u128))
        }
    }

    pub fn scale_int(&self, k: i64) -> FieldElement {
        self * &FieldElement::from_int(&self.field, k)
    }

    fn fmt_level(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.depth() == 0 {
            return match &self.coords {
                Coords::Q { num, den } if den.is_one() => write!(f, "{}", num[0]),
                Coords::Q { num, den } => write!(f, "{}/{}", num[0], den),
                Coords::P(v) => write!(f, "{}", v[0]),
            };
        }
        if self.field.degree() == 1 {
            return self.blocks()[0].fmt_level(f);
        }
        let label = self.field.label();
        let mut terms: Vec<String> = Vec::new();
        for (i, b) in self.blocks().iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let s = b.to_string();
            let mono = match i {
                0 => String::new(),
                1 => label.to_string(),
                _ => format!("{label}^{i}"),
            };
            let simple = !s[1..].contains([' ', '+']);
            terms.push(if mono.is_empty() {
                s
            } else if b.is_one() {
                mono
            } else if s == "-1" {
                format!("-{mono}")
            } else if simple {
                format!("{s}*{mono}")
            } else {
                format!("({s})*{mono}")
            });
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = terms[0].clone();
        for t in &terms[1..] {
            if let Some(rest) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
        write!(f, "{out}")
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && self.field == other.field
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_level(f)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.field.label())
    }
}

// Operator forms panic on a field mismatch; the checked_* methods report it.
impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &'a FieldElement) -> FieldElement {
        self.checked_add(rhs).expect("field mismatch in addition")
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &'a FieldElement) -> FieldElement {
        self.checked_sub(rhs).expect("field mismatch in subtraction")
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &'a FieldElement) -> FieldElement {
        self.checked_mul(rhs).expect("field mismatch in multiplication")
    }
}

impl<'a> Div<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    /// Panics on division by zero.
    fn div(self, rhs: &'a FieldElement) -> FieldElement {
        self.checked_div(rhs).expect("division by zero or field mismatch")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::zero(&self.field).combine(self, true)
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// Reduces a rational to a residue mod `p`, if its denominator is a unit.
pub(crate) fn rational_mod(r: &BigRational, p: u64) -> Option<u64> {
    let d = modp::inv(modp::reduce_bigint(r.denom(), p), p)?;
    Some(modp::reduce_bigint(r.numer(), p) * d % p)
}
