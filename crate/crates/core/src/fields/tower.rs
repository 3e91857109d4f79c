use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use super::element::{Coords, FieldElement};
use super::modp;
use super::poly::Poly;
use crate::{Error, Result};

/// Prime field at the bottom of a tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PrimeField {
    Rationals,
    /// `F_p`; `p` must be below `2^31` so products fit in a `u64`.
    Modular(u64),
}

pub(crate) struct Level {
    pub(crate) prime: PrimeField,
    pub(crate) label: String,
    pub(crate) base: Option<FieldTower>,
    pub(crate) degree: usize,
    pub(crate) abs_degree: usize,
    pub(crate) depth: usize,
    /// Low coefficients `c_0..c_{n-1}` of the monic modulus, in the base.
    pub(crate) modulus: Vec<FieldElement>,
    /// Every modulus down the tower has integer coordinates.
    pub(crate) integral: bool,
    pub(crate) modulus_int: Vec<Vec<BigInt>>,
    pub(crate) modulus_scaled: Vec<(Vec<BigInt>, BigInt)>,
    pub(crate) modulus_mod: Vec<Vec<u64>>,
}

/// A field given as a chain of simple extensions `k = T_0 < T_1 < ... < T_d`,
/// each `T_i = T_{i-1}[x]/(f_i)` for a monic `f_i` that the caller asserts to
/// be irreducible. Cloning is cheap.
#[derive(Clone)]
pub struct FieldTower(pub(crate) Arc<Level>);

impl FieldTower {
    pub fn rationals() -> FieldTower {
        FieldTower(Arc::new(Level {
            prime: PrimeField::Rationals,
            label: "Q".into(),
            base: None,
            degree: 1,
            abs_degree: 1,
            depth: 0,
            modulus: Vec::new(),
            integral: true,
            modulus_int: Vec::new(),
            modulus_scaled: Vec::new(),
            modulus_mod: Vec::new(),
        }))
    }

    pub fn prime_field(p: u64) -> Result<FieldTower> {
        if p >= 1 << 31 || !modp::is_prime(p) {
            return Err(Error::Unsupported(format!("{p} is not a supported prime")));
        }
        Ok(FieldTower(Arc::new(Level {
            prime: PrimeField::Modular(p),
            label: format!("GF({p})"),
            base: None,
            degree: 1,
            abs_degree: 1,
            depth: 0,
            modulus: Vec::new(),
            integral: true,
            modulus_int: Vec::new(),
            modulus_scaled: Vec::new(),
            modulus_mod: Vec::new(),
        })))
    }

    /// Adjoins a root of the monic polynomial with ascending `coeffs` (leading
    /// coefficient included). A degree-1 polynomial gives a relabeled copy of
    /// the base whose generator is the root.
    pub fn extension(base: &FieldTower, coeffs: &[FieldElement], label: &str) -> Result<FieldTower> {
        let mut coeffs: Vec<FieldElement> = coeffs.to_vec();
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::EmptyPolynomial);
        }
        if coeffs.iter().any(|c| c.field() != base) {
            return Err(Error::FieldMismatch);
        }
        if !coeffs.last().unwrap().is_one() {
            return Err(Error::NonMonic);
        }
        let degree = coeffs.len() - 1;
        if degree == 0 {
            return Err(Error::DegreeMismatch("constant defining polynomial".into()));
        }
        coeffs.pop();
        let prime = base.prime();
        let mut integral = base.0.integral;
        let mut modulus_int = Vec::new();
        let mut modulus_scaled = Vec::new();
        let mut modulus_mod = Vec::new();
        for c in &coeffs {
            match &c.coords {
                Coords::Q { num, den } => {
                    if !den.is_one() {
                        integral = false;
                    }
                    modulus_int.push(num.clone());
                    modulus_scaled.push((num.clone(), den.clone()));
                }
                Coords::P(v) => modulus_mod.push(v.clone()),
            }
        }
        if !integral {
            modulus_int.clear();
        }
        Ok(FieldTower(Arc::new(Level {
            prime,
            label: label.to_string(),
            base: Some(base.clone()),
            degree,
            abs_degree: degree * base.absolute_degree(),
            depth: base.depth() + 1,
            modulus: coeffs,
            integral,
            modulus_int,
            modulus_scaled,
            modulus_mod,
        })))
    }

    /// Same as [`FieldTower::extension`] with a polynomial argument.
    pub fn extension_by(base: &FieldTower, poly: &Poly, label: &str) -> Result<FieldTower> {
        if poly.field() != base {
            return Err(Error::FieldMismatch);
        }
        Self::extension(base, poly.coeffs(), label)
    }

    /// `GF(p^k)` as a single level over `GF(p)`.
    pub fn finite_field(p: u64, k: usize, label: &str) -> Result<FieldTower> {
        let base = Self::prime_field(p)?;
        if k == 1 {
            return Ok(base);
        }
        Self::finite_extension(&base, k, label)
    }

    /// Extends a finite field by the first monic irreducible polynomial of
    /// degree `k` in enumeration order.
    pub fn finite_extension(base: &FieldTower, k: usize, label: &str) -> Result<FieldTower> {
        let q = base.order().ok_or_else(|| Error::Unsupported("finite extension of an infinite field".into()))?;
        if k == 0 {
            return Err(Error::DegreeMismatch("degree 0".into()));
        }
        let total = q.checked_pow(k as u32).ok_or_else(|| Error::Unsupported("field too large".into()))?;
        for idx in 0..total {
            let mut coeffs: Vec<FieldElement> = Vec::with_capacity(k + 1);
            let mut rest = idx;
            for _ in 0..k {
                coeffs.push(FieldElement::from_index(base, rest % q));
                rest /= q;
            }
            if coeffs[0].is_zero() && k > 1 {
                continue;
            }
            coeffs.push(base.one());
            let f = Poly::new(base, coeffs.clone());
            if f.is_irreducible_finite()? {
                return Self::extension(base, &coeffs, label);
            }
        }
        Err(Error::Unsupported("no irreducible polynomial found".into()))
    }

    pub fn prime(&self) -> PrimeField {
        self.0.prime
    }

    pub fn characteristic(&self) -> u64 {
        match self.0.prime {
            PrimeField::Rationals => 0,
            PrimeField::Modular(p) => p,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.characteristic() != 0
    }

    /// Number of elements, if finite and representable.
    pub fn order(&self) -> Option<u128> {
        match self.0.prime {
            PrimeField::Rationals => None,
            PrimeField::Modular(p) => (p as u128).checked_pow(self.0.abs_degree as u32),
        }
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    /// Degree over the immediate base (1 for a prime field).
    pub fn degree(&self) -> usize {
        self.0.degree
    }

    /// Degree over the prime field.
    pub fn absolute_degree(&self) -> usize {
        self.0.abs_degree
    }

    /// Number of extension levels above the prime field.
    pub fn depth(&self) -> usize {
        self.0.depth
    }

    pub fn base(&self) -> Option<&FieldTower> {
        self.0.base.as_ref()
    }

    /// The sub-tower at the given depth (0 is the prime field).
    pub fn level(&self, depth: usize) -> FieldTower {
        assert!(depth <= self.depth(), "level {depth} above the top of the tower");
        let mut t = self.clone();
        while t.depth() > depth {
            t = t.base().unwrap().clone();
        }
        t
    }

    /// All levels from the prime field up to `self`.
    pub fn levels(&self) -> Vec<FieldTower> {
        (0..=self.depth()).map(|d| self.level(d)).collect()
    }

    /// The monic defining polynomial over the base.
    pub fn modulus(&self) -> Poly {
        let base = self.base().expect("prime field has no modulus");
        let mut c = self.0.modulus.clone();
        c.push(base.one());
        Poly::new(base, c)
    }

    /// True if `sub` is one of the levels of `self`.
    pub fn contains(&self, sub: &FieldTower) -> bool {
        sub.depth() <= self.depth() && self.level(sub.depth()) == *sub
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::zero(self)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::one(self)
    }

    pub fn int(&self, n: i64) -> FieldElement {
        FieldElement::from_int(self, n)
    }

    /// The adjoined root of the top level.
    pub fn generator(&self) -> FieldElement {
        FieldElement::generator(self)
    }

    /// Generator of the level at `depth`, lifted to `self`.
    pub fn level_generator(&self, depth: usize) -> FieldElement {
        self.level(depth).generator().lift(self)
    }

    /// The power basis over the prime field, in coordinate order.
    pub fn flat_basis(&self) -> Vec<FieldElement> {
        (0..self.absolute_degree()).map(|i| FieldElement::unit_vector(self, i)).collect()
    }

    /// Basis of `self` over its level at `depth`, as products of powers of
    /// the intermediate generators, in coordinate-block order.
    pub fn relative_basis(&self, depth: usize) -> Vec<FieldElement> {
        let sub = self.level(depth).absolute_degree();
        (0..self.absolute_degree() / sub).map(|i| FieldElement::unit_vector(self, i * sub)).collect()
    }

    fn structurally_equal(&self, other: &FieldTower) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        let (a, b) = (&self.0, &other.0);
        if a.prime != b.prime || a.depth != b.depth || a.degree != b.degree {
            return false;
        }
        match (&a.base, &b.base) {
            (None, None) => true,
            (Some(x), Some(y)) => {
                x.structurally_equal(y) && a.modulus.iter().zip(&b.modulus).all(|(c, d)| c.coords == d.coords)
            }
            _ => false,
        }
    }
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        self.structurally_equal(other)
    }
}

impl Eq for FieldTower {}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.levels().iter().map(|l| l.label().to_string()).collect();
        write!(f, "{}", names.join(" < "))
    }
}

impl fmt::Display for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}
