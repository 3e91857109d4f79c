use std::fmt;

use super::element::FieldElement;
use super::poly::Poly;
use super::tower::FieldTower;
use crate::{Error, Result};

/// A ring homomorphism between towers with the same prime field, given by
/// the images of the generators of every level of the domain. Despite the
/// name it also covers embeddings (`domain != codomain`).
#[derive(Clone)]
pub struct Automorphism {
    domain: FieldTower,
    codomain: FieldTower,
    images: Vec<FieldElement>,
    powers: Vec<Vec<FieldElement>>,
    /// `literal[d]`: levels `0..=d` map by coordinate inclusion.
    literal: Vec<bool>,
    /// `gen_literal[d]`: level `d` of the codomain equals level `d` of the
    /// domain and the generator maps to itself.
    gen_literal: Vec<bool>,
}

impl Automorphism {
    /// Validates the images against every defining polynomial.
    pub fn new(domain: &FieldTower, codomain: &FieldTower, images: Vec<FieldElement>) -> Result<Self> {
        if domain.prime() != codomain.prime() {
            return Err(Error::FieldMismatch);
        }
        if images.len() != domain.depth() {
            return Err(Error::DimensionMismatch(format!(
                "{} generator images for a tower of depth {}",
                images.len(),
                domain.depth()
            )));
        }
        if images.iter().any(|x| x.field() != codomain) {
            return Err(Error::FieldMismatch);
        }
        let m = Self::build(domain, codomain, images);
        for d in 1..=domain.depth() {
            let level = domain.level(d);
            let f = level.modulus();
            let img = &m.images[d - 1];
            let mut acc = codomain.zero();
            for c in f.coeffs().iter().rev() {
                acc = &(&acc * img) + &m.apply_level(d - 1, c);
            }
            if !acc.is_zero() {
                return Err(Error::InconsistentImages);
            }
        }
        Ok(m)
    }

    fn build(domain: &FieldTower, codomain: &FieldTower, images: Vec<FieldElement>) -> Self {
        let depth = domain.depth();
        let mut gen_literal = vec![true];
        let mut literal = vec![true];
        for d in 1..=depth {
            let g = d <= codomain.depth()
                && codomain.level(d) == domain.level(d)
                && images[d - 1] == codomain.level_generator(d);
            gen_literal.push(g);
            literal.push(literal[d - 1] && g);
        }
        let powers = (1..=depth)
            .map(|d| {
                let n = domain.level(d).degree();
                let mut p = vec![codomain.one()];
                for i in 1..n {
                    let next = &p[i - 1] * &images[d - 1];
                    p.push(next);
                }
                p
            })
            .collect();
        Automorphism { domain: domain.clone(), codomain: codomain.clone(), images, powers, literal, gen_literal }
    }

    pub fn identity(field: &FieldTower) -> Self {
        let images = (1..=field.depth()).map(|d| field.level_generator(d)).collect();
        Self::build(field, field, images)
    }

    /// Endomorphism of `field` that moves only the top generator.
    pub fn top_level(field: &FieldTower, image: FieldElement) -> Result<Self> {
        let mut images: Vec<FieldElement> = (1..field.depth()).map(|d| field.level_generator(d)).collect();
        images.push(image);
        Self::new(field, field, images)
    }

    /// `x -> x^q` on a finite field, `q` the order of `fixed` (a level of `field`).
    pub fn frobenius(field: &FieldTower, fixed: &FieldTower) -> Result<Self> {
        if !field.contains(fixed) {
            return Err(Error::FieldMismatch);
        }
        let q = fixed.order().ok_or_else(|| Error::Unsupported("Frobenius of an infinite field".into()))?;
        let images = (1..=field.depth())
            .map(|d| {
                let g = field.level_generator(d);
                if d <= fixed.depth() {
                    g
                } else {
                    g.pow(q)
                }
            })
            .collect();
        Self::new(field, field, images)
    }

    pub fn domain(&self) -> &FieldTower {
        &self.domain
    }

    pub fn codomain(&self) -> &FieldTower {
        &self.codomain
    }

    /// Image of the generator of level `d` (1-based depth).
    pub fn image(&self, d: usize) -> &FieldElement {
        &self.images[d - 1]
    }

    pub fn images(&self) -> &[FieldElement] {
        &self.images
    }

    /// Image of the top generator.
    pub fn top_image(&self) -> &FieldElement {
        self.images.last().expect("map on a prime field")
    }

    pub fn is_identity(&self) -> bool {
        self.domain == self.codomain && self.literal[self.domain.depth()]
    }

    /// True if the map is the inclusion on the given level of the domain.
    pub fn fixes(&self, level: &FieldTower) -> bool {
        self.domain.contains(level) && self.literal[level.depth()]
    }

    fn apply_level(&self, d: usize, x: &FieldElement) -> FieldElement {
        if self.literal[d] {
            return x.lift(&self.codomain);
        }
        let blocks = x.blocks();
        let mapped: Vec<FieldElement> = blocks.iter().map(|b| self.apply_level(d - 1, b)).collect();
        if self.gen_literal[d] {
            let below = self.codomain.level(d - 1);
            let lowered: Option<Vec<FieldElement>> = mapped.iter().map(|m| m.lower(&below)).collect();
            if let Some(lowered) = lowered {
                return FieldElement::from_blocks(&self.codomain.level(d), &lowered)
                    .expect("block count matches")
                    .lift(&self.codomain);
            }
        }
        let mut acc = self.codomain.zero();
        for (m, p) in mapped.iter().zip(&self.powers[d - 1]) {
            if !m.is_zero() {
                acc = &acc + &(m * p);
            }
        }
        acc
    }

    /// Applies the map; elements of a lower level of the domain are accepted.
    pub fn apply(&self, x: &FieldElement) -> Result<FieldElement> {
        if !self.domain.contains(x.field()) {
            return Err(Error::FieldMismatch);
        }
        Ok(self.apply_level(x.field().depth(), x))
    }

    /// Convenience form of [`Automorphism::apply`] for elements known to fit.
    pub fn on(&self, x: &FieldElement) -> FieldElement {
        self.apply(x).expect("element outside the domain")
    }

    pub fn apply_poly(&self, f: &Poly) -> Poly {
        f.map_coeffs(&self.codomain, |c| self.on(c))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Automorphism) -> Result<Automorphism> {
        if inner.codomain != self.domain {
            return Err(Error::FieldMismatch);
        }
        let images = inner.images.iter().map(|x| self.on(x)).collect();
        Ok(Self::build(&inner.domain, &self.codomain, images))
    }

    pub fn pow(&self, k: usize) -> Automorphism {
        assert!(self.domain == self.codomain, "power of a non-endomorphism");
        let mut result = Automorphism::identity(&self.domain);
        for _ in 0..k {
            result = self.compose(&result).unwrap();
        }
        result
    }

    /// Order in the automorphism group, or `None` if not an automorphism.
    pub fn order(&self) -> Option<usize> {
        if self.domain != self.codomain {
            return None;
        }
        let mut cur = self.clone();
        for k in 1..=self.domain.absolute_degree() {
            if cur.is_identity() {
                return Some(k);
            }
            cur = self.compose(&cur).unwrap();
        }
        None
    }

    pub fn inverse(&self) -> Result<Automorphism> {
        let n = self.order().ok_or(Error::NotGenerator)?;
        Ok(self.pow(n - 1))
    }

    /// Restriction to a level of the domain that the map sends into the
    /// same level of the codomain.
    pub fn restrict(&self, level: &FieldTower) -> Option<Automorphism> {
        if !self.domain.contains(level) || !self.codomain.contains(level) {
            return None;
        }
        let images: Option<Vec<FieldElement>> = self.images[..level.depth()].iter().map(|x| x.lower(level)).collect();
        Some(Self::build(level, level, images?))
    }

    pub fn same_as(&self, other: &Automorphism) -> bool {
        self.domain == other.domain && self.codomain == other.codomain && self.images == other.images
    }
}

impl PartialEq for Automorphism {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (1..=self.domain.depth())
            .filter(|&d| !self.gen_literal[d])
            .map(|d| format!("{} -> {}", self.domain.level(d).label(), self.images[d - 1]))
            .collect();
        if parts.is_empty() {
            write!(f, "id")
        } else {
            write!(f, "{}", parts.join(", "))
        }
    }
}
