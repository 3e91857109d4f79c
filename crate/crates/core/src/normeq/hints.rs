use std::collections::HashMap;
use std::fmt::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use sha2::{Digest, Sha256};

use super::NormProblem;
use crate::fields::{FieldElement, FieldTower, PrimeField};
use crate::{Error, Result};

/// An externally computed solution, keyed by the fingerprint of the problem
/// it solves.
#[derive(Clone, Debug)]
pub struct Hint {
    fingerprint: String,
    solution: FieldElement,
}

impl Hint {
    pub fn for_problem(problem: &NormProblem, solution: FieldElement) -> Self {
        Hint { fingerprint: problem.fingerprint(), solution }
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn solution(&self) -> &FieldElement {
        &self.solution
    }
}

#[derive(Clone, Debug, Default)]
pub struct Hints(HashMap<String, FieldElement>);

impl Hints {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, hint: Hint) {
        self.0.insert(hint.fingerprint, hint.solution);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The hinted solution moved into the problem's field. A hint whose
    /// fingerprint matches but which does not solve the equation is an error.
    pub(crate) fn replay(&self, problem: &NormProblem) -> Result<Option<FieldElement>> {
        let Some(sol) = self.0.get(&problem.fingerprint()) else {
            return Ok(None);
        };
        let x = transport(sol, problem.ext().field()).ok_or(Error::InvalidHint)?;
        if x.is_zero() || problem.ext().norm(&x) != *problem.target() {
            return Err(Error::InvalidHint);
        }
        Ok(Some(x))
    }
}

impl FromIterator<Hint> for Hints {
    fn from_iter<I: IntoIterator<Item = Hint>>(iter: I) -> Self {
        let mut h = Hints::new();
        for x in iter {
            h.insert(x);
        }
        h
    }
}

/// Copies `x` into a structurally equal tower by its flat coordinates.
pub(crate) fn transport(x: &FieldElement, field: &FieldTower) -> Option<FieldElement> {
    if x.field() == field {
        return Some(x.lift(field));
    }
    if x.field().absolute_degree() != field.absolute_degree() || x.field().prime() != field.prime() {
        return None;
    }
    match field.prime() {
        PrimeField::Rationals => FieldElement::from_rational_coords(field, &x.rational_coords()?).ok(),
        PrimeField::Modular(_) => Some(FieldElement::from_index(field, x.to_index()?)),
    }
}

fn push_element(out: &mut String, x: &FieldElement) {
    match x.field().prime() {
        PrimeField::Rationals => {
            for c in x.rational_coords().expect("rational field") {
                push_rational(out, &c);
            }
        }
        PrimeField::Modular(_) => {
            for c in x.modular_coords().expect("finite field") {
                let _ = write!(out, "{c},");
            }
        }
    }
    out.push(';');
}

fn push_rational(out: &mut String, r: &BigRational) {
    if r.denom() == &BigInt::from(1) {
        let _ = write!(out, "{},", r.numer());
    } else {
        let _ = write!(out, "{}/{},", r.numer(), r.denom());
    }
}

/// SHA-256 over the defining polynomials of every level, the images of the
/// automorphism, the degree and the target. Labels do not enter.
pub(crate) fn fingerprint(problem: &NormProblem) -> String {
    let field = problem.ext().field();
    let mut canon = String::new();
    match field.prime() {
        PrimeField::Rationals => canon.push_str("Q|"),
        PrimeField::Modular(p) => {
            let _ = write!(canon, "GF({p})|");
        }
    }
    for d in 1..=field.depth() {
        for c in field.level(d).modulus().coeffs() {
            push_element(&mut canon, c);
        }
        canon.push('|');
    }
    for img in problem.ext().sigma().images() {
        push_element(&mut canon, img);
    }
    let _ = write!(canon, "|{}|", problem.ext().degree());
    push_element(&mut canon, problem.target());
    let digest = Sha256::digest(canon.as_bytes());
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}
