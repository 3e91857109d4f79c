//! Problem files: named towers, automorphisms, algebra presentations, hints,
//! reference values and witnesses, all in exact coordinates.
//!
//! A field element is written over its immediate base: a string `"p/q"` is a
//! rational (or residue) scalar; an array lists the coefficients of the
//! power basis, each itself an element of the next field down.

use std::collections::BTreeMap;
use std::path::Path;

use csa_core::csa::{BicyclicPresentation, CyclicPresentation};
use csa_core::fields::{Automorphism, CompositeExtension, CyclicExtension, FieldElement, FieldTower};
use csa_core::matlin::Matrix;
use csa_core::normeq::{Hint, Hints, NormProblem};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBundle {
    #[serde(default)]
    fields: Vec<RawField>,
    #[serde(default)]
    automorphisms: Vec<RawAutomorphism>,
    #[serde(default)]
    algebras: Vec<RawAlgebra>,
    #[serde(default)]
    hints: Vec<RawHint>,
    #[serde(default)]
    values: Vec<RawValue>,
    #[serde(default)]
    witnesses: Vec<Witness>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    name: String,
    /// A field name; absent means the prime field.
    base: Option<String>,
    /// Characteristic of the prime field; absent means `Q`.
    prime: Option<u64>,
    modulus: Vec<Value>,
    label: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAutomorphism {
    name: String,
    field: String,
    codomain: Option<String>,
    /// Images of the generators of every level, bottom first.
    images: Option<Vec<Value>>,
    /// Image of the top generator; lower levels are fixed.
    image: Option<Value>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawAlgebra {
    Cyclic { name: String, sigma: String, a: Value, v: Option<String> },
    Bicyclic { name: String, left: String, right: String, label: Option<String>, u: Value, b1: Value, b2: Value },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHint {
    /// Automorphism of the field of the equation.
    sigma: String,
    /// Defaults to the order of `sigma`.
    degree: Option<usize>,
    target: Value,
    solution: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawValue {
    name: String,
    field: Option<String>,
    algebra: Option<String>,
    value: Value,
}

/// A claimed answer in generator-image form, as printed in reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Witness {
    /// Matrices (rows of base-field elements) of the algebra generators.
    Split { algebra: String, generators: Vec<Value> },
    /// Images of `θ` and `v` of the left algebra, as parts of the right one.
    Iso { left: String, right: String, generators: Vec<Value> },
    /// Images of `θ` and `v` under the semilinear extension of `auto`.
    Extend { algebra: String, auto: String, theta: Value, v: Value },
}

#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Algebra {
    Cyclic(CyclicPresentation),
    Bicyclic(BicyclicPresentation),
}

/// A validated problem file.
#[derive(Clone, Debug, Default)]
pub struct Bundle {
    pub fields: BTreeMap<String, FieldTower>,
    pub automorphisms: BTreeMap<String, Automorphism>,
    pub algebras: BTreeMap<String, Algebra>,
    pub hints: Hints,
    values: BTreeMap<String, (Target, Value)>,
    pub witnesses: Vec<Witness>,
}

#[derive(Clone, Debug)]
enum Target {
    Field(String),
    Algebra(String),
}

fn invalid(what: impl Into<String>) -> CliError {
    CliError::Validation(what.into())
}

fn unresolved(name: &str) -> CliError {
    CliError::UnresolvedName(name.to_string())
}

pub fn parse_rational(s: &str) -> Result<BigRational, CliError> {
    let s = s.trim();
    let parse = |t: &str| t.trim().parse::<BigInt>().map_err(|_| invalid(format!("not a rational: {s:?}")));
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse(d)?;
            if d == BigInt::from(0) {
                return Err(invalid(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(parse(n)?, d))
        }
        None => Ok(BigRational::from_integer(parse(s)?)),
    }
}

pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Reads an element of `field` in nested power-basis form.
pub fn parse_element(field: &FieldTower, v: &Value) -> Result<FieldElement, CliError> {
    match v {
        Value::String(s) => {
            let r = parse_rational(s)?;
            if field.is_finite() && (r.denom() % field.characteristic()) == BigInt::from(0) {
                return Err(invalid(format!("{s:?} has no residue mod {}", field.characteristic())));
            }
            Ok(FieldElement::from_rational(field, &r))
        }
        Value::Number(n) if n.is_i64() => Ok(field.int(n.as_i64().unwrap())),
        Value::Array(items) => {
            let Some(base) = field.base() else {
                return Err(invalid(format!("array given for a prime-field element of {}", field.label())));
            };
            if items.len() != field.degree() {
                return Err(invalid(format!(
                    "{} coefficients for an element of {} (degree {})",
                    items.len(),
                    field.label(),
                    field.degree()
                )));
            }
            let blocks = items.iter().map(|x| parse_element(base, x)).collect::<Result<Vec<_>, _>>()?;
            Ok(FieldElement::from_blocks(field, &blocks)?)
        }
        _ => Err(invalid(format!("expected an element of {}, found {v}", field.label()))),
    }
}

/// Inverse of [`parse_element`]; prime-field scalars become strings.
pub fn encode_element(x: &FieldElement) -> Value {
    if x.field().depth() == 0 {
        let s = match x.as_rational() {
            Some(r) => format_rational(&r),
            None => x.modular_coords().map_or_else(String::new, |c| c[0].to_string()),
        };
        return Value::String(s);
    }
    Value::Array(x.blocks().iter().map(encode_element).collect())
}

pub fn encode_matrix(m: &Matrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(encode_element).collect())).collect())
}

pub fn parse_matrix(field: &FieldTower, n: usize, v: &Value) -> Result<Matrix, CliError> {
    let rows = v.as_array().filter(|r| r.len() == n).ok_or_else(|| invalid(format!("expected {n} matrix rows")))?;
    let rows = rows
        .iter()
        .map(|r| {
            let r = r.as_array().filter(|r| r.len() == n).ok_or_else(|| invalid(format!("expected {n} entries")))?;
            r.iter().map(|x| parse_element(field, x)).collect()
        })
        .collect::<Result<Vec<Vec<_>>, CliError>>()?;
    Ok(Matrix::from_rows(field, rows)?)
}

/// `[x_0, ..., x_{n-1}]` for `Σ x_j v^j` in a cyclic algebra.
pub fn parse_parts(a: &CyclicPresentation, v: &Value) -> Result<Vec<FieldElement>, CliError> {
    let parts = v
        .as_array()
        .filter(|p| p.len() == a.degree())
        .ok_or_else(|| invalid(format!("expected {} parts", a.degree())))?;
    let parts = parts.iter().map(|p| parse_element(a.field(), p)).collect::<Result<Vec<_>, _>>()?;
    Ok(a.element(&parts)?)
}

pub fn encode_parts(a: &CyclicPresentation, x: &[FieldElement]) -> Result<Value, CliError> {
    Ok(Value::Array(a.parts(x)?.iter().map(encode_element).collect()))
}

impl Algebra {
    pub fn base(&self) -> &FieldTower {
        match self {
            Algebra::Cyclic(a) => a.base(),
            Algebra::Bicyclic(c) => c.base(),
        }
    }
}

impl Bundle {
    pub fn load(path: &Path) -> Result<Bundle, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Bundle, CliError> {
        let raw: RawBundle = serde_json::from_str(text).map_err(|e| CliError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let mut b = Bundle::default();
        b.extend_from(raw)?;
        Ok(b)
    }

    /// Adds the contents of another file; names must not collide.
    pub fn merge_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let raw: RawBundle = serde_json::from_str(&text).map_err(|e| CliError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        self.extend_from(raw)
    }

    pub fn field(&self, name: &str) -> Result<&FieldTower, CliError> {
        self.fields.get(name).ok_or_else(|| unresolved(name))
    }

    pub fn automorphism(&self, name: &str) -> Result<&Automorphism, CliError> {
        self.automorphisms.get(name).ok_or_else(|| unresolved(name))
    }

    pub fn algebra(&self, name: &str) -> Result<&Algebra, CliError> {
        self.algebras.get(name).ok_or_else(|| unresolved(name))
    }

    pub fn cyclic(&self, name: &str) -> Result<&CyclicPresentation, CliError> {
        match self.algebra(name)? {
            Algebra::Cyclic(a) => Ok(a),
            Algebra::Bicyclic(_) => Err(invalid(format!("{name} is not a cyclic algebra"))),
        }
    }

    /// A named reference value of a field.
    pub fn field_value(&self, name: &str) -> Result<FieldElement, CliError> {
        match self.values.get(name) {
            Some((Target::Field(f), v)) => parse_element(self.field(f)?, v),
            Some(_) => Err(invalid(format!("{name} is not a field value"))),
            None => Err(unresolved(name)),
        }
    }

    /// A named reference value of a cyclic algebra, in algebra coordinates.
    pub fn algebra_value(&self, name: &str) -> Result<Vec<FieldElement>, CliError> {
        match self.values.get(name) {
            Some((Target::Algebra(a), v)) => parse_parts(self.cyclic(a)?, v),
            Some(_) => Err(invalid(format!("{name} is not an algebra value"))),
            None => Err(unresolved(name)),
        }
    }

    fn fresh(&self, name: &str) -> Result<(), CliError> {
        let taken = self.fields.contains_key(name)
            || self.automorphisms.contains_key(name)
            || self.algebras.contains_key(name)
            || self.values.contains_key(name);
        if taken {
            return Err(invalid(format!("duplicate name {name}")));
        }
        Ok(())
    }

    fn extend_from(&mut self, raw: RawBundle) -> Result<(), CliError> {
        for f in raw.fields {
            self.fresh(&f.name)?;
            let base = match (&f.base, f.prime) {
                (Some(b), None) => self.field(b)?.clone(),
                (None, None) => FieldTower::rationals(),
                (None, Some(p)) => FieldTower::prime_field(p)?,
                (Some(_), Some(_)) => return Err(invalid(format!("{}: give either base or prime", f.name))),
            };
            let coeffs = f.modulus.iter().map(|c| parse_element(&base, c)).collect::<Result<Vec<_>, _>>()?;
            let tower = FieldTower::extension(&base, &coeffs, f.label.as_deref().unwrap_or(&f.name))?;
            if tower.is_finite() && !tower.modulus().is_irreducible_finite()? {
                return Err(invalid(format!("{}: defining polynomial is reducible", f.name)));
            }
            self.fields.insert(f.name, tower);
        }
        for a in raw.automorphisms {
            self.fresh(&a.name)?;
            let domain = self.field(&a.field)?.clone();
            let codomain = match &a.codomain {
                Some(c) => self.field(c)?.clone(),
                None => domain.clone(),
            };
            let m = match (&a.images, &a.image) {
                (Some(images), None) => {
                    let images = images.iter().map(|x| parse_element(&codomain, x)).collect::<Result<Vec<_>, _>>()?;
                    Automorphism::new(&domain, &codomain, images)?
                }
                (None, Some(image)) if domain == codomain => {
                    Automorphism::top_level(&domain, parse_element(&domain, image)?)?
                }
                _ => return Err(invalid(format!("{}: give images, or image for an endomorphism", a.name))),
            };
            if domain == codomain && m.order().is_none() {
                return Err(invalid(format!("{}: not of finite order", a.name)));
            }
            self.automorphisms.insert(a.name, m);
        }
        for a in raw.algebras {
            match a {
                RawAlgebra::Cyclic { name, sigma, a, v } => {
                    self.fresh(&name)?;
                    let sigma = self.automorphism(&sigma)?;
                    let base = sigma.domain().base().ok_or_else(|| invalid(format!("{name}: no base field")))?;
                    let a = parse_element(base, &a)?;
                    let p = CyclicPresentation::new(sigma, &a, v.as_deref().unwrap_or("v"))?;
                    self.algebras.insert(name, Algebra::Cyclic(p));
                }
                RawAlgebra::Bicyclic { name, left, right, label, u, b1, b2 } => {
                    self.fresh(&name)?;
                    let comp = CompositeExtension::new(
                        self.automorphism(&left)?,
                        self.automorphism(&right)?,
                        label.as_deref().unwrap_or("y"),
                    )?;
                    let f = comp.field().clone();
                    let (u, b1, b2) = (parse_element(&f, &u)?, parse_element(&f, &b1)?, parse_element(&f, &b2)?);
                    let c = BicyclicPresentation::checked(&comp, &u, &b1, &b2, ("z1", "z2"))?;
                    self.algebras.insert(name, Algebra::Bicyclic(c));
                }
            }
        }
        for h in raw.hints {
            let sigma = self.automorphism(&h.sigma)?;
            let degree = h.degree.or_else(|| sigma.order()).ok_or_else(|| invalid("hint automorphism has no order"))?;
            let ext = CyclicExtension::new(sigma, degree)?;
            let target = parse_element(ext.field(), &h.target)?;
            let solution = parse_element(ext.field(), &h.solution)?;
            let problem = NormProblem::new(&ext, &target)?;
            if ext.norm(&solution) != *problem.target() {
                return Err(invalid(format!("hint for {} does not solve its equation", h.sigma)));
            }
            self.hints.insert(Hint::for_problem(&problem, solution));
        }
        for v in raw.values {
            self.fresh(&v.name)?;
            let target = match (v.field, v.algebra) {
                (Some(f), None) => {
                    parse_element(self.field(&f)?, &v.value)?;
                    Target::Field(f)
                }
                (None, Some(a)) => {
                    parse_parts(self.cyclic(&a)?, &v.value)?;
                    Target::Algebra(a)
                }
                _ => return Err(invalid(format!("{}: give either field or algebra", v.name))),
            };
            self.values.insert(v.name, (target, v.value));
        }
        self.witnesses.extend(raw.witnesses);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_round_trip() {
        for s in ["0", "-3", "7/2", "-1601/56"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(format_rational(&parse_rational("4/6").unwrap()), "2/3");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn nested_elements() {
        let b = Bundle::from_json(
            r#"{"fields": [
                {"name": "K", "modulus": ["-2", "0", "1"], "label": "s"},
                {"name": "L", "base": "K", "modulus": ["1", "0", "1"], "label": "i"}
            ]}"#,
        )
        .unwrap();
        let l = b.field("L").unwrap();
        let v: Value = serde_json::from_str(r#"[["1/2", "3"], "-1"]"#).unwrap();
        let x = parse_element(l, &v).unwrap();
        assert_eq!(encode_element(&x), serde_json::json!([["1/2", "3"], ["-1", "0"]]));
        assert!(parse_element(l, &serde_json::json!(["1"])).is_err());
    }

    #[test]
    fn validation_errors() {
        let nonmonic = r#"{"fields": [{"name": "K", "modulus": ["1", "0", "2"]}]}"#;
        assert!(matches!(Bundle::from_json(nonmonic), Err(CliError::Core(csa_core::Error::NonMonic))));
        let dangling = r#"{"fields": [{"name": "K", "modulus": ["1", "0", "1"]}],
            "automorphisms": [{"name": "s", "field": "L", "image": ["0", "-1"]}]}"#;
        assert!(matches!(Bundle::from_json(dangling), Err(CliError::UnresolvedName(n)) if n == "L"));
        let bad_image = r#"{"fields": [{"name": "K", "modulus": ["1", "0", "1"]}],
            "automorphisms": [{"name": "s", "field": "K", "image": ["1", "1"]}]}"#;
        assert!(matches!(Bundle::from_json(bad_image), Err(CliError::Core(csa_core::Error::InconsistentImages))));
        let reducible = r#"{"fields": [{"name": "F", "prime": 5, "modulus": ["1", "0", "1"]}]}"#;
        assert!(matches!(Bundle::from_json(reducible), Err(CliError::Validation(_))));
        match Bundle::from_json("{\n  \"fields\": [\n    {\"name\": 3}\n  ]\n}") {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }
}
