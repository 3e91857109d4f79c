use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::morphism::{AlgebraMorphism, Codomain};
use crate::fields::{FieldElement, FieldTower, PrimeField};
use crate::matlin::Matrix;
use crate::par::{self, Execution};
use crate::{Error, Result};

/// Nonzero entries of one product `e_i e_j`, sorted by basis index.
pub type Row = Vec<(usize, FieldElement)>;

#[derive(Clone)]
struct Inner {
    field: FieldTower,
    labels: Vec<String>,
    table: Vec<Row>,
    generators: OnceLock<Vec<usize>>,
}

/// A finite-dimensional algebra over a field given by its multiplication
/// table on a basis. Basis element 0 is expected to be the identity.
#[derive(Clone)]
pub struct StructureConstantAlgebra(Arc<Inner>);

impl StructureConstantAlgebra {
    /// `table[i * dim + j]` holds the coordinates of `e_i e_j`.
    pub fn new(field: &FieldTower, labels: Vec<String>, table: Vec<Row>) -> Result<Self> {
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::DimensionMismatch("empty basis".into()));
        }
        if table.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!("{} table rows for dimension {dim}", table.len())));
        }
        let mut clean = Vec::with_capacity(table.len());
        for row in table {
            let mut row: Row = row.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            if row.iter().any(|(k, c)| *k >= dim || c.field() != field) {
                return Err(Error::DimensionMismatch("table entry out of range or over another field".into()));
            }
            row.sort_by_key(|(k, _)| *k);
            clean.push(row);
        }
        Ok(StructureConstantAlgebra(Arc::new(Inner {
            field: field.clone(),
            labels,
            table: clean,
            generators: OnceLock::new(),
        })))
    }

    /// Builds the table from dense products of basis elements.
    pub fn from_products(
        field: &FieldTower,
        labels: Vec<String>,
        product: impl Fn(usize, usize) -> Vec<FieldElement> + Sync + Send,
    ) -> Result<Self> {
        let dim = labels.len();
        let table = par::map_range(Execution::default(), dim * dim, |ij| {
            product(ij / dim, ij % dim).into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()
        });
        Self::new(field, labels, table)
    }

    /// Records a generating set (basis indices) instead of computing one.
    pub fn with_generators(mut self, generators: Vec<usize>) -> Self {
        let inner = Arc::make_mut(&mut self.0);
        inner.generators = OnceLock::new();
        let _ = inner.generators.set(generators);
        self
    }

    /// The field as an algebra over its base, on the basis `1, t, ..., t^(n-1)`.
    pub fn field_algebra(field: &FieldTower) -> Result<Self> {
        let base = field.base().ok_or(Error::FieldMismatch)?;
        let basis = field.relative_basis(field.depth() - 1);
        let n = basis.len();
        let labels = (0..n).map(|i| power_label(field.label(), i)).collect();
        let alg = Self::from_products(base, labels, |i, j| (&basis[i] * &basis[j]).blocks())?;
        Ok(alg.with_generators(if n > 1 { vec![1] } else { vec![] }))
    }

    pub fn field(&self) -> &FieldTower {
        &self.0.field
    }

    pub fn dim(&self) -> usize {
        self.0.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.0.labels[i]
    }

    /// Coordinates of `e_i e_j`.
    pub fn product(&self, i: usize, j: usize) -> &[(usize, FieldElement)] {
        &self.0.table[i * self.dim() + j]
    }

    pub fn zero(&self) -> Vec<FieldElement> {
        vec![self.field().zero(); self.dim()]
    }

    pub fn basis(&self, i: usize) -> Vec<FieldElement> {
        let mut v = self.zero();
        v[i] = self.field().one();
        v
    }

    pub fn one(&self) -> Vec<FieldElement> {
        self.basis(0)
    }

    /// `c * 1`.
    pub fn scalar(&self, c: &FieldElement) -> Vec<FieldElement> {
        let mut v = self.zero();
        v[0] = c.clone();
        v
    }

    pub fn add(&self, x: &[FieldElement], y: &[FieldElement]) -> Vec<FieldElement> {
        x.iter().zip(y).map(|(a, b)| a + b).collect()
    }

    pub fn sub(&self, x: &[FieldElement], y: &[FieldElement]) -> Vec<FieldElement> {
        x.iter().zip(y).map(|(a, b)| a - b).collect()
    }

    pub fn scale(&self, c: &FieldElement, x: &[FieldElement]) -> Vec<FieldElement> {
        x.iter().map(|a| c * a).collect()
    }

    fn check(&self, x: &[FieldElement]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!("vector of length {} in dimension {}", x.len(), self.dim())));
        }
        if x.iter().any(|c| c.field() != self.field()) {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn mul(&self, x: &[FieldElement], y: &[FieldElement]) -> Result<Vec<FieldElement>> {
        self.check(x)?;
        self.check(y)?;
        let mut out = self.zero();
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in self.product(i, j) {
                    out[*k] = &out[*k] + &(&ab * c);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, x: &[FieldElement], k: usize) -> Result<Vec<FieldElement>> {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }

    /// Matrix of `y -> x y`.
    pub fn left_matrix(&self, x: &[FieldElement]) -> Result<Matrix> {
        let cols: Result<Vec<_>> = (0..self.dim()).map(|j| self.mul(x, &self.basis(j))).collect();
        Matrix::from_columns(self.field(), self.dim(), &cols?)
    }

    /// Matrix of `y -> y x`.
    pub fn right_matrix(&self, x: &[FieldElement]) -> Result<Matrix> {
        let cols: Result<Vec<_>> = (0..self.dim()).map(|j| self.mul(&self.basis(j), x)).collect();
        Matrix::from_columns(self.field(), self.dim(), &cols?)
    }

    /// `λ` (embedding) or `ρ` (anti-embedding) into `dim x dim` matrices.
    pub fn regular_representation(&self, side: Side) -> Result<AlgebraMorphism> {
        let images: Result<Vec<Matrix>> = (0..self.dim())
            .map(|i| match side {
                Side::Left => self.left_matrix(&self.basis(i)),
                Side::Right => self.right_matrix(&self.basis(i)),
            })
            .collect();
        AlgebraMorphism::from_matrices(self, images?, side == Side::Right)
    }

    /// Whether basis element 0 is a two-sided identity.
    pub fn has_identity(&self) -> bool {
        let one = self.field().one();
        (0..self.dim()).all(|i| {
            let unit = |row: &[(usize, FieldElement)]| row.len() == 1 && row[0].0 == i && row[0].1 == one;
            unit(self.product(0, i)) && unit(self.product(i, 0))
        })
    }

    /// First basis triple `(i, j, k)` with `(e_i e_j) e_k != e_i (e_j e_k)`.
    pub fn associativity_violation(&self, exec: Execution) -> Option<(usize, usize, usize)> {
        match PackedTable::new(self).and_then(|t| t.violation(exec)) {
            Some(found) => found,
            None => self.violation_exact(exec),
        }
    }

    pub fn is_associative(&self) -> bool {
        self.associativity_violation(Execution::default()).is_none()
    }

    fn violation_exact(&self, exec: Execution) -> Option<(usize, usize, usize)> {
        let d = self.dim();
        let field = self.field();
        par::find_first(exec, d, |i| {
            for j in 0..d {
                for k in 0..d {
                    let mut lhs = vec![field.zero(); d];
                    for (l, c1) in self.product(i, j) {
                        for (m, c2) in self.product(*l, k) {
                            lhs[*m] = &lhs[*m] + &(c1 * c2);
                        }
                    }
                    let mut rhs = vec![field.zero(); d];
                    for (l, c1) in self.product(j, k) {
                        for (m, c2) in self.product(i, *l) {
                            rhs[*m] = &rhs[*m] + &(c1 * c2);
                        }
                    }
                    if lhs != rhs {
                        return Some((j, k));
                    }
                }
            }
            None
        })
        .map(|(i, (j, k))| (i, j, k))
    }

    /// Same basis, multiplication `x ∘ y = y x`.
    pub fn opposite(&self) -> Self {
        let d = self.dim();
        let table = (0..d * d).map(|ij| self.0.table[(ij % d) * d + ij / d].clone()).collect();
        let inner =
            Inner { field: self.field().clone(), labels: self.0.labels.clone(), table, generators: OnceLock::new() };
        if let Some(g) = self.0.generators.get() {
            let _ = inner.generators.set(g.clone());
        }
        StructureConstantAlgebra(Arc::new(inner))
    }

    /// `self ⊗ other` on the basis `e_i ⊗ f_j` (index `i * dim2 + j`), with
    /// the embeddings `x -> x ⊗ 1` and `y -> 1 ⊗ y`.
    pub fn tensor(&self, other: &Self) -> Result<(Self, AlgebraMorphism, AlgebraMorphism)> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch);
        }
        let (d1, d2) = (self.dim(), other.dim());
        let labels = (0..d1 * d2).map(|ij| format!("{} (x) {}", self.label(ij / d2), other.label(ij % d2))).collect();
        let d = d1 * d2;
        let table = par::map_range(Execution::default(), d * d, |pq| {
            let (p, q) = (pq / d, pq % d);
            let (i1, j1, i2, j2) = (p / d2, p % d2, q / d2, q % d2);
            let mut row: Row = Vec::new();
            for (a, c) in self.product(i1, i2) {
                for (b, e) in other.product(j1, j2) {
                    row.push((a * d2 + b, c * e));
                }
            }
            row
        });
        let mut gens: Vec<usize> = self.generators().iter().map(|&g| g * d2).collect();
        gens.extend(other.generators().iter().copied());
        let t = Self::new(self.field(), labels, table)?.with_generators(gens);
        let e1 = (0..d1).map(|i| t.basis(i * d2)).collect();
        let e2 = (0..d2).map(|j| t.basis(j)).collect();
        let eps1 = AlgebraMorphism::new(self, Codomain::Algebra(t.clone()), e1, false)?;
        let eps2 = AlgebraMorphism::new(other, Codomain::Algebra(t.clone()), e2, false)?;
        Ok((t, eps1, eps2))
    }

    /// Basis of `{x : s x = x s for all s in S}`.
    pub fn centralizer(&self, s: &[Vec<FieldElement>]) -> Result<Vec<Vec<FieldElement>>> {
        let d = self.dim();
        if s.is_empty() {
            return Ok((0..d).map(|i| self.basis(i)).collect());
        }
        let mut rows = Vec::with_capacity(s.len() * d);
        for x in s {
            let m = self.left_matrix(x)?.sub(&self.right_matrix(x)?)?;
            rows.extend(m.to_rows());
        }
        Matrix::from_rows(self.field(), rows)?.kernel()
    }

    /// The center, as the centralizer of a generating set.
    pub fn center(&self) -> Result<Vec<Vec<FieldElement>>> {
        let gens: Vec<_> = self.generators().iter().map(|&g| self.basis(g)).collect();
        self.centralizer(&gens)
    }

    /// Basis indices generating the algebra, recorded or found by closure.
    pub fn generators(&self) -> &[usize] {
        self.0.generators.get_or_init(|| self.closure_generators())
    }

    fn closure_generators(&self) -> Vec<usize> {
        let d = self.dim();
        let mut gens = Vec::new();
        let mut span = Span::new(self.field(), d);
        span.insert(self.one());
        for i in 1..d {
            if span.rank() == d {
                break;
            }
            if span.contains(&self.basis(i)) {
                continue;
            }
            gens.push(i);
            // Close the span under right multiplication by the generators.
            let mut frontier = span.vectors().to_vec();
            while let Some(w) = frontier.pop() {
                for &g in &gens {
                    let p = self.mul(&w, &self.basis(g)).expect("dimensions agree");
                    if span.insert(p.clone()) {
                        frontier.push(p);
                    }
                }
            }
        }
        gens
    }
}

impl PartialEq for StructureConstantAlgebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.field == other.0.field && self.0.table == other.0.table)
    }
}

impl fmt::Debug for StructureConstantAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "algebra of dimension {} over {}", self.dim(), self.field().label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

pub(crate) fn power_label(base: &str, i: usize) -> String {
    match i {
        0 => "1".to_string(),
        1 => base.to_string(),
        _ => format!("{base}^{i}"),
    }
}

/// Incrementally reduced spanning set.
struct Span {
    field: FieldTower,
    pivots: Vec<(usize, Vec<FieldElement>)>,
    raw: Vec<Vec<FieldElement>>,
    dim: usize,
}

impl Span {
    fn new(field: &FieldTower, dim: usize) -> Self {
        Span { field: field.clone(), pivots: Vec::new(), raw: Vec::new(), dim }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn vectors(&self) -> &[Vec<FieldElement>] {
        &self.raw
    }

    fn reduce(&self, mut v: Vec<FieldElement>) -> Vec<FieldElement> {
        for (p, row) in &self.pivots {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    if !r.is_zero() {
                        *x = &*x - &(&f * r);
                    }
                }
            }
        }
        v
    }

    fn contains(&self, v: &[FieldElement]) -> bool {
        self.reduce(v.to_vec()).iter().all(|x| x.is_zero())
    }

    fn insert(&mut self, v: Vec<FieldElement>) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        let r = self.reduce(v.clone());
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inverse().expect("nonzero field element");
        let r: Vec<FieldElement> = r.iter().map(|x| x * &inv).collect();
        for (_, row) in self.pivots.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, y) in row.iter_mut().zip(&r) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        self.pivots.push((p, r));
        self.raw.push(v);
        let _ = &self.field;
        true
    }
}

/// The table with coefficients packed as integers over the prime field:
/// each coefficient as a scaled coordinate vector and as a scaled
/// multiplication matrix, so associativity reduces to machine arithmetic.
struct PackedTable {
    dim: usize,
    k: usize,
    modulus: Option<i128>,
    rows: Vec<Vec<(usize, usize)>>,
    vecs: Vec<Vec<i128>>,
    mats: Vec<Vec<i128>>,
}

impl PackedTable {
    fn new(alg: &StructureConstantAlgebra) -> Option<Self> {
        let field = alg.field();
        let k = field.absolute_degree();
        let basis = field.flat_basis();
        let mut rows = Vec::with_capacity(alg.0.table.len());
        let mut coeffs: Vec<&FieldElement> = Vec::new();
        for row in &alg.0.table {
            rows.push(
                row.iter()
                    .map(|(m, c)| {
                        coeffs.push(c);
                        (*m, coeffs.len() - 1)
                    })
                    .collect(),
            );
        }
        match field.prime() {
            PrimeField::Modular(p) => {
                let p = p as i128;
                let mut structure = vec![vec![vec![0i128; k]; k]; k];
                for a in 0..k {
                    for b in 0..k {
                        let c = &basis[a] * &basis[b];
                        for (m, x) in c.modular_coords()?.iter().enumerate() {
                            structure[a][b][m] = *x as i128;
                        }
                    }
                }
                let vecs: Vec<Vec<i128>> =
                    coeffs.iter().map(|c| c.modular_coords().unwrap().iter().map(|&x| x as i128).collect()).collect();
                let mats = vecs.iter().map(|v| mult_matrix(v, &structure, k, Some(p))).collect::<Option<_>>()?;
                Some(PackedTable { dim: alg.dim(), k, modulus: Some(p), rows, vecs, mats })
            }
            PrimeField::Rationals => {
                let mut struct_den = BigInt::one();
                let products: Vec<Vec<FieldElement>> =
                    (0..k).map(|a| (0..k).map(|b| &basis[a] * &basis[b]).collect()).collect();
                for c in products.iter().flatten() {
                    struct_den = struct_den.lcm(c.integer_coords()?.1);
                }
                let mut structure = vec![vec![vec![0i128; k]; k]; k];
                for a in 0..k {
                    for b in 0..k {
                        let (num, den) = products[a][b].integer_coords()?;
                        let f = &struct_den / den;
                        for (m, x) in num.iter().enumerate() {
                            structure[a][b][m] = (x * &f).to_i128()?;
                        }
                    }
                }
                let mut den = BigInt::one();
                for c in &coeffs {
                    den = den.lcm(c.integer_coords()?.1);
                }
                let vecs: Vec<Vec<i128>> = coeffs
                    .iter()
                    .map(|c| {
                        let (num, d) = c.integer_coords()?;
                        let f = &den / d;
                        num.iter().map(|x| (x * &f).to_i128()).collect::<Option<Vec<i128>>>()
                    })
                    .collect::<Option<_>>()?;
                let mats = vecs.iter().map(|v| mult_matrix(v, &structure, k, None)).collect::<Option<_>>()?;
                Some(PackedTable { dim: alg.dim(), k, modulus: None, rows, vecs, mats })
            }
        }
    }

    fn add_product(&self, acc: &mut [i128], mat: usize, vec: usize) -> Option<()> {
        let k = self.k;
        let (m, v) = (&self.mats[mat], &self.vecs[vec]);
        for r in 0..k {
            let mut s = acc[r];
            for c in 0..k {
                let x = m[r * k + c];
                if x != 0 && v[c] != 0 {
                    s = s.checked_add(x.checked_mul(v[c])?)?;
                    if let Some(p) = self.modulus {
                        s %= p;
                    }
                }
            }
            acc[r] = s;
        }
        Some(())
    }

    /// `Some(Some(..))` for a violation, `Some(None)` if associative,
    /// `None` on overflow.
    fn check_from(&self, i: usize) -> Option<Option<(usize, usize)>> {
        let (d, k) = (self.dim, self.k);
        let mut lhs = vec![0i128; d * k];
        let mut rhs = vec![0i128; d * k];
        for j in 0..d {
            for kk in 0..d {
                lhs.iter_mut().for_each(|x| *x = 0);
                rhs.iter_mut().for_each(|x| *x = 0);
                for &(l, c1) in &self.rows[i * d + j] {
                    for &(m, c2) in &self.rows[l * d + kk] {
                        self.add_product(&mut lhs[m * k..(m + 1) * k], c2, c1)?;
                    }
                }
                for &(l, c1) in &self.rows[j * d + kk] {
                    for &(m, c2) in &self.rows[i * d + l] {
                        self.add_product(&mut rhs[m * k..(m + 1) * k], c2, c1)?;
                    }
                }
                let differ = match self.modulus {
                    Some(p) => lhs.iter().zip(&rhs).any(|(a, b)| (a - b).rem_euclid(p) != 0),
                    None => lhs != rhs,
                };
                if differ {
                    return Some(Some((j, kk)));
                }
            }
        }
        Some(None)
    }

    /// `None` on overflow.
    fn violation(&self, exec: Execution) -> Option<Option<(usize, usize, usize)>> {
        let outcome = par::find_first(exec, self.dim, |i| match self.check_from(i) {
            Some(None) => None,
            other => Some(other),
        });
        match outcome {
            None => Some(None),
            Some((i, Some(Some((j, k))))) => Some(Some((i, j, k))),
            Some(_) => None,
        }
    }
}

fn mult_matrix(v: &[i128], structure: &[Vec<Vec<i128>>], k: usize, modulus: Option<i128>) -> Option<Vec<i128>> {
    let mut m = vec![0i128; k * k];
    for (a, &va) in v.iter().enumerate() {
        if va == 0 {
            continue;
        }
        for b in 0..k {
            for r in 0..k {
                let s = structure[a][b][r];
                if s != 0 {
                    let mut x = m[r * k + b].checked_add(va.checked_mul(s)?)?;
                    if let Some(p) = modulus {
                        x %= p;
                    }
                    m[r * k + b] = x;
                }
            }
        }
    }
    Some(m)
}
