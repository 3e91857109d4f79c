use super::sca::StructureConstantAlgebra;
use crate::fields::{Automorphism, FieldElement, FieldTower};
use crate::matlin::Matrix;
use crate::par::{self, Execution};
use crate::{Error, Result};

/// Target of an [`AlgebraMorphism`]: another structure-constant algebra or
/// the full matrix algebra `M_n` (entries stored row-major).
#[derive(Clone, Debug, PartialEq)]
pub enum Codomain {
    Algebra(StructureConstantAlgebra),
    Matrices(FieldTower, usize),
}

impl Codomain {
    pub fn field(&self) -> &FieldTower {
        match self {
            Codomain::Algebra(a) => a.field(),
            Codomain::Matrices(f, _) => f,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Codomain::Algebra(a) => a.dim(),
            Codomain::Matrices(_, n) => n * n,
        }
    }

    pub fn one(&self) -> Vec<FieldElement> {
        match self {
            Codomain::Algebra(a) => a.one(),
            Codomain::Matrices(f, n) => Matrix::identity(f, *n).into_entries(),
        }
    }

    pub fn mul(&self, x: &[FieldElement], y: &[FieldElement]) -> Result<Vec<FieldElement>> {
        match self {
            Codomain::Algebra(a) => a.mul(x, y),
            Codomain::Matrices(f, n) => {
                let a = Matrix::from_entries(f, *n, *n, x.to_vec())?;
                let b = Matrix::from_entries(f, *n, *n, y.to_vec())?;
                Ok(a.mul(&b)?.into_entries())
            }
        }
    }
}

/// A linear map out of a structure-constant algebra given by the images of
/// the basis. `anti` marks an anti-homomorphism; a `twist` automorphism of
/// the scalar field makes the map semilinear: `f(c x) = twist(c) f(x)`.
#[derive(Clone, Debug)]
pub struct AlgebraMorphism {
    source: StructureConstantAlgebra,
    codomain: Codomain,
    images: Vec<Vec<FieldElement>>,
    anti: bool,
    twist: Option<Automorphism>,
}

impl AlgebraMorphism {
    pub fn new(
        source: &StructureConstantAlgebra,
        codomain: Codomain,
        images: Vec<Vec<FieldElement>>,
        anti: bool,
    ) -> Result<Self> {
        if images.len() != source.dim() {
            return Err(Error::DimensionMismatch(format!("{} images for dimension {}", images.len(), source.dim())));
        }
        let d = codomain.dim();
        if images.iter().any(|v| v.len() != d || v.iter().any(|c| c.field() != codomain.field())) {
            return Err(Error::DimensionMismatch("image outside the codomain".into()));
        }
        Ok(AlgebraMorphism { source: source.clone(), codomain, images, anti, twist: None })
    }

    /// Map into `M_n` from the matrices of the basis images.
    pub fn from_matrices(source: &StructureConstantAlgebra, images: Vec<Matrix>, anti: bool) -> Result<Self> {
        let n = images.first().map_or(0, |m| m.rows());
        if images.iter().any(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::DimensionMismatch("basis images of different sizes".into()));
        }
        let field = images.first().map_or_else(|| source.field().clone(), |m| m.field().clone());
        let flat = images.into_iter().map(Matrix::into_entries).collect();
        Self::new(source, Codomain::Matrices(field, n), flat, anti)
    }

    /// Extends generator images multiplicatively: basis element `i` is the
    /// product of the generators listed in `words[i]`, left to right.
    pub fn from_words(
        source: &StructureConstantAlgebra,
        codomain: Codomain,
        words: &[Vec<usize>],
        generator_images: &[Vec<FieldElement>],
        anti: bool,
    ) -> Result<Self> {
        let images = par::map_range(Execution::default(), words.len(), |i| {
            let mut acc = codomain.one();
            for &g in &words[i] {
                let img = generator_images.get(g).ok_or(Error::DimensionMismatch("unknown generator".into()))?;
                acc = if anti { codomain.mul(img, &acc)? } else { codomain.mul(&acc, img)? };
            }
            Ok(acc)
        });
        Self::new(source, codomain, images.into_iter().collect::<Result<_>>()?, anti)
    }

    pub fn with_twist(mut self, twist: Automorphism) -> Result<Self> {
        if twist.domain() != self.source.field() || twist.codomain() != self.codomain.field() {
            return Err(Error::FieldMismatch);
        }
        self.twist = if twist.is_identity() { None } else { Some(twist) };
        Ok(self)
    }

    pub fn source(&self) -> &StructureConstantAlgebra {
        &self.source
    }

    pub fn codomain(&self) -> &Codomain {
        &self.codomain
    }

    pub fn images(&self) -> &[Vec<FieldElement>] {
        &self.images
    }

    pub fn is_anti(&self) -> bool {
        self.anti
    }

    pub fn twist(&self) -> Option<&Automorphism> {
        self.twist.as_ref()
    }

    fn scalar(&self, c: &FieldElement) -> FieldElement {
        match &self.twist {
            Some(t) => t.on(c),
            None => c.lift(self.codomain.field()),
        }
    }

    pub fn apply(&self, x: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if x.len() != self.source.dim() {
            return Err(Error::DimensionMismatch("argument outside the source".into()));
        }
        let mut out = vec![self.codomain.field().zero(); self.codomain.dim()];
        for (c, img) in x.iter().zip(&self.images) {
            if c.is_zero() {
                continue;
            }
            let c = self.scalar(c);
            for (o, v) in out.iter_mut().zip(img) {
                if !v.is_zero() {
                    *o = &*o + &(&c * v);
                }
            }
        }
        Ok(out)
    }

    /// Image as a matrix, for maps into `M_n`.
    pub fn apply_matrix(&self, x: &[FieldElement]) -> Result<Matrix> {
        match &self.codomain {
            Codomain::Matrices(f, n) => Matrix::from_entries(f, *n, *n, self.apply(x)?),
            Codomain::Algebra(_) => Err(Error::Unsupported("codomain is not a matrix algebra".into())),
        }
    }

    /// Columns are the basis images.
    pub fn images_matrix(&self) -> Result<Matrix> {
        Matrix::from_columns(self.codomain.field(), self.codomain.dim(), &self.images)
    }

    /// `then ∘ self`.
    pub fn compose(&self, then: &AlgebraMorphism) -> Result<AlgebraMorphism> {
        match &self.codomain {
            Codomain::Algebra(a) if *a == then.source => {}
            _ => return Err(Error::DimensionMismatch("codomain is not the next source".into())),
        }
        let images = self.images.iter().map(|v| then.apply(v)).collect::<Result<_>>()?;
        let twist = match (&self.twist, &then.twist) {
            (None, None) => None,
            (Some(s), None) => Some(s.clone()),
            (None, Some(t)) => Some(t.clone()),
            (Some(s), Some(t)) => Some(t.compose(s)?),
        };
        Ok(AlgebraMorphism {
            source: self.source.clone(),
            codomain: then.codomain.clone(),
            images,
            anti: self.anti != then.anti,
            twist,
        })
    }

    /// Inverse of a bijection between algebras.
    pub fn inverse(&self) -> Result<AlgebraMorphism> {
        let Codomain::Algebra(target) = &self.codomain else {
            return Err(Error::Unsupported("inverse into a matrix algebra".into()));
        };
        let inv = self.images_matrix()?.inverse()?;
        let twist = self.twist.as_ref().map(Automorphism::inverse).transpose()?;
        let images = (0..inv.cols())
            .map(|j| {
                let col = inv.column(j);
                match &twist {
                    Some(t) => col.iter().map(|c| t.on(c)).collect(),
                    None => col,
                }
            })
            .collect();
        Ok(AlgebraMorphism {
            source: target.clone(),
            codomain: Codomain::Algebra(self.source.clone()),
            images,
            anti: self.anti,
            twist,
        })
    }

    /// The same linear map read on the opposite source algebra.
    pub fn with_opposite_source(&self) -> AlgebraMorphism {
        AlgebraMorphism { source: self.source.opposite(), anti: !self.anti, ..self.clone() }
    }

    pub fn is_unital(&self) -> bool {
        self.apply(&self.source.one()).is_ok_and(|v| v == self.codomain.one())
    }

    fn respects(&self, i: usize, j: usize) -> bool {
        let prod = self.source.mul(&self.source.basis(i), &self.source.basis(j)).expect("basis vectors");
        let lhs = self.apply(&prod).expect("source vector");
        let (a, b) = (&self.images[i], &self.images[j]);
        let rhs = if self.anti { self.codomain.mul(b, a) } else { self.codomain.mul(a, b) };
        rhs.is_ok_and(|r| r == lhs)
    }

    /// Multiplicativity on `generators x basis`. Together with
    /// [`AlgebraMorphism::is_unital`] this implies it everywhere: the elements
    /// `x` with `f(xy) = f(x)f(y)` for all `y` form a subalgebra.
    pub fn is_multiplicative(&self, exec: Execution) -> bool {
        let gens = self.source.generators().to_vec();
        let d = self.source.dim();
        par::all(exec, gens.len() * d, |gj| self.respects(gens[gj / d], gj % d))
    }

    /// Multiplicativity on all pairs of basis elements.
    pub fn is_multiplicative_exhaustive(&self, exec: Execution) -> bool {
        let d = self.source.dim();
        par::all(exec, d * d, |ij| self.respects(ij / d, ij % d))
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.images_matrix()?.rank()? == self.source.dim())
    }

    pub fn is_bijective(&self) -> Result<bool> {
        Ok(self.codomain.dim() == self.source.dim() && self.is_injective()?)
    }
}
