use super::element::FieldElement;
use super::poly::Poly;
use super::tower::FieldTower;
use crate::matlin::Matrix;
use crate::{Error, Result};

/// Minimal polynomial of `x` over a level of its tower, from the first
/// linear dependency among the powers of `x`.
pub fn minimal_polynomial(x: &FieldElement, over: &FieldTower) -> Result<Poly> {
    let field = x.field();
    if !field.contains(over) {
        return Err(Error::FieldMismatch);
    }
    let dim = field.absolute_degree() / over.absolute_degree();
    let mut columns: Vec<Vec<FieldElement>> = vec![field.one().coords_over(over)];
    let mut power = field.one();
    for k in 1..=dim {
        power = &power * x;
        columns.push(power.coords_over(over));
        let m = Matrix::from_columns(over, dim, &columns)?;
        let kernel = m.kernel()?;
        if let Some(v) = kernel.first() {
            let lead = v[k].inverse()?;
            return Ok(Poly::new(over, v.iter().map(|c| c * &lead).collect()));
        }
    }
    unreachable!("powers beyond the dimension are always dependent")
}
