//! Exact signs of number-field elements at the real embeddings, by Sturm
//! sequences and rational interval refinement.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::fields::FieldElement;

type QPoly = Vec<BigRational>;

fn trim(mut f: QPoly) -> QPoly {
    while f.last().is_some_and(Zero::is_zero) {
        f.pop();
    }
    f
}

fn eval(f: &[BigRational], x: &BigRational) -> BigRational {
    f.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn rem(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = &b[db];
    while r.len() > db {
        let c = r.last().unwrap() / lead;
        let shift = r.len() - 1 - db;
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] = &r[shift + i] - &c * bi;
        }
        r.pop();
        r = trim(r);
    }
    trim(r)
}

fn derivative(f: &[BigRational]) -> QPoly {
    trim(f.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(i.into())).collect())
}

struct Sturm(Vec<QPoly>);

impl Sturm {
    fn new(f: &[BigRational]) -> Self {
        let mut seq = vec![trim(f.to_vec())];
        let d = derivative(f);
        if !d.is_empty() {
            seq.push(d);
        }
        loop {
            let n = seq.len();
            if n < 2 || seq[n - 1].len() <= 1 {
                break;
            }
            let r = rem(&seq[n - 2], &seq[n - 1]);
            if r.is_empty() {
                break;
            }
            seq.push(r.into_iter().map(|c| -c).collect());
        }
        Sturm(seq)
    }

    fn changes(&self, x: &BigRational) -> usize {
        let signs: Vec<i32> = self
            .0
            .iter()
            .map(|p| eval(p, x))
            .filter(|v| !v.is_zero())
            .map(|v| if v.is_positive() { 1 } else { -1 })
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Distinct roots in `(lo, hi]`.
    fn count(&self, lo: &BigRational, hi: &BigRational) -> usize {
        self.changes(lo).saturating_sub(self.changes(hi))
    }
}

/// Isolating intervals `(lo, hi]` for the real roots of a squarefree `f`.
fn isolate(f: &[BigRational]) -> Vec<(BigRational, BigRational)> {
    let lead = f.last().unwrap().abs();
    let bound = BigRational::one()
        + f[..f.len() - 1].iter().map(|c| c.abs() / &lead).fold(BigRational::zero(), |a, b| a.max(b));
    let sturm = Sturm::new(f);
    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        match sturm.count(&lo, &hi) {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / BigRational::from_integer(2.into());
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Signs of `x` (an element of a simple extension of `Q`) at each real
/// root of the defining polynomial, in increasing order of the roots.
pub(crate) fn real_signs(x: &FieldElement) -> Option<Vec<i32>> {
    let field = x.field();
    if field.depth() != 1 {
        return None;
    }
    let f: QPoly = field.modulus().coeffs().iter().map(|c| c.as_rational()).collect::<Option<_>>()?;
    let g = trim(x.rational_coords()?);
    if g.is_empty() {
        return Some(vec![0; isolate(&f).len()]);
    }
    let sf = Sturm::new(&f);
    let sg = Sturm::new(&g);
    let two = BigRational::from_integer(2.into());
    let mut signs = Vec::new();
    for (mut lo, mut hi) in isolate(&f) {
        loop {
            let (glo, ghi) = (eval(&g, &lo), eval(&g, &hi));
            if !glo.is_zero() && !ghi.is_zero() && glo.signum() == ghi.signum() && sg.count(&lo, &hi) == 0 {
                signs.push(if ghi.is_positive() { 1 } else { -1 });
                break;
            }
            let mid = (&lo + &hi) / &two;
            if sf.count(&lo, &mid) == 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    Some(signs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FieldTower;

    #[test]
    fn signs_at_real_places() {
        let q = FieldTower::rationals();
        let k = FieldTower::extension(&q, &[q.int(-2), q.zero(), q.one()], "r").unwrap();
        let r = k.generator();
        // 1 + r is negative at -√2 and positive at √2.
        assert_eq!(real_signs(&(&k.one() + &r)).unwrap(), vec![-1, 1]);
        // 3 - 2√2 is positive at √2 and 3 + 2√2 at -√2.
        assert_eq!(real_signs(&(&k.int(3) - &(&r * &k.int(2)))).unwrap(), vec![1, 1]);
        let c = FieldTower::extension(&q, &[q.int(-1), q.int(-2), q.int(1), q.one()], "a").unwrap();
        assert_eq!(real_signs(&c.generator()).unwrap().len(), 3);
    }
}
