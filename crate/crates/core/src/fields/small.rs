/// Nonzero integer vectors of a fixed length, in shells of increasing
/// max-norm; within a shell each coordinate runs through `0, 1, -1, 2, -2, ...`
/// with the first coordinate varying fastest.
pub struct SmallVectors {
    dim: usize,
    height: i64,
    digits: Vec<usize>,
    max_height: Option<i64>,
}

impl SmallVectors {
    pub fn new(dim: usize) -> Self {
        SmallVectors { dim, height: 1, digits: vec![0; dim], max_height: None }
    }

    /// Stops after the shell of the given max-norm.
    pub fn up_to(dim: usize, max_height: i64) -> Self {
        SmallVectors { max_height: Some(max_height), ..Self::new(dim) }
    }

    fn value(d: usize) -> i64 {
        let k = d.div_ceil(2) as i64;
        if d % 2 == 1 {
            k
        } else {
            -k
        }
    }

    fn advance(&mut self) -> bool {
        let width = (2 * self.height + 1) as usize;
        for d in self.digits.iter_mut() {
            *d += 1;
            if *d < width {
                return true;
            }
            *d = 0;
        }
        false
    }
}

impl Iterator for SmallVectors {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if self.dim == 0 {
            return None;
        }
        loop {
            if !self.advance() {
                self.height += 1;
                if self.max_height.is_some_and(|m| self.height > m) {
                    return None;
                }
                self.digits = vec![0; self.dim];
                continue;
            }
            let v: Vec<i64> = self.digits.iter().map(|&d| Self::value(d)).collect();
            if v.iter().any(|x| x.abs() == self.height) {
                return Some(v);
            }
        }
    }
}
