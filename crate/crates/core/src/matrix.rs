//! Dense square matrices over the Laurent ring and their determinants.

use crate::Laurent;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Laurent>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![Laurent::zero(); rows * cols] }
    }

    pub fn get(&self, r: usize, c: usize) -> &Laurent {
        &self.data[r * self.cols + c]
    }

    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut Laurent {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Laurent] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// The matrix with the listed columns deleted.
    pub fn without_columns(&self, drop: &[usize]) -> Matrix {
        let keep: Vec<usize> = (0..self.cols).filter(|c| !drop.contains(c)).collect();
        let mut m = Matrix::zeros(self.rows, keep.len());
        for r in 0..self.rows {
            for (k, &c) in keep.iter().enumerate() {
                *m.get_mut(r, k) = self.get(r, c).clone();
            }
        }
        m
    }

    /// Fraction-free Gaussian elimination. Every division is exact in the
    /// Laurent ring, so no fractions ever appear.
    pub fn det_bareiss(&self) -> Laurent {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Laurent::one();
        }
        let mut a: Vec<Vec<Laurent>> = (0..n).map(|r| self.row(r).to_vec()).collect();
        let mut negate = false;
        let mut prev = Laurent::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                // prefer the sparsest usable pivot
                let swap = (k + 1..n).filter(|&r| !a[r][k].is_zero()).min_by_key(|&r| a[r][k].num_terms());
                match swap {
                    Some(r) => {
                        a.swap(k, r);
                        negate = !negate;
                    }
                    None => return Laurent::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
                }
                a[i][k] = Laurent::zero();
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        if negate {
            -d
        } else {
            d
        }
    }

    /// Laplace expansion along the first row. Exponential; small matrices only.
    pub fn det_cofactor(&self) -> Laurent {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let cols: Vec<usize> = (0..self.cols).collect();
        self.cofactor_rec(0, &cols)
    }

    fn cofactor_rec(&self, row: usize, cols: &[usize]) -> Laurent {
        if cols.is_empty() {
            return Laurent::one();
        }
        let mut acc = Laurent::zero();
        for (k, &c) in cols.iter().enumerate() {
            let x = self.get(row, c);
            if x.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&y| y != c).collect();
            let term = x * &self.cofactor_rec(row + 1, &rest);
            if k % 2 == 0 {
                acc += &term;
            } else {
                acc -= &term;
            }
        }
        acc
    }

    /// Bareiss, or cofactor expansion below 8x8.
    pub fn det(&self) -> Laurent {
        if self.rows < 8 {
            self.det_cofactor()
        } else {
            self.det_bareiss()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::t_half;

    fn m(rows: usize, v: Vec<Laurent>) -> Matrix {
        Matrix { rows, cols: v.len() / rows, data: v }
    }

    #[test]
    fn empty_and_small() {
        assert_eq!(Matrix::zeros(0, 0).det_bareiss(), Laurent::one());
        let a = m(2, vec![t_half(1), Laurent::one(), Laurent::one(), t_half(-1)]);
        assert_eq!(a.det_bareiss(), Laurent::zero());
        let b = m(2, vec![Laurent::zero(), t_half(2), t_half(1), Laurent::one()]);
        assert_eq!(b.det_bareiss(), -t_half(3));
        assert_eq!(b.det_cofactor(), -t_half(3));
    }
}
