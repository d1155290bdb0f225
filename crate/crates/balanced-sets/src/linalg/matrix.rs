use crate::error::{Error, Result};
use crate::linalg::Rational;

/// Dense matrix of exact rationals, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RationalMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch(
                "rows must all have the same length".into(),
            ));
        }
        Ok(RationalMatrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_columns(cols: Vec<Vec<Rational>>) -> Result<Self> {
        let m = RationalMatrix::from_rows(cols)?;
        Ok(m.transpose())
    }

    /// Convenience constructor from machine integers.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from_int(x)).collect())
            .collect();
        RationalMatrix::from_rows(rows).expect("literal rows have equal length")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut t = RationalMatrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// New matrix keeping only the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> RationalMatrix {
        let mut m = RationalMatrix::zero(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                m.set(r, j, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} columns, vector has length {}",
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .map(|(a, x)| a * x)
                    .sum::<Rational>()
            })
            .collect())
    }

    /// In-place reduction to reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            let Some(src) = (pivot_row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(src, pivot_row);
            let inv = self
                .get(pivot_row, col)
                .recip()
                .expect("pivot entry is nonzero");
            self.scale_row(pivot_row, &inv);
            for r in 0..self.rows {
                if r != pivot_row && !self.get(r, col).is_zero() {
                    let factor = self.get(r, col).clone();
                    self.sub_scaled_row(r, pivot_row, &factor);
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        pivots
    }

    /// Exact rank via rational Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.rref().len()
    }

    /// Some exact solution of `self * x = b`, or `None` if inconsistent.
    ///
    /// Pivot variables take the reduced right-hand side, free variables are
    /// set to zero; when the columns are independent the solution is unique.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} rows, right-hand side has length {}",
                self.rows,
                b.len()
            )));
        }
        let mut aug = RationalMatrix::zero(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None); // a row reduced to 0 = nonzero
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = aug.get(row, self.cols).clone();
        }
        Ok(Some(x))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, factor: &Rational) {
        for c in 0..self.cols {
            let v = self.get(r, c) * factor;
            self.set(r, c, v);
        }
    }

    fn sub_scaled_row(&mut self, target: usize, src: usize, factor: &Rational) {
        for c in 0..self.cols {
            let v = self.get(target, c) - &(self.get(src, c) * factor);
            self.set(target, c, v);
        }
    }
}

impl std::fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::rat;

    #[test]
    fn rank_identity() {
        assert_eq!(RationalMatrix::identity(2).rank(), 2);
    }

    #[test]
    fn rank_zero_matrix() {
        assert_eq!(RationalMatrix::zero(3, 4).rank(), 0);
    }

    #[test]
    fn rank_proportional_rows() {
        let m = RationalMatrix::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn solve_identity() {
        let m = RationalMatrix::identity(2);
        let b = vec![rat(1, 2), rat(1, 3)];
        assert_eq!(m.solve(&b).unwrap().unwrap(), b);
    }

    #[test]
    fn solve_underdetermined_satisfies_system() {
        let m = RationalMatrix::from_int_rows(&[&[1, 1]]);
        let b = vec![rat(1, 1)];
        let x = m.solve(&b).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), b);
    }

    #[test]
    fn solve_inconsistent() {
        let m = RationalMatrix::from_int_rows(&[&[1], &[1]]);
        let b = vec![rat(0, 1), rat(1, 1)];
        assert!(m.solve(&b).unwrap().is_none());
    }

    #[test]
    fn solve_dimension_mismatch() {
        let m = RationalMatrix::identity(2);
        assert!(m.solve(&[rat(1, 1)]).is_err());
    }

    #[test]
    fn rank_invariant_under_permutation() {
        let m = RationalMatrix::from_int_rows(&[&[1, 2, 3], &[4, 5, 6], &[5, 7, 9]]);
        let permuted = RationalMatrix::from_int_rows(&[&[6, 4, 5], &[9, 5, 7], &[3, 1, 2]]);
        assert_eq!(m.rank(), permuted.rank());
        assert_eq!(m.rank(), 2);
    }
}
