use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| BigInt::from(x)))
            .collect();
        IntMatrix {
            rows: nrows,
            cols: ncols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: BigInt) {
        self.data[r * self.cols + c] = value;
    }

    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        smith_normal_form(self).len()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.get(r, c).clone();
            self.set(r, c, v);
        }
    }

    // target -= q * src
    fn sub_scaled_row(&mut self, target: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = self.get(target, c) - q * self.get(src, c);
            self.set(target, c, v);
        }
    }

    fn sub_scaled_col(&mut self, target: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = self.get(r, target) - q * self.get(r, src);
            self.set(r, target, v);
        }
    }

    fn add_row(&mut self, target: usize, src: usize) {
        for c in 0..self.cols {
            let v = self.get(target, c) + self.get(src, c);
            self.set(target, c, v);
        }
    }
}

// Quotient rounded to nearest, so the remainder has magnitude <= b/2.
// Requires b > 0.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_mod_floor(b);
    if &(&r * 2) > b {
        q += 1;
    }
    q
}

/// Smith normal form of an integer matrix: the nonzero invariant factors
/// `d_1 | d_2 | ...`, each positive. The zero matrix yields an empty list.
///
/// Integer-preserving elimination; pivots are chosen with minimal magnitude
/// and quotients are rounded to the nearest integer to limit growth.
pub fn smith_normal_form(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let (nr, nc) = (a.rows, a.cols);
    let mut factors = Vec::new();
    let mut k = 0;

    'outer: while k < nr.min(nc) {
        // minimal-magnitude nonzero entry of the trailing block
        let mut pivot: Option<(usize, usize)> = None;
        for r in k..nr {
            for c in k..nc {
                if !a.get(r, c).is_zero()
                    && pivot.is_none_or(|(pr, pc)| a.get(r, c).abs() < a.get(pr, pc).abs())
                {
                    pivot = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = pivot else {
            break;
        };
        a.swap_rows(k, pr);
        a.swap_cols(k, pc);
        if a.get(k, k).is_negative() {
            a.negate_row(k);
        }

        loop {
            let p = a.get(k, k).clone();

            // clear column k; a leftover remainder becomes a smaller pivot
            for r in k + 1..nr {
                let q = round_div(&a.get(r, k).clone(), &p);
                a.sub_scaled_row(r, k, &q);
            }
            if let Some(r) = (k + 1..nr).find(|&r| !a.get(r, k).is_zero()) {
                a.swap_rows(k, r);
                if a.get(k, k).is_negative() {
                    a.negate_row(k);
                }
                continue;
            }

            // clear row k
            for c in k + 1..nc {
                let q = round_div(&a.get(k, c).clone(), &p);
                a.sub_scaled_col(c, k, &q);
            }
            if let Some(c) = (k + 1..nc).find(|&c| !a.get(k, c).is_zero()) {
                a.swap_cols(k, c);
                if a.get(k, k).is_negative() {
                    a.negate_row(k);
                }
                continue;
            }

            // enforce the divisibility chain before moving on
            for r in k + 1..nr {
                if (k + 1..nc).any(|c| !a.get(r, c).mod_floor(&p).is_zero()) {
                    a.add_row(k, r);
                    continue 'outer;
                }
            }

            factors.push(p);
            k += 1;
            break;
        }
    }

    debug_assert!(factors
        .windows(2)
        .all(|w| w[1].mod_floor(&w[0]).is_zero()));
    factors
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf_i64(rows: &[&[i64]]) -> Vec<i64> {
        smith_normal_form(&IntMatrix::from_rows(rows))
            .iter()
            .map(|f| i64::try_from(f).unwrap())
            .collect()
    }

    #[test]
    fn diagonal_2_3_gives_1_6() {
        assert_eq!(snf_i64(&[&[2, 0], &[0, 3]]), vec![1, 6]);
    }

    #[test]
    fn zero_matrix_has_no_factors() {
        assert_eq!(snf_i64(&[&[0, 0], &[0, 0]]), Vec::<i64>::new());
    }

    #[test]
    fn rank_one_unit() {
        assert_eq!(snf_i64(&[&[1, 0], &[0, 0]]), vec![1]);
    }

    #[test]
    fn known_4x4() {
        // same invariant factors as the row-reduced classic: 1, 3, 21
        assert_eq!(
            snf_i64(&[
                &[-6, 111, -36, 6],
                &[5, -672, 210, 74],
                &[0, -255, 81, 24],
                &[-7, 255, -81, -10]
            ]),
            vec![1, 3, 21]
        );
    }

    #[test]
    fn torsion_shows_up() {
        assert_eq!(snf_i64(&[&[2, 4], &[4, 8]]), vec![2]);
        assert_eq!(snf_i64(&[&[2, 0], &[0, 4]]), vec![2, 4]);
    }

    #[test]
    fn divisibility_chain_on_a_dense_example() {
        let factors = snf_i64(&[&[6, 10, 15], &[10, 15, 6], &[15, 6, 10]]);
        assert_eq!(factors.len(), 3);
        for w in factors.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
    }
}
