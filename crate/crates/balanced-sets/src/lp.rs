//! Exact rational linear programming over regions `{x >= 0, Ax = b}`:
//! phase-one feasibility and single-coordinate maximization, both running
//! a dense tableau simplex with Bland's lowest-index anti-cycling rule.

use crate::error::{Error, Result};
use crate::geometry::PointConfiguration;
use crate::linalg::{Rational, RationalMatrix};
use crate::subset::SubsetMask;

/// The standard-form region `{x >= 0, Ax = b}`.
///
/// Weight-vector systems append an all-ones row to the point matrix so that
/// coordinates sum to one; [`StandardSystem::from_parts`] accepts any
/// nonnegative linear system.
#[derive(Clone)]
pub struct StandardSystem {
    a: RationalMatrix,
    b: Vec<Rational>,
}

impl StandardSystem {
    pub fn from_parts(a: RationalMatrix, b: Vec<Rational>) -> Result<Self> {
        if a.rows() != b.len() {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} rows, right-hand side has length {}",
                a.rows(),
                b.len()
            )));
        }
        Ok(StandardSystem { a, b })
    }

    /// Weight-vector system of a configuration restricted to a subset of
    /// columns: the selected points with an appended all-ones row; the
    /// right-hand side is the reference point with an appended 1.
    pub fn for_subset(cfg: &PointConfiguration, subset: SubsetMask) -> Self {
        let n = subset.len();
        let d = cfg.ambient_dim();
        let mut a = RationalMatrix::zero(d + 1, n);
        for (j, i) in subset.iter().enumerate() {
            for (row, coord) in cfg.point(i).iter().enumerate() {
                a.set(row, j, coord.clone());
            }
            a.set(d, j, Rational::one());
        }
        let mut b: Vec<Rational> = cfg.reference().to_vec();
        b.push(Rational::one());
        StandardSystem { a, b }
    }

    pub fn for_configuration(cfg: &PointConfiguration) -> Self {
        StandardSystem::for_subset(cfg, cfg.full_mask())
    }

    pub fn num_vars(&self) -> usize {
        self.a.cols()
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.a
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.b
    }

    fn check_solution(&self, x: &[Rational]) {
        assert!(
            x.iter().all(|v| !v.is_negative()),
            "solver returned a negative coordinate"
        );
        let image = self.a.mul_vec(x).expect("solution length matches");
        assert!(
            image == self.b,
            "solver solution does not satisfy the system exactly"
        );
    }
}

/// A nonnegative exact solution of its originating system. For weight
/// systems this is a weight vector: nonnegative coordinates summing to one
/// that combine the points to the reference point.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightVector {
    coords: Vec<Rational>,
}

impl WeightVector {
    fn checked(sys: &StandardSystem, coords: Vec<Rational>) -> Self {
        sys.check_solution(&coords);
        WeightVector { coords }
    }

    /// Wraps explicit coordinates, asserting that they are nonnegative and
    /// solve the system exactly.
    pub fn from_coords(sys: &StandardSystem, coords: Vec<Rational>) -> Self {
        WeightVector::checked(sys, coords)
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    /// Indices with strictly positive coordinates.
    pub fn support(&self) -> SubsetMask {
        SubsetMask::from_indices(
            self.coords
                .iter()
                .enumerate()
                .filter(|(_, v)| v.is_positive())
                .map(|(i, _)| i),
        )
    }
}

/// Outcome of maximizing one coordinate; an infeasible system is distinct
/// from a feasible one whose maximum is zero.
pub enum CoordinateMax {
    Infeasible,
    Max {
        value: Rational,
        witness: WeightVector,
    },
}

/// Some point of the region, or `None` when it is empty.
pub fn feasible_point(sys: &StandardSystem) -> Option<WeightVector> {
    let tableau = Tableau::phase_one(sys)?;
    Some(WeightVector::checked(sys, tableau.solution()))
}

/// Exact maximum of coordinate `index` over the region, with a maximizer.
///
/// Panics if the region is unbounded in that coordinate; every system built
/// by this crate is bounded.
pub fn max_coordinate(sys: &StandardSystem, index: usize) -> Result<CoordinateMax> {
    if index >= sys.num_vars() {
        return Err(Error::IndexOutOfRange {
            index,
            size: sys.num_vars(),
        });
    }
    let Some(mut tableau) = Tableau::phase_one(sys) else {
        return Ok(CoordinateMax::Infeasible);
    };
    let value = tableau.maximize(index);
    Ok(CoordinateMax::Max {
        value,
        witness: WeightVector::checked(sys, tableau.solution()),
    })
}

/// A feasible point of maximal support: the uniform average of the
/// per-coordinate maximizers. Its support is `{i : max x_i > 0}`, and no
/// feasible point has a strictly larger support.
pub fn relint_point(sys: &StandardSystem) -> Option<WeightVector> {
    let base = Tableau::phase_one(sys)?;
    let n = sys.num_vars();
    let mut sum = vec![Rational::zero(); n];
    for k in 0..n {
        let mut tableau = base.clone();
        tableau.maximize(k);
        for (acc, v) in sum.iter_mut().zip(tableau.solution()) {
            *acc += &v;
        }
    }
    let scale = Rational::new(1, n as i64);
    let avg: Vec<Rational> = sum.into_iter().map(|v| v * &scale).collect();
    Some(WeightVector::checked(sys, avg))
}

const PIVOT_BUDGET_CAP: u64 = 50_000_000;

fn pivot_budget(cols: usize, rows: usize) -> u64 {
    // Bland's rule never revisits a basis, so distinct bases bound the pivots.
    let mut budget: u64 = 1;
    for i in 0..rows.min(cols) {
        budget = budget.saturating_mul((cols - i) as u64) / (i as u64 + 1);
        if budget >= PIVOT_BUDGET_CAP {
            return PIVOT_BUDGET_CAP;
        }
    }
    budget.saturating_mul(4).saturating_add(1000)
}

/// Dense simplex tableau over the structural columns; artificial columns
/// exist only inside `phase_one`.
#[derive(Clone)]
struct Tableau {
    cols: usize,
    t: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    /// Runs phase one on the row-reduced system. `None` means infeasible.
    fn phase_one(sys: &StandardSystem) -> Option<Tableau> {
        let n = sys.num_vars();
        let m = sys.rhs().len();

        // Row-reduce the augmented system up front: degenerate (rank-deficient)
        // systems are the norm here, and the simplex below wants independent rows.
        let mut aug = RationalMatrix::zero(m, n + 1);
        for r in 0..m {
            for c in 0..n {
                aug.set(r, c, sys.matrix().get(r, c).clone());
            }
            aug.set(r, n, sys.rhs()[r].clone());
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&n) {
            return None; // 0 = nonzero
        }
        let rows = pivots.len();

        let mut t: Vec<Vec<Rational>> = Vec::with_capacity(rows);
        let mut rhs = Vec::with_capacity(rows);
        for r in 0..rows {
            let mut row: Vec<Rational> = (0..n).map(|c| aug.get(r, c).clone()).collect();
            let mut rv = aug.get(r, n).clone();
            if rv.is_negative() {
                for v in &mut row {
                    *v = -&*v;
                }
                rv = -rv;
            }
            // artificial block
            for j in 0..rows {
                row.push(if j == r { Rational::one() } else { Rational::zero() });
            }
            t.push(row);
            rhs.push(rv);
        }

        let mut tableau = Tableau {
            cols: n + rows,
            t,
            rhs,
            basis: (n..n + rows).collect(),
        };

        // phase-1 objective: minimize the sum of artificial variables
        let mut cost = vec![Rational::zero(); n + rows];
        for c in cost.iter_mut().skip(n) {
            *c = Rational::one();
        }
        let value = tableau.run_simplex(&cost, Some(n));
        if !value.is_zero() {
            return None;
        }

        // drive leftover artificial variables out with degenerate pivots
        for row in 0..tableau.basis.len() {
            if tableau.basis[row] >= n {
                let col = (0..n)
                    .find(|&c| !tableau.t[row][c].is_zero())
                    .expect("row-reduced system has full row rank");
                tableau.pivot(row, col);
            }
        }

        // forget the artificial block
        for row in &mut tableau.t {
            row.truncate(n);
        }
        tableau.cols = n;
        Some(tableau)
    }

    /// Maximizes coordinate `index`; returns the exact optimum.
    fn maximize(&mut self, index: usize) -> Rational {
        let mut cost = vec![Rational::zero(); self.cols];
        cost[index] = -Rational::one();
        -self.run_simplex(&cost, None)
    }

    /// Minimizes `cost . x` from the current basis; returns the optimum.
    /// `enter_limit` restricts entering variables to indices below it.
    ///
    /// Panics on an unbounded ray or an exhausted pivot budget.
    fn run_simplex(&mut self, cost: &[Rational], enter_limit: Option<usize>) -> Rational {
        let limit = enter_limit.unwrap_or(self.cols);
        let rows = self.basis.len();

        // reduced costs and objective for the current basis
        let mut zrow: Vec<Rational> = (0..self.cols)
            .map(|j| {
                let carried: Rational = (0..rows)
                    .map(|i| &cost[self.basis[i]] * &self.t[i][j])
                    .sum();
                &cost[j] - &carried
            })
            .collect();
        let mut objective: Rational = (0..rows)
            .map(|i| &cost[self.basis[i]] * &self.rhs[i])
            .sum();

        let budget = pivot_budget(self.cols, rows);
        let mut pivots: u64 = 0;
        loop {
            let Some(enter) = (0..limit).find(|&j| zrow[j].is_negative()) else {
                return objective;
            };
            let mut leave: Option<usize> = None;
            let mut best: Option<Rational> = None;
            for i in 0..rows {
                if self.t[i][enter].is_positive() {
                    let ratio = &self.rhs[i] / &self.t[i][enter];
                    let better = match &best {
                        None => true,
                        Some(b) => {
                            ratio < *b || (ratio == *b && self.basis[i] < self.basis[leave.unwrap()])
                        }
                    };
                    if better {
                        best = Some(ratio);
                        leave = Some(i);
                    }
                }
            }
            let leave = leave.unwrap_or_else(|| {
                panic!("feasible region unbounded in variable {enter}")
            });

            self.pivot(leave, enter);
            let factor = zrow[enter].clone();
            if !factor.is_zero() {
                for j in 0..self.cols {
                    let v = &zrow[j] - &(&factor * &self.t[leave][j]);
                    zrow[j] = v;
                }
                objective = objective + &factor * &self.rhs[leave];
            }

            pivots += 1;
            assert!(
                pivots <= budget,
                "simplex pivot budget exhausted after {pivots} pivots: anti-cycling invariant violated"
            );
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.t[row][col].recip().expect("pivot entry is nonzero");
        for v in &mut self.t[row] {
            *v = &*v * &inv;
        }
        self.rhs[row] = &self.rhs[row] * &inv;
        for i in 0..self.t.len() {
            if i != row && !self.t[i][col].is_zero() {
                let factor = self.t[i][col].clone();
                for j in 0..self.cols {
                    let v = &self.t[i][j] - &(&factor * &self.t[row][j]);
                    self.t[i][j] = v;
                }
                let v = &self.rhs[i] - &(&factor * &self.rhs[row]);
                self.rhs[i] = v;
            }
        }
        self.basis[row] = col;
    }

    fn solution(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.cols];
        for (i, &b) in self.basis.iter().enumerate() {
            x[b] = self.rhs[i].clone();
        }
        x
    }
}
