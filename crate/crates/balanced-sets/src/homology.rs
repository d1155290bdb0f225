//! Reduced simplicial homology with integer coefficients, computed from
//! boundary-matrix Smith normal forms.
//!
//! Betti numbers and torsion use the augmented (reduced) convention, so the
//! complex `{∅}` has one unit of homology in degree -1. Boundary matrices of
//! large complexes are reduced sparsely with unit pivots first; whatever
//! remains goes through the dense Smith normal form.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::complex::SimplicialComplex;
use crate::error::Result;
use crate::linalg::{smith_normal_form, IntMatrix};

pub use crate::complex::DEFAULT_FACE_CAP;

/// Per-degree reduced Betti numbers and torsion coefficients.
///
/// `betti` carries every degree from -1 up to the complex dimension,
/// including zero entries; `torsion` only lists degrees with nontrivial
/// torsion. The void complex has an empty profile.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomologyProfile {
    pub betti: BTreeMap<i64, usize>,
    pub torsion: BTreeMap<i64, Vec<BigInt>>,
    pub euler_reduced: i64,
}

impl HomologyProfile {
    pub fn rank(&self, degree: i64) -> usize {
        self.betti.get(&degree).copied().unwrap_or(0)
    }

    pub fn torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// True when the profile is exactly that of a sphere of the given
    /// dimension: torsion-free with a single rank-1 group in degree `n`.
    /// Degree -1 is the empty complex `{∅}`.
    pub fn is_sphere(&self, n: i64) -> bool {
        self.torsion_free()
            && self.rank(n) == 1
            && self
                .betti
                .iter()
                .all(|(&d, &b)| d == n || b == 0)
    }

    /// The unique `n` with a sphere profile, if any.
    pub fn sphere_degree(&self) -> Option<i64> {
        if !self.torsion_free() {
            return None;
        }
        let nonzero: Vec<(i64, usize)> = self
            .betti
            .iter()
            .filter(|(_, &b)| b > 0)
            .map(|(&d, &b)| (d, b))
            .collect();
        match nonzero.as_slice() {
            [(d, 1)] => Some(*d),
            _ => None,
        }
    }

    /// JSON rendering with string keys; degree -1 appears only when nonzero.
    pub fn to_json_value(&self) -> serde_json::Value {
        let mut betti = serde_json::Map::new();
        for (&d, &b) in &self.betti {
            if d == -1 && b == 0 {
                continue;
            }
            betti.insert(d.to_string(), serde_json::json!(b));
        }
        let mut torsion = serde_json::Map::new();
        for (&d, coeffs) in &self.torsion {
            let list: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
            torsion.insert(d.to_string(), serde_json::json!(list));
        }
        serde_json::json!({
            "betti": betti,
            "torsion": torsion,
            "euler_reduced": self.euler_reduced,
        })
    }
}

/// Free-standing form of [`HomologyProfile::is_sphere`].
pub fn is_sphere_profile(profile: &HomologyProfile, n: i64) -> bool {
    profile.is_sphere(n)
}

/// The boundary matrices `∂_1, ..., ∂_dim` of a complex: `∂_p` maps
/// `p`-faces (columns) to `(p-1)`-faces (rows) with alternating signs over
/// the sorted vertex order. The augmentation map is not included.
pub fn boundary_matrices(complex: &SimplicialComplex, cap: usize) -> Result<Vec<IntMatrix>> {
    if complex.is_void() || complex.is_empty_complex() {
        return Ok(Vec::new());
    }
    let faces = complex.faces_by_dim(cap)?;
    let mut matrices = Vec::new();
    for p in 1..faces.len() {
        let index: BTreeMap<&Vec<usize>, usize> = faces[p - 1]
            .iter()
            .enumerate()
            .map(|(i, f)| (f, i))
            .collect();
        let mut matrix = IntMatrix::zero(faces[p - 1].len(), faces[p].len());
        for (col, face) in faces[p].iter().enumerate() {
            for (sign_pos, boundary) in boundary_faces(face) {
                let row = index[&boundary];
                let sign = if sign_pos % 2 == 0 { 1 } else { -1 };
                matrix.set(row, col, BigInt::from(sign));
            }
        }
        matrices.push(matrix);
    }
    Ok(matrices)
}

fn boundary_faces(face: &[usize]) -> impl Iterator<Item = (usize, Vec<usize>)> + '_ {
    (0..face.len()).map(move |j| {
        let mut boundary = face.to_vec();
        boundary.remove(j);
        (j, boundary)
    })
}

/// Reduced integer homology of a complex.
pub fn reduced_homology(complex: &SimplicialComplex, cap: usize) -> Result<HomologyProfile> {
    if complex.is_void() {
        return Ok(HomologyProfile {
            betti: BTreeMap::new(),
            torsion: BTreeMap::new(),
            euler_reduced: 0,
        });
    }
    if complex.is_empty_complex() {
        return Ok(HomologyProfile {
            betti: BTreeMap::from([(-1, 1)]),
            torsion: BTreeMap::new(),
            euler_reduced: -1,
        });
    }

    let faces = complex.faces_by_dim(cap)?;
    let top = faces.len() - 1;
    let f: Vec<usize> = faces.iter().map(|fs| fs.len()).collect();

    // ranks[p] = rank ∂_p and the invariant factors of ∂_p, p = 0..=top;
    // ∂_0 is the all-ones augmentation row.
    let mut ranks = vec![0usize; top + 2];
    let mut factors: Vec<Vec<BigInt>> = vec![Vec::new(); top + 2];
    {
        let mut aug = SparseInt::new(1, f[0]);
        for col in 0..f[0] {
            aug.set(0, col, BigInt::one());
        }
        let (r, inv) = aug.rank_and_factors();
        ranks[0] = r;
        factors[0] = inv;
    }
    for p in 1..=top {
        let index: BTreeMap<&Vec<usize>, usize> = faces[p - 1]
            .iter()
            .enumerate()
            .map(|(i, face)| (face, i))
            .collect();
        let mut sparse = SparseInt::new(f[p - 1], f[p]);
        for (col, face) in faces[p].iter().enumerate() {
            for (sign_pos, boundary) in boundary_faces(face) {
                let sign = if sign_pos % 2 == 0 { 1 } else { -1 };
                sparse.set(index[&boundary], col, BigInt::from(sign));
            }
        }
        let (r, inv) = sparse.rank_and_factors();
        ranks[p] = r;
        factors[p] = inv;
    }

    let mut betti = BTreeMap::new();
    betti.insert(-1, 1 - ranks[0]);
    for p in 0..=top {
        betti.insert(p as i64, f[p] - ranks[p] - ranks[p + 1]);
    }
    let mut torsion = BTreeMap::new();
    for p in 0..=top {
        let nontrivial: Vec<BigInt> = factors[p]
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect();
        if !nontrivial.is_empty() {
            torsion.insert(p as i64 - 1, nontrivial);
        }
    }
    let euler_reduced = f
        .iter()
        .enumerate()
        .fold(-1i64, |acc, (p, &count)| {
            acc + if p % 2 == 0 { count as i64 } else { -(count as i64) }
        });

    Ok(HomologyProfile {
        betti,
        torsion,
        euler_reduced,
    })
}

/// Reduced Euler characteristic from the f-vector: `Σ (-1)^p f_p` with
/// `f_{-1} = 1` for nonvoid complexes, and 0 for the void complex.
pub fn euler_characteristic(complex: &SimplicialComplex, cap: usize) -> Result<i64> {
    if complex.is_void() {
        return Ok(0);
    }
    Ok(complex
        .f_vector(cap)?
        .iter()
        .enumerate()
        .fold(-1i64, |acc, (p, &count)| {
            acc + if p % 2 == 0 { count as i64 } else { -(count as i64) }
        }))
}

/// Sparse integer matrix reduced by unimodular row and column operations.
///
/// Unit pivots (entries of magnitude one) are eliminated directly, which
/// keeps the Schur complements integral; whatever survives without a unit
/// entry is handed to the dense Smith normal form.
struct SparseInt {
    rows: Vec<BTreeMap<usize, BigInt>>,
    cols: Vec<BTreeSet<usize>>,
    active_rows: Vec<bool>,
}

impl SparseInt {
    fn new(nrows: usize, ncols: usize) -> Self {
        SparseInt {
            rows: vec![BTreeMap::new(); nrows],
            cols: vec![BTreeSet::new(); ncols],
            active_rows: vec![true; nrows],
        }
    }

    fn set(&mut self, r: usize, c: usize, value: BigInt) {
        if value.is_zero() {
            return;
        }
        self.rows[r].insert(c, value);
        self.cols[c].insert(r);
    }

    /// Consumes the matrix; returns its rank and invariant factors.
    fn rank_and_factors(mut self) -> (usize, Vec<BigInt>) {
        let mut units = 0usize;

        // candidate heap keyed by (row fill, row index); stale entries are
        // re-validated on pop, rows without unit entries are parked until
        // an elimination touches them again
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;
        let mut heap: BinaryHeap<Reverse<(usize, usize)>> = (0..self.rows.len())
            .filter(|&r| !self.rows[r].is_empty())
            .map(|r| Reverse((self.rows[r].len(), r)))
            .collect();

        while let Some(Reverse((fill, row))) = heap.pop() {
            if !self.active_rows[row] || self.rows[row].is_empty() {
                continue;
            }
            if fill != self.rows[row].len() {
                heap.push(Reverse((self.rows[row].len(), row)));
                continue;
            }
            // unit entry of this row with the sparsest column
            let Some((&col, pivot)) = self
                .rows[row]
                .iter()
                .filter(|(_, v)| v.abs().is_one())
                .min_by_key(|(&c, _)| (self.cols[c].len(), c))
                .map(|(c, v)| (c, v.clone()))
            else {
                continue; // parked
            };

            let pivot_row: Vec<(usize, BigInt)> =
                self.rows[row].iter().map(|(&c, v)| (c, v.clone())).collect();
            let victims: Vec<usize> = self.cols[col]
                .iter()
                .copied()
                .filter(|&r| r != row)
                .collect();
            for victim in victims {
                let coeff = self.rows[victim][&col].clone();
                let factor = &coeff * &pivot; // pivot is ±1
                for (c, v) in &pivot_row {
                    let entry = self.rows[victim].entry(*c).or_insert_with(BigInt::zero);
                    *entry -= &factor * v;
                    if entry.is_zero() {
                        self.rows[victim].remove(c);
                        self.cols[*c].remove(&victim);
                    } else {
                        self.cols[*c].insert(victim);
                    }
                }
                if !self.rows[victim].is_empty() {
                    heap.push(Reverse((self.rows[victim].len(), victim)));
                }
            }

            // retire the pivot row and column
            for (c, _) in &pivot_row {
                self.cols[*c].remove(&row);
            }
            self.rows[row].clear();
            self.active_rows[row] = false;
            units += 1;
        }

        // dense leftover
        let mut live_rows: Vec<usize> = Vec::new();
        let mut live_cols: BTreeSet<usize> = BTreeSet::new();
        for (r, row) in self.rows.iter().enumerate() {
            if !row.is_empty() {
                live_rows.push(r);
                live_cols.extend(row.keys().copied());
            }
        }
        if live_rows.is_empty() {
            return (units, vec![BigInt::one(); units]);
        }
        let col_index: BTreeMap<usize, usize> = live_cols
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i))
            .collect();
        let mut dense = IntMatrix::zero(live_rows.len(), col_index.len());
        for (i, &r) in live_rows.iter().enumerate() {
            for (c, v) in &self.rows[r] {
                dense.set(i, col_index[c], v.clone());
            }
        }
        let rest = smith_normal_form(&dense);
        let rank = units + rest.len();
        let mut factors = vec![BigInt::one(); units];
        factors.extend(rest);
        (rank, factors)
    }
}
