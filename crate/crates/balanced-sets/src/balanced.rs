//! Balancedness of point subsets, the weight polytope and its vertices,
//! the closure operator onto balanced subsets, and the inclusion lattice
//! of balanced subsets.
//!
//! A subset `S` is *weakly balanced* when the reference point lies in
//! `conv(S)`, i.e. some weight vector is supported inside `S`; it is
//! *balanced* when the reference point lies in the relative interior, i.e.
//! some weight vector has support exactly `S`.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::geometry::{affine_dim_of, PointConfiguration};
use crate::linalg::{Rational, RationalMatrix};
use crate::lp::{self, StandardSystem, WeightVector};
use crate::subset::SubsetMask;

/// Largest ground set for which full `2^m` subset scans are attempted.
pub const MAX_SCAN_GROUND: usize = 20;

fn validate_subset(cfg: &PointConfiguration, subset: SubsetMask) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    if !subset.is_subset_of(cfg.full_mask()) {
        return Err(Error::IndexOutOfRange {
            index: subset.iter().last().unwrap_or(0) + 1,
            size: cfg.m(),
        });
    }
    Ok(())
}

fn to_global(subset: SubsetMask, local_support: SubsetMask) -> SubsetMask {
    SubsetMask::from_indices(
        subset
            .iter()
            .enumerate()
            .filter(|(j, _)| local_support.contains(*j))
            .map(|(_, i)| i),
    )
}

/// Whether the reference point lies in `conv(S)`.
pub fn is_weakly_balanced(cfg: &PointConfiguration, subset: SubsetMask) -> Result<bool> {
    validate_subset(cfg, subset)?;
    let sys = StandardSystem::for_subset(cfg, subset);
    Ok(lp::feasible_point(&sys).is_some())
}

/// Whether the reference point lies in `relint(conv(S))`: the restricted
/// system has a point of full support.
pub fn is_balanced(cfg: &PointConfiguration, subset: SubsetMask) -> Result<bool> {
    validate_subset(cfg, subset)?;
    let sys = StandardSystem::for_subset(cfg, subset);
    match lp::relint_point(&sys) {
        Some(w) => Ok(w.support().len() == subset.len()),
        None => Ok(false),
    }
}

/// The trace of the minimal face of `conv(S)` containing the reference
/// point: the support of a maximal-support weight vector on `S`.
///
/// The result is balanced, contained in `S`, and the operator is monotone,
/// idempotent, and fixes balanced subsets. Rejects subsets that are not
/// weakly balanced.
pub fn balanced_closure(cfg: &PointConfiguration, subset: SubsetMask) -> Result<SubsetMask> {
    validate_subset(cfg, subset)?;
    let sys = StandardSystem::for_subset(cfg, subset);
    match lp::relint_point(&sys) {
        Some(w) => Ok(to_global(subset, w.support())),
        None => Err(Error::Precondition(format!(
            "subset {subset} is not weakly balanced"
        ))),
    }
}

/// A vertex of the weight polytope: the unique weight vector of an
/// inclusion-minimal balanced subset, embedded in all `m` coordinates.
#[derive(Clone, Debug)]
pub struct PolytopeVertex {
    pub weights: WeightVector,
    pub support: SubsetMask,
}

/// The polytope of weight vectors of a configuration (optionally restricted
/// to a subset), described by its vertices.
pub struct WeightPolytope {
    system: StandardSystem,
    vertices: Vec<PolytopeVertex>,
    dim: Option<usize>,
}

impl WeightPolytope {
    pub fn system(&self) -> &StandardSystem {
        &self.system
    }

    pub fn vertices(&self) -> &[PolytopeVertex] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Affine dimension of the vertex set; `None` for the empty polytope.
    pub fn dim(&self) -> Option<usize> {
        self.dim
    }

    pub fn supports(&self) -> Vec<SubsetMask> {
        self.vertices.iter().map(|v| v.support).collect()
    }
}

/// Vertex enumeration of the weight polytope by exhaustive basis scan.
///
/// Every column subset of size `rank([V; 1])` with independent columns is
/// solved exactly; nonnegative solutions are the basic feasible points.
/// Duplicates arising from degeneracy are merged, and the vertex list is
/// sorted by support mask. The supports are exactly the inclusion-minimal
/// balanced subsets.
pub fn weight_polytope(cfg: &PointConfiguration) -> WeightPolytope {
    restricted_polytope(cfg, cfg.full_mask()).expect("full mask is valid")
}

/// The face `λ(S)` of the weight polytope spanned by weight vectors
/// supported inside `S`, enumerated by the same basis scan.
pub fn restricted_polytope(
    cfg: &PointConfiguration,
    subset: SubsetMask,
) -> Result<WeightPolytope> {
    validate_subset(cfg, subset)?;
    let sys = StandardSystem::for_subset(cfg, subset);
    let full_sys = StandardSystem::for_configuration(cfg);
    let n = subset.len();
    let rho = sys.matrix().rank();
    let locals: Vec<usize> = (0..n).collect();

    let mut seen = std::collections::BTreeSet::new();
    let mut vertices = Vec::new();
    for basis in locals.iter().copied().combinations(rho) {
        let Some(on_basis) = solve_basis(sys.matrix(), sys.rhs(), &basis, rho) else {
            continue;
        };
        if on_basis.iter().any(|v| v.is_negative()) {
            continue;
        }
        let mut local = vec![Rational::zero(); n];
        for (pos, &c) in basis.iter().enumerate() {
            local[c] = on_basis[pos].clone();
        }
        // embed into all m coordinates
        let mut coords = vec![Rational::zero(); cfg.m()];
        for (j, i) in subset.iter().enumerate() {
            coords[i] = local[j].clone();
        }
        if !seen.insert(coords.clone()) {
            continue;
        }
        let weights = WeightVector::from_coords(&full_sys, coords);
        let support = weights.support();
        vertices.push(PolytopeVertex { weights, support });
    }
    vertices.sort_by_key(|v| (v.support, v.weights.coords().to_vec()));

    let dim = if vertices.is_empty() {
        None
    } else {
        let points: Vec<Vec<Rational>> = vertices
            .iter()
            .map(|v| v.weights.coords().to_vec())
            .collect();
        Some(affine_dim_of(&points))
    };
    Ok(WeightPolytope {
        system: sys,
        vertices,
        dim,
    })
}

// Unique solution of the basis system, or None when the columns are
// dependent or the system inconsistent.
fn solve_basis(
    a: &RationalMatrix,
    b: &[Rational],
    basis: &[usize],
    rho: usize,
) -> Option<Vec<Rational>> {
    let rows = a.rows();
    let mut aug = RationalMatrix::zero(rows, basis.len() + 1);
    for r in 0..rows {
        for (j, &c) in basis.iter().enumerate() {
            aug.set(r, j, a.get(r, c).clone());
        }
        aug.set(r, basis.len(), b[r].clone());
    }
    let pivots = aug.rref();
    if pivots.last() == Some(&basis.len()) {
        return None; // inconsistent
    }
    if pivots.len() < rho {
        return None; // dependent columns
    }
    let mut local = vec![Rational::zero(); basis.len()];
    for (row, &col) in pivots.iter().enumerate() {
        local[col] = aug.get(row, basis.len()).clone();
    }
    Some(local)
}

/// Supports of the weight-polytope vertices: the inclusion-minimal balanced
/// subsets, ascending as masks. Each carries a unique weight vector and is
/// affinely independent.
pub fn minimal_balanced_subsets(cfg: &PointConfiguration) -> Vec<SubsetMask> {
    weight_polytope(cfg).supports()
}

/// Some minimal balanced subset of `S` containing `v` (0-based); ties are
/// broken by the smallest mask. Requires `S` balanced and `v ∈ S`.
pub fn minimal_subset_through(
    cfg: &PointConfiguration,
    subset: SubsetMask,
    v: usize,
) -> Result<SubsetMask> {
    validate_subset(cfg, subset)?;
    if !subset.contains(v) {
        return Err(Error::Precondition(format!(
            "index {} is not in {subset}",
            v + 1
        )));
    }
    if !is_balanced(cfg, subset)? {
        return Err(Error::Precondition(format!("subset {subset} is not balanced")));
    }
    minimal_balanced_subsets(cfg)
        .into_iter()
        .find(|s| s.is_subset_of(subset) && s.contains(v))
        .ok_or_else(|| {
            Error::Precondition(format!(
                "no minimal balanced subset of {subset} through index {}",
                v + 1
            ))
        })
}

/// The inclusion poset of all balanced subsets: the union-closure of the
/// minimal balanced subsets, since unions of balanced subsets are balanced
/// (average their witnesses) and every balanced subset is the union of the
/// minimal ones below it.
pub struct BalancedLattice {
    m: usize,
    elements: Vec<SubsetMask>,
    minimal: Vec<SubsetMask>,
    generators: Vec<Vec<usize>>,
}

impl BalancedLattice {
    /// All balanced subsets, ascending as masks; includes the full set when
    /// it is balanced.
    pub fn elements(&self) -> &[SubsetMask] {
        &self.elements
    }

    pub fn minimal(&self) -> &[SubsetMask] {
        &self.minimal
    }

    /// Indices into `minimal()` of the generators below element `idx`;
    /// their union is exactly the element.
    pub fn generators(&self, idx: usize) -> &[usize] {
        &self.generators[idx]
    }

    pub fn ground_size(&self) -> usize {
        self.m
    }

    pub fn contains(&self, mask: SubsetMask) -> bool {
        self.elements.binary_search(&mask).is_ok()
    }

    /// Whether the whole point set is balanced (the lattice then has a top).
    pub fn full_set_balanced(&self) -> bool {
        self.contains(SubsetMask::full(self.m))
    }

    /// The balanced subsets excluding the whole set.
    pub fn proper_elements(&self) -> Vec<SubsetMask> {
        let full = SubsetMask::full(self.m);
        self.elements
            .iter()
            .copied()
            .filter(|&s| s != full)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Builds the balanced lattice of a configuration.
pub fn balanced_lattice(cfg: &PointConfiguration) -> BalancedLattice {
    let minimal = minimal_balanced_subsets(cfg);
    let mut closure: std::collections::BTreeSet<SubsetMask> = minimal.iter().copied().collect();
    loop {
        let mut fresh = Vec::new();
        for &a in &closure {
            for &b in &minimal {
                let u = a | b;
                if !closure.contains(&u) {
                    fresh.push(u);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        closure.extend(fresh);
    }
    let elements: Vec<SubsetMask> = closure.into_iter().collect();
    let generators = elements
        .iter()
        .map(|&e| {
            minimal
                .iter()
                .enumerate()
                .filter(|(_, s)| s.is_subset_of(e))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    BalancedLattice {
        m: cfg.m(),
        elements,
        minimal,
        generators,
    }
}

/// Weak-balancedness of every subset of the ground set, indexed by mask.
///
/// Exhaustive scan ascending by mask with the monotone pruning rule:
/// supersets of weakly balanced subsets are weakly balanced, so the
/// feasibility solver only runs on subsets whose maximal proper subsets all
/// failed.
pub fn weak_balance_table(cfg: &PointConfiguration) -> Result<Vec<bool>> {
    let m = cfg.m();
    if m > MAX_SCAN_GROUND {
        return Err(Error::GroundTooLarge {
            size: m,
            limit: MAX_SCAN_GROUND,
        });
    }
    let size = 1usize << m;
    let mut table = vec![false; size];
    for bits in 1u32..size as u32 {
        let mask = SubsetMask::from_bits(bits);
        let inherited = mask
            .iter()
            .any(|i| table[mask.without(i).bits() as usize]);
        table[bits as usize] = inherited || is_weakly_balanced(cfg, mask)?;
    }
    Ok(table)
}

/// All weakly balanced subsets, ascending as masks; includes the full set
/// when weakly balanced.
pub fn weakly_balanced_sets(cfg: &PointConfiguration) -> Result<Vec<SubsetMask>> {
    let table = weak_balance_table(cfg)?;
    Ok((1..table.len())
        .filter(|&i| table[i])
        .map(|i| SubsetMask::from_bits(i as u32))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    pub(crate) fn square_center() -> PointConfiguration {
        PointConfiguration::new(
            vec![
                vec![rat(0, 1), rat(0, 1)],
                vec![rat(1, 1), rat(0, 1)],
                vec![rat(1, 1), rat(1, 1)],
                vec![rat(0, 1), rat(1, 1)],
            ],
            vec![rat(1, 2), rat(1, 2)],
            None,
        )
        .unwrap()
    }

    pub(crate) fn cross_polytope(d: usize) -> PointConfiguration {
        let mut points = Vec::new();
        for i in 0..d {
            for sign in [1i64, -1] {
                let mut p = vec![Rational::zero(); d];
                p[i] = Rational::from_int(sign);
                points.push(p);
            }
        }
        PointConfiguration::new(points, vec![Rational::zero(); d], None).unwrap()
    }

    pub(crate) fn collinear() -> PointConfiguration {
        PointConfiguration::from_int_points(&[&[-1], &[0], &[1]], &[0]).unwrap()
    }

    fn mask(indices: &[usize], m: usize) -> SubsetMask {
        SubsetMask::from_one_based(indices, m).unwrap()
    }

    #[test]
    fn weak_balance_square_examples() {
        let cfg = square_center();
        assert!(is_weakly_balanced(&cfg, mask(&[1, 3], 4)).unwrap());
        assert!(!is_weakly_balanced(&cfg, mask(&[1, 2], 4)).unwrap());
        assert!(is_weakly_balanced(&cfg, mask(&[1, 2, 3], 4)).unwrap());
        assert!(is_weakly_balanced(&cfg, SubsetMask::full(4)).unwrap());
    }

    #[test]
    fn weak_balance_when_reference_is_a_point() {
        let cfg = PointConfiguration::from_int_points(&[&[2, 2], &[5, 5]], &[2, 2]).unwrap();
        assert!(is_weakly_balanced(&cfg, mask(&[1], 2)).unwrap());
        assert!(is_weakly_balanced(&cfg, mask(&[1, 2], 2)).unwrap());
    }

    #[test]
    fn strict_balance_square_examples() {
        let cfg = square_center();
        assert!(is_balanced(&cfg, mask(&[1, 3], 4)).unwrap());
        assert!(!is_balanced(&cfg, mask(&[1, 2, 3], 4)).unwrap());
        assert!(is_balanced(&cfg, SubsetMask::full(4)).unwrap());
    }

    #[test]
    fn singleton_at_reference_is_balanced() {
        let cfg = collinear();
        assert!(is_balanced(&cfg, mask(&[2], 3)).unwrap());
        assert!(!is_balanced(&cfg, mask(&[1], 3)).unwrap());
    }

    #[test]
    fn empty_subset_rejected() {
        let cfg = square_center();
        assert!(matches!(
            is_balanced(&cfg, SubsetMask::EMPTY),
            Err(Error::EmptySubset)
        ));
        assert!(matches!(
            is_weakly_balanced(&cfg, SubsetMask::EMPTY),
            Err(Error::EmptySubset)
        ));
    }

    #[test]
    fn closure_fixes_balanced_sets() {
        let cfg = square_center();
        let s = mask(&[1, 3], 4);
        assert_eq!(balanced_closure(&cfg, s).unwrap(), s);
    }

    #[test]
    fn closure_finds_the_diagonal() {
        let cfg = square_center();
        assert_eq!(
            balanced_closure(&cfg, mask(&[1, 2, 3], 4)).unwrap(),
            mask(&[1, 3], 4)
        );
    }

    #[test]
    fn closure_of_collinear_triple_is_itself() {
        let cfg = collinear();
        let all = SubsetMask::full(3);
        assert_eq!(balanced_closure(&cfg, all).unwrap(), all);
    }

    #[test]
    fn closure_rejects_unbalanced_input() {
        let cfg = square_center();
        assert!(balanced_closure(&cfg, mask(&[1, 2], 4)).is_err());
    }

    #[test]
    fn weight_polytope_square() {
        let cfg = square_center();
        let poly = weight_polytope(&cfg);
        assert_eq!(poly.supports(), vec![mask(&[1, 3], 4), mask(&[2, 4], 4)]);
        assert_eq!(
            poly.vertices()[0].weights.coords(),
            &[rat(1, 2), rat(0, 1), rat(1, 2), rat(0, 1)]
        );
        assert_eq!(poly.dim(), Some(1)); // m - k - 1 = 4 - 2 - 1
    }

    #[test]
    fn weight_polytope_cross_polytope() {
        for d in 2..=3 {
            let cfg = cross_polytope(d);
            let poly = weight_polytope(&cfg);
            assert_eq!(poly.vertices().len(), d);
            for (i, vertex) in poly.vertices().iter().enumerate() {
                assert_eq!(vertex.support, SubsetMask::from_indices([2 * i, 2 * i + 1]));
                for j in vertex.support.iter() {
                    assert_eq!(vertex.weights.coords()[j], rat(1, 2));
                }
            }
            assert_eq!(poly.dim(), Some(2 * d - d - 1));
        }
    }

    #[test]
    fn weight_polytope_empty_when_reference_outside() {
        let cfg = PointConfiguration::from_int_points(&[&[0, 0], &[1, 0]], &[5, 5]).unwrap();
        let poly = weight_polytope(&cfg);
        assert!(poly.is_empty());
        assert_eq!(poly.dim(), None);
    }

    #[test]
    fn minimal_subset_through_square() {
        let cfg = square_center();
        assert_eq!(
            minimal_subset_through(&cfg, SubsetMask::full(4), 1).unwrap(),
            mask(&[2, 4], 4)
        );
        // S itself minimal
        let diag = mask(&[1, 3], 4);
        assert_eq!(minimal_subset_through(&cfg, diag, 0).unwrap(), diag);
    }

    #[test]
    fn minimal_subset_through_cross_polytope() {
        let cfg = cross_polytope(3);
        assert_eq!(
            minimal_subset_through(&cfg, SubsetMask::full(6), 0).unwrap(),
            SubsetMask::from_indices([0, 1])
        );
    }

    #[test]
    fn minimal_subset_through_checks_preconditions() {
        let cfg = square_center();
        // not balanced
        assert!(minimal_subset_through(&cfg, mask(&[1, 2, 3], 4), 0).is_err());
        // v outside S
        assert!(minimal_subset_through(&cfg, mask(&[1, 3], 4), 1).is_err());
    }

    #[test]
    fn lattice_square() {
        let cfg = square_center();
        let lattice = balanced_lattice(&cfg);
        assert_eq!(
            lattice.elements(),
            &[mask(&[1, 3], 4), mask(&[2, 4], 4), SubsetMask::full(4)]
        );
        assert!(lattice.full_set_balanced());
        assert_eq!(lattice.proper_elements().len(), 2);
    }

    #[test]
    fn lattice_cross_polytope_d3() {
        let lattice = balanced_lattice(&cross_polytope(3));
        assert_eq!(lattice.len(), 7); // 2^3 - 1 unions of the three pairs
        assert_eq!(lattice.proper_elements().len(), 6);
        for (idx, &e) in lattice.elements().iter().enumerate() {
            let union = lattice
                .generators(idx)
                .iter()
                .fold(SubsetMask::EMPTY, |acc, &g| acc | lattice.minimal()[g]);
            assert_eq!(union, e);
        }
    }

    #[test]
    fn weakly_balanced_sets_square() {
        let cfg = square_center();
        let sets = weakly_balanced_sets(&cfg).unwrap();
        // diagonals, the four triples, and the full set
        assert_eq!(sets.len(), 7);
        for s in sets {
            assert!(is_weakly_balanced(&cfg, s).unwrap());
        }
    }
}
