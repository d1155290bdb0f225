//! Abstract simplicial complexes and finite posets: the unbalanced complex
//! of a configuration, Alexander duals, order complexes of posets, and the
//! complement map matching dual faces with weakly balanced subsets.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::balanced;
use crate::error::{Error, Result};
use crate::geometry::PointConfiguration;
use crate::subset::SubsetMask;

/// Default cap on the number of simplices materialized for homology.
pub const DEFAULT_FACE_CAP: usize = 200_000;

/// An abstract simplicial complex over a labeled ground set, stored by its
/// inclusion-maximal faces.
///
/// The void complex (no faces at all) and the complex `{∅}` (whose only
/// face is the empty one) are distinct: the former has no facets, the
/// latter has the single empty facet.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimplicialComplex {
    ground: Vec<String>,
    facets: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawComplex {
    ground: Vec<String>,
    facets: Vec<Vec<String>>,
}

impl SimplicialComplex {
    /// The complex with no faces at all.
    pub fn void(ground: Vec<String>) -> Self {
        SimplicialComplex {
            ground,
            facets: Vec::new(),
        }
    }

    /// The complex whose only face is the empty simplex.
    pub fn empty_complex(ground: Vec<String>) -> Self {
        SimplicialComplex {
            ground,
            facets: vec![Vec::new()],
        }
    }

    /// Builds a complex from any family of faces, keeping the maximal ones.
    /// Vertex indices refer to the ground list.
    pub fn from_faces<I>(ground: Vec<String>, faces: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        let n = ground.len();
        let mut sorted: Vec<Vec<usize>> = Vec::new();
        for mut face in faces {
            face.sort_unstable();
            face.dedup();
            if let Some(&bad) = face.iter().find(|&&v| v >= n) {
                return Err(Error::IndexOutOfRange {
                    index: bad,
                    size: n,
                });
            }
            sorted.push(face);
        }
        sorted.sort_by_key(|f| std::cmp::Reverse(f.len()));
        let mut facets: Vec<Vec<usize>> = Vec::new();
        'next: for face in sorted {
            for facet in &facets {
                if is_subface(&face, facet) {
                    continue 'next;
                }
            }
            facets.push(face);
        }
        facets.sort();
        Ok(SimplicialComplex { ground, facets })
    }

    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn is_void(&self) -> bool {
        self.facets.is_empty()
    }

    /// True when the only face is the empty simplex.
    pub fn is_empty_complex(&self) -> bool {
        self.facets.len() == 1 && self.facets[0].is_empty()
    }

    /// Dimension of the complex: `None` for void, `-1` for `{∅}`.
    pub fn dim(&self) -> Option<i64> {
        self.facets
            .iter()
            .map(|f| f.len() as i64 - 1)
            .max()
    }

    pub fn contains_face(&self, face: &[usize]) -> bool {
        let mut sorted = face.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        self.facets.iter().any(|facet| is_subface(&sorted, facet))
    }

    /// All faces grouped by dimension (`by_dim[k]` holds the `k`-faces,
    /// each sorted); the empty face is implicit. Fails when the total count
    /// would exceed `cap`.
    pub fn faces_by_dim(&self, cap: usize) -> Result<Vec<Vec<Vec<usize>>>> {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut count = 0usize;
        for facet in &self.facets {
            let k = facet.len();
            // all nonempty subsets of the facet
            for bits in 1u64..(1u64 << k) {
                let face: Vec<usize> = (0..k)
                    .filter(|i| bits & (1 << i) != 0)
                    .map(|i| facet[i])
                    .collect();
                if seen.insert(face) {
                    count += 1;
                    if count > cap {
                        return Err(Error::FaceCapExceeded { cap });
                    }
                }
            }
        }
        let top = seen.iter().map(|f| f.len()).max().unwrap_or(0);
        let mut by_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); top];
        for face in seen {
            by_dim[face.len() - 1].push(face);
        }
        Ok(by_dim)
    }

    /// Face counts by dimension, starting at dimension 0; the empty face is
    /// not included.
    pub fn f_vector(&self, cap: usize) -> Result<Vec<usize>> {
        Ok(self
            .faces_by_dim(cap)?
            .iter()
            .map(|faces| faces.len())
            .collect())
    }

    pub fn to_json(&self) -> String {
        let raw = RawComplex {
            ground: self.ground.clone(),
            facets: self
                .facets
                .iter()
                .map(|f| f.iter().map(|&v| self.ground[v].clone()).collect())
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("complex serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: RawComplex =
            serde_json::from_str(s).map_err(|e| Error::Invalid(format!("complex JSON: {e}")))?;
        let index: BTreeMap<&str, usize> = raw
            .ground
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        if index.len() != raw.ground.len() {
            return Err(Error::Invalid("ground labels must be distinct".into()));
        }
        let faces: Result<Vec<Vec<usize>>> = raw
            .facets
            .iter()
            .map(|facet| {
                facet
                    .iter()
                    .map(|l| {
                        index.get(l.as_str()).copied().ok_or_else(|| {
                            Error::Invalid(format!("facet vertex {l:?} not in ground set"))
                        })
                    })
                    .collect()
            })
            .collect();
        SimplicialComplex::from_faces(raw.ground, faces?)
    }
}

fn is_subface(face: &[usize], facet: &[usize]) -> bool {
    // both sorted
    let mut it = facet.iter();
    face.iter().all(|v| it.any(|w| w == v))
}

/// A finite poset with an explicit comparability table. Construction checks
/// antisymmetry and transitivity.
#[derive(Clone, Debug)]
pub struct Poset {
    labels: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl Poset {
    pub fn new(labels: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = labels.len();
        if leq.len() != n || leq.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch(
                "comparability table must be square".into(),
            ));
        }
        for i in 0..n {
            if !leq[i][i] {
                return Err(Error::Invalid("relation must be reflexive".into()));
            }
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::Invalid("relation must be antisymmetric".into()));
                }
                for k in 0..n {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        return Err(Error::Invalid("relation must be transitive".into()));
                    }
                }
            }
        }
        Ok(Poset { labels, leq })
    }

    /// Inclusion order on a family of masks. Elements keep the given order,
    /// which must refine inclusion (ascending masks do).
    pub fn from_masks(masks: &[SubsetMask]) -> Self {
        let labels = masks.iter().map(|m| m.to_string()).collect();
        let leq = masks
            .iter()
            .map(|a| masks.iter().map(|b| a.is_subset_of(*b)).collect())
            .collect();
        Poset { labels, leq }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq[i][j]
    }

    /// Cover relation: `i < j` with nothing strictly between.
    fn covers(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| {
                        self.lt(i, j) && !(0..n).any(|k| self.lt(i, k) && self.lt(k, j))
                    })
                    .collect()
            })
            .collect()
    }
}

/// The order complex of a poset: vertices are the elements, faces are the
/// chains. Facets are the maximal chains; the empty poset yields `{∅}`.
pub fn order_complex(poset: &Poset) -> SimplicialComplex {
    let n = poset.len();
    if n == 0 {
        return SimplicialComplex::empty_complex(Vec::new());
    }
    let covers = poset.covers();
    let minimal: Vec<usize> = (0..n)
        .filter(|&j| !(0..n).any(|i| poset.lt(i, j)))
        .collect();
    let maximal: Vec<bool> = (0..n).map(|i| covers[i].is_empty()).collect();

    let mut facets = Vec::new();
    let mut stack: Vec<(Vec<usize>, usize)> = minimal.into_iter().map(|i| (vec![i], i)).collect();
    while let Some((chain, last)) = stack.pop() {
        if maximal[last] {
            facets.push(chain);
            continue;
        }
        for &next in &covers[last] {
            let mut extended = chain.clone();
            extended.push(next);
            stack.push((extended, next));
        }
    }
    SimplicialComplex::from_faces(poset.labels().to_vec(), facets)
        .expect("chains index the poset elements")
}

fn mask_to_face(mask: SubsetMask) -> Vec<usize> {
    mask.iter().collect()
}

fn face_to_mask(face: &[usize]) -> SubsetMask {
    SubsetMask::from_indices(face.iter().copied())
}

/// The complex of subsets whose convex hull misses the reference point.
///
/// Built from the full weak-balancedness scan; faces are exactly the
/// non-weakly-balanced subsets, which are closed under taking subsets.
pub fn unbalanced_complex(cfg: &PointConfiguration) -> Result<SimplicialComplex> {
    let table = balanced::weak_balance_table(cfg)?;
    let faces = (1..table.len())
        .filter(|&bits| !table[bits])
        .map(|bits| mask_to_face(SubsetMask::from_bits(bits as u32)));
    // the empty face is always unbalanced, so the complex is never void
    SimplicialComplex::from_faces(cfg.labels(), faces.chain(std::iter::once(Vec::new())))
}

/// The Alexander dual `K* = {σ : ground \ σ ∉ K}` on the same ground set.
///
/// Facets of the dual are complements of the minimal non-faces of `K`.
pub fn alexander_dual(complex: &SimplicialComplex) -> Result<SimplicialComplex> {
    let n = complex.ground().len();
    if n > balanced::MAX_SCAN_GROUND {
        return Err(Error::GroundTooLarge {
            size: n,
            limit: balanced::MAX_SCAN_GROUND,
        });
    }
    // face table of K by mask, from the facets downward
    let size = 1usize << n;
    let mut is_face = vec![false; size];
    for facet in complex.facets() {
        is_face[face_to_mask(facet).bits() as usize] = true;
    }
    for bits in (0..size).rev() {
        if is_face[bits] {
            let mask = SubsetMask::from_bits(bits as u32);
            for i in mask.iter() {
                is_face[mask.without(i).bits() as usize] = true;
            }
        }
    }

    let mut dual_facets = Vec::new();
    for bits in 0..size {
        if is_face[bits] {
            continue;
        }
        let mask = SubsetMask::from_bits(bits as u32);
        // minimal non-face: every maximal proper subset is a face
        if mask.iter().all(|i| is_face[mask.without(i).bits() as usize]) {
            dual_facets.push(mask_to_face(mask.complement_in(n)));
        }
    }
    if dual_facets.is_empty() {
        // K contains the full ground set, so K is the full simplex
        return Ok(SimplicialComplex::void(complex.ground().to_vec()));
    }
    SimplicialComplex::from_faces(complex.ground().to_vec(), dual_facets)
}

/// The poset of nonempty faces of a complex under inclusion, as masks over
/// the complex's ground set.
pub fn face_poset(complex: &SimplicialComplex, cap: usize) -> Result<(Poset, Vec<SubsetMask>)> {
    let faces = complex.faces_by_dim(cap)?;
    let mut masks: Vec<SubsetMask> = faces
        .iter()
        .flatten()
        .map(|f| face_to_mask(f))
        .collect();
    masks.sort();
    Ok((Poset::from_masks(&masks), masks))
}

/// Outcome of verifying the complement map `σ ↦ V \ σ` between nonempty
/// faces of the Alexander dual and weakly balanced proper subsets.
pub struct ComplementIso {
    pub holds: bool,
    /// The bijection: (dual face, its complement) pairs, ascending.
    pub pairs: Vec<(SubsetMask, SubsetMask)>,
    pub counterexample: Option<String>,
}

/// Checks that complementation is an inclusion-reversing bijection from the
/// nonempty faces of `K*(V, r)` onto the weakly balanced proper subsets of
/// `V`, hence a simplicial isomorphism between the barycentric subdivision
/// `sd(K*)` and the order complex of the weakly balanced poset.
pub fn complement_iso(cfg: &PointConfiguration) -> Result<ComplementIso> {
    let m = cfg.m();
    let full = SubsetMask::full(m);
    let unbalanced = unbalanced_complex(cfg)?;
    let dual = alexander_dual(&unbalanced)?;
    let (_, dual_faces) = if dual.is_void() {
        (Poset::from_masks(&[]), Vec::new())
    } else {
        face_poset(&dual, DEFAULT_FACE_CAP)?
    };

    let weakly: BTreeSet<SubsetMask> = balanced::weakly_balanced_sets(cfg)?
        .into_iter()
        .filter(|&s| s != full)
        .collect();

    let mut pairs = Vec::new();
    let mut images = BTreeSet::new();
    for &face in &dual_faces {
        let complement = face.complement_in(m);
        if !weakly.contains(&complement) {
            return Ok(ComplementIso {
                holds: false,
                pairs,
                counterexample: Some(format!(
                    "dual face {face} maps to {complement}, which is not a weakly balanced proper subset"
                )),
            });
        }
        images.insert(complement);
        pairs.push((face, complement));
    }
    if images.len() != dual_faces.len() {
        return Ok(ComplementIso {
            holds: false,
            pairs,
            counterexample: Some("complement map is not injective".into()),
        });
    }
    if let Some(&missing) = weakly.difference(&images).next() {
        return Ok(ComplementIso {
            holds: false,
            pairs,
            counterexample: Some(format!(
                "weakly balanced subset {missing} is not the complement of any dual face"
            )),
        });
    }
    // inclusion reversal both ways over all pairs
    for &(a, ca) in &pairs {
        for &(b, cb) in &pairs {
            if a.is_subset_of(b) != cb.is_subset_of(ca) {
                return Ok(ComplementIso {
                    holds: false,
                    pairs,
                    counterexample: Some(format!(
                        "complementation fails to reverse inclusion on {a}, {b}"
                    )),
                });
            }
        }
    }
    Ok(ComplementIso {
        holds: true,
        pairs,
        counterexample: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn labels(n: usize) -> Vec<String> {
        (1..=n).map(|i| i.to_string()).collect()
    }

    fn square_center() -> PointConfiguration {
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

    fn triangle_barycenter() -> PointConfiguration {
        PointConfiguration::new(
            vec![
                vec![rat(0, 1), rat(0, 1)],
                vec![rat(1, 1), rat(0, 1)],
                vec![rat(0, 1), rat(1, 1)],
            ],
            vec![rat(1, 3), rat(1, 3)],
            None,
        )
        .unwrap()
    }

    #[test]
    fn facets_absorb_subfaces() {
        let k =
            SimplicialComplex::from_faces(labels(3), vec![vec![0, 1], vec![0], vec![1, 0]])
                .unwrap();
        assert_eq!(k.facets(), &[vec![0, 1]]);
        assert!(k.contains_face(&[1]));
        assert!(!k.contains_face(&[2]));
    }

    #[test]
    fn void_and_empty_are_distinct() {
        let void = SimplicialComplex::void(labels(2));
        let empty = SimplicialComplex::empty_complex(labels(2));
        assert!(void.is_void());
        assert!(!empty.is_void());
        assert!(empty.is_empty_complex());
        assert_eq!(void.dim(), None);
        assert_eq!(empty.dim(), Some(-1));
    }

    #[test]
    fn face_enumeration_and_cap() {
        let k = SimplicialComplex::from_faces(labels(3), vec![vec![0, 1, 2]]).unwrap();
        let faces = k.faces_by_dim(100).unwrap();
        assert_eq!(faces[0].len(), 3);
        assert_eq!(faces[1].len(), 3);
        assert_eq!(faces[2].len(), 1);
        assert!(matches!(
            k.faces_by_dim(5),
            Err(Error::FaceCapExceeded { cap: 5 })
        ));
    }

    #[test]
    fn unbalanced_complex_square_is_a_four_cycle() {
        let k = unbalanced_complex(&square_center()).unwrap();
        assert_eq!(
            k.facets(),
            &[vec![0, 1], vec![0, 3], vec![1, 2], vec![2, 3]]
        );
    }

    #[test]
    fn unbalanced_complex_triangle_is_its_boundary() {
        let k = unbalanced_complex(&triangle_barycenter()).unwrap();
        assert_eq!(k.facets(), &[vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn unbalanced_complex_collinear_is_two_points() {
        let cfg = PointConfiguration::from_int_points(&[&[-1], &[0], &[1]], &[0]).unwrap();
        let k = unbalanced_complex(&cfg).unwrap();
        assert_eq!(k.facets(), &[vec![0], vec![2]]);
    }

    #[test]
    fn alexander_dual_of_triangle_boundary_is_empty_complex() {
        let boundary =
            SimplicialComplex::from_faces(labels(3), vec![vec![0, 1], vec![0, 2], vec![1, 2]])
                .unwrap();
        let dual = alexander_dual(&boundary).unwrap();
        assert!(dual.is_empty_complex());
    }

    #[test]
    fn alexander_dual_of_two_points() {
        let k = SimplicialComplex::from_faces(labels(2), vec![vec![0], vec![1]]).unwrap();
        let dual = alexander_dual(&k).unwrap();
        assert!(dual.is_empty_complex());
    }

    #[test]
    fn alexander_dual_is_an_involution() {
        let k = SimplicialComplex::from_faces(
            labels(4),
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
        )
        .unwrap();
        let back = alexander_dual(&alexander_dual(&k).unwrap()).unwrap();
        assert_eq!(back, k);
    }

    #[test]
    fn order_complex_antichain_is_two_points() {
        let poset = Poset::from_masks(&[
            SubsetMask::from_indices([0]),
            SubsetMask::from_indices([1]),
        ]);
        let k = order_complex(&poset);
        assert_eq!(k.facets().len(), 2);
        assert_eq!(k.dim(), Some(0));
    }

    #[test]
    fn order_complex_chain_is_a_simplex() {
        let poset = Poset::from_masks(&[
            SubsetMask::from_indices([0]),
            SubsetMask::from_indices([0, 1]),
            SubsetMask::from_indices([0, 1, 2]),
        ]);
        let k = order_complex(&poset);
        assert_eq!(k.facets(), &[vec![0, 1, 2]]);
    }

    #[test]
    fn order_complex_of_triangle_face_poset_is_a_six_cycle() {
        // proper faces of a triangle: three vertices, three edges
        let masks = [
            SubsetMask::from_indices([0]),
            SubsetMask::from_indices([1]),
            SubsetMask::from_indices([0, 1]),
            SubsetMask::from_indices([2]),
            SubsetMask::from_indices([0, 2]),
            SubsetMask::from_indices([1, 2]),
        ];
        let k = order_complex(&Poset::from_masks(&masks));
        let f = k.f_vector(1000).unwrap();
        assert_eq!(f, vec![6, 6]);
    }

    #[test]
    fn order_complex_of_empty_poset_is_empty_complex() {
        let k = order_complex(&Poset::from_masks(&[]));
        assert!(k.is_empty_complex());
    }

    #[test]
    fn poset_axioms_checked() {
        let bad = Poset::new(
            vec!["a".into(), "b".into()],
            vec![vec![true, true], vec![true, true]],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn complement_iso_square() {
        let iso = complement_iso(&square_center()).unwrap();
        assert!(iso.holds);
        // weakly balanced proper subsets: two diagonals, four triples
        assert_eq!(iso.pairs.len(), 6);
    }

    #[test]
    fn complement_iso_triangle_both_sides_empty() {
        let iso = complement_iso(&triangle_barycenter()).unwrap();
        assert!(iso.holds);
        assert!(iso.pairs.is_empty());
    }

    #[test]
    fn complex_json_round_trip() {
        let k = unbalanced_complex(&square_center()).unwrap();
        let json = k.to_json();
        let back = SimplicialComplex::from_json(&json).unwrap();
        assert_eq!(back, k);
    }
}
