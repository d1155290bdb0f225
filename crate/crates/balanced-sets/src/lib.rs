//! Exact-arithmetic machinery for r-balanced subsets of a finite point
//! configuration: weight-polytope vertex enumeration, the lattice of
//! balanced subsets, the unbalanced complex and its Alexander dual, and
//! reduced integer homology used to certify the expected sphere profiles.
//!
//! Everything is computed over arbitrary-precision rationals; there is no
//! floating point on any decision path.
//!
//! Start with [`geometry::PointConfiguration`], then:
//!
//! - [`balanced`] decides weak/strict balancedness of subsets, enumerates
//!   the vertices of the weight polytope, and builds the balanced lattice;
//! - [`complex`] constructs the unbalanced complex, Alexander duals, and
//!   order complexes of posets;
//! - [`homology`] computes reduced integer homology and sphere profiles;
//! - [`games`] specializes to classical balanced collections and the
//!   Bondareva-Shapley core test;
//! - [`verify`] runs seeded end-to-end verification campaigns.
//!
//! Runnable demonstrations of each capability live under `examples/`.

pub mod error;
pub mod linalg;
pub mod subset;
pub mod geometry;
pub mod lp;

pub mod balanced;
pub use balanced::{balanced_closure, balanced_lattice, is_balanced, is_weakly_balanced, minimal_balanced_subsets, minimal_subset_through, weight_polytope, BalancedLattice, WeightPolytope};
pub mod complex;
pub use complex::{alexander_dual, complement_iso, face_poset, order_complex, unbalanced_complex, ComplementIso, Poset, SimplicialComplex};
pub mod homology;
pub use homology::{boundary_matrices, euler_characteristic, is_sphere_profile, reduced_homology, HomologyProfile};
pub use error::{Error, Result};
pub use geometry::{central_projection, PointConfiguration};
pub use linalg::{smith_normal_form, IntMatrix, Rational, RationalMatrix};
pub use lp::{feasible_point, max_coordinate, relint_point, CoordinateMax, StandardSystem, WeightVector};
pub use subset::SubsetMask;
pub mod cli;
