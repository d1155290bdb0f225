//! Point configurations: a finite list of rational points together with a
//! reference point, plus the affine-dimension and relative-interior tests
//! and the central-projection reduction from conical instances.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Rational, RationalMatrix};
use crate::lp;
use crate::subset::{SubsetMask, MAX_GROUND};

/// `m` rational points in `Q^d` plus a reference point `r`.
///
/// Duplicate points are allowed and treated as distinct labeled elements.
/// The reference point is not required to lie in the hull; hypothesis checks
/// are explicit operations, never construction-time assumptions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointConfiguration {
    points: Vec<Vec<Rational>>,
    r: Vec<Rational>,
    labels: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct RawInstance {
    points: Vec<Vec<Rational>>,
    r: Vec<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl PointConfiguration {
    pub fn new(
        points: Vec<Vec<Rational>>,
        r: Vec<Rational>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let m = points.len();
        if m == 0 {
            return Err(Error::Invalid("at least one point required".into()));
        }
        if m > MAX_GROUND {
            return Err(Error::GroundTooLarge {
                size: m,
                limit: MAX_GROUND,
            });
        }
        let d = r.len();
        if let Some(p) = points.iter().find(|p| p.len() != d) {
            return Err(Error::DimensionMismatch(format!(
                "point has dimension {}, reference point has dimension {}",
                p.len(),
                d
            )));
        }
        if let Some(labels) = &labels {
            if labels.len() != m {
                return Err(Error::Invalid(format!(
                    "{} labels for {} points",
                    labels.len(),
                    m
                )));
            }
            let mut sorted = labels.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != m {
                return Err(Error::Invalid("labels must be distinct".into()));
            }
        }
        Ok(PointConfiguration { points, r, labels })
    }

    /// Convenience constructor from integer coordinates.
    pub fn from_int_points(points: &[&[i64]], r: &[i64]) -> Result<Self> {
        PointConfiguration::new(
            points
                .iter()
                .map(|p| p.iter().map(|&x| Rational::from_int(x)).collect())
                .collect(),
            r.iter().map(|&x| Rational::from_int(x)).collect(),
            None,
        )
    }

    /// Number of points.
    pub fn m(&self) -> usize {
        self.points.len()
    }

    /// Ambient dimension `d`.
    pub fn ambient_dim(&self) -> usize {
        self.r.len()
    }

    pub fn point(&self, i: usize) -> &[Rational] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn reference(&self) -> &[Rational] {
        &self.r
    }

    /// Display label of point `i`: stored label, or its 1-based index.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(labels) => labels[i].clone(),
            None => (i + 1).to_string(),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.m()).map(|i| self.label(i)).collect()
    }

    pub fn full_mask(&self) -> SubsetMask {
        SubsetMask::full(self.m())
    }

    /// The `d x |S|` matrix whose columns are the points of `S`.
    pub fn column_matrix(&self, subset: SubsetMask) -> RationalMatrix {
        let cols: Vec<Vec<Rational>> = subset.iter().map(|i| self.points[i].clone()).collect();
        RationalMatrix::from_columns(cols).expect("points share a dimension")
    }

    /// Dimension of the affine hull of the points: the rank of the matrix
    /// with columns `v_i - v_1`.
    pub fn affine_dim(&self) -> usize {
        affine_dim_of(&self.points)
    }

    /// Whether `r` lies in the relative interior of `conv(V)`: true iff some
    /// weight vector has full support.
    pub fn in_relint_hull(&self) -> bool {
        let sys = lp::StandardSystem::for_subset(self, self.full_mask());
        match lp::relint_point(&sys) {
            Some(w) => w.support().len() == self.m(),
            None => false,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Invalid(format!("instance JSON: {e}")))
    }
}

impl Serialize for PointConfiguration {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RawInstance {
            points: self.points.clone(),
            r: self.r.clone(),
            labels: self.labels.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PointConfiguration {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let raw = RawInstance::deserialize(deserializer)?;
        PointConfiguration::new(raw.points, raw.r, raw.labels).map_err(serde::de::Error::custom)
    }
}

/// Affine dimension of a point list.
pub fn affine_dim_of(points: &[Vec<Rational>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = &points[0];
    let rows: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    RationalMatrix::from_rows(rows)
        .expect("points share a dimension")
        .rank()
}

/// Central projection of a conical instance onto the hyperplane
/// `{x : <x, r> = |r|^2}`.
///
/// Each point maps to `v' = (|r|^2 / <v, r>) v`, which requires
/// `<v, r> > 0`; the reference point of the result is `r` itself. A subset
/// is balanced in the conical sense (its hull's relative interior meets the
/// open ray through `r`) iff it is r-balanced in the projected instance.
pub fn central_projection(
    points: &[Vec<Rational>],
    r: &[Rational],
) -> Result<PointConfiguration> {
    let r_norm2: Rational = r.iter().map(|x| x * x).sum();
    if r_norm2.is_zero() {
        return Err(Error::Precondition("reference point must be nonzero".into()));
    }
    let mut projected = Vec::with_capacity(points.len());
    for (index, v) in points.iter().enumerate() {
        if v.len() != r.len() {
            return Err(Error::DimensionMismatch(format!(
                "point {index} has dimension {}, reference has {}",
                v.len(),
                r.len()
            )));
        }
        let pairing: Rational = v.iter().zip(r).map(|(a, b)| a * b).sum();
        if !pairing.is_positive() {
            return Err(Error::NonPositivePairing { index });
        }
        let scale = &r_norm2 / &pairing;
        projected.push(v.iter().map(|x| x * &scale).collect());
    }
    PointConfiguration::new(projected, r.to_vec(), None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn affine_dim_single_point() {
        let cfg = PointConfiguration::from_int_points(&[&[3, 4, 5]], &[0, 0, 0]).unwrap();
        assert_eq!(cfg.affine_dim(), 0);
    }

    #[test]
    fn affine_dim_planar_square_in_q3() {
        let cfg = PointConfiguration::from_int_points(
            &[&[0, 0, 1], &[1, 0, 1], &[1, 1, 1], &[0, 1, 1]],
            &[0, 0, 1],
        )
        .unwrap();
        assert_eq!(cfg.affine_dim(), 2);
    }

    #[test]
    fn relint_hull_examples() {
        let triangle = PointConfiguration::new(
            vec![
                vec![rat(0, 1), rat(0, 1)],
                vec![rat(1, 1), rat(0, 1)],
                vec![rat(0, 1), rat(1, 1)],
            ],
            vec![rat(1, 3), rat(1, 3)],
            None,
        )
        .unwrap();
        assert!(triangle.in_relint_hull());

        let segment =
            PointConfiguration::from_int_points(&[&[0], &[1]], &[1]).unwrap();
        assert!(!segment.in_relint_hull());

        let square_edge_mid = PointConfiguration::new(
            vec![
                vec![rat(0, 1), rat(0, 1)],
                vec![rat(1, 1), rat(0, 1)],
                vec![rat(1, 1), rat(1, 1)],
                vec![rat(0, 1), rat(1, 1)],
            ],
            vec![rat(1, 2), rat(0, 1)],
            None,
        )
        .unwrap();
        assert!(!square_edge_mid.in_relint_hull());
    }

    #[test]
    fn central_projection_formula() {
        let projected = central_projection(
            &[
                vec![rat(2, 1), rat(0, 1)],
                vec![rat(0, 1), rat(3, 1)],
            ],
            &[rat(1, 1), rat(1, 1)],
        )
        .unwrap();
        assert_eq!(projected.point(0), &[rat(2, 1), rat(0, 1)]);
        assert_eq!(projected.point(1), &[rat(0, 1), rat(2, 1)]);
    }

    #[test]
    fn central_projection_fixes_the_hyperplane() {
        // <v, r> = |r|^2 already
        let projected = central_projection(
            &[vec![rat(2, 1), rat(0, 1)], vec![rat(0, 1), rat(2, 1)]],
            &[rat(1, 1), rat(1, 1)],
        )
        .unwrap();
        assert_eq!(projected.point(0), &[rat(2, 1), rat(0, 1)]);
        assert_eq!(projected.point(1), &[rat(0, 1), rat(2, 1)]);
    }

    #[test]
    fn central_projection_rejects_nonpositive_pairing() {
        let err = central_projection(
            &[vec![rat(0, 1), rat(1, 1)], vec![rat(1, 1), rat(-1, 1)]],
            &[rat(1, 1), rat(1, 1)],
        )
        .unwrap_err();
        match err {
            Error::NonPositivePairing { index } => assert_eq!(index, 1),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn instance_json_round_trip() {
        let json = r#"{"points": [["0","0"],["1","0"],["0","1"]], "r": ["1/3","1/3"], "labels": ["a","b","c"]}"#;
        let cfg = PointConfiguration::from_json(json).unwrap();
        assert_eq!(cfg.m(), 3);
        assert_eq!(cfg.label(2), "c");
        let back = PointConfiguration::from_json(&cfg.to_json()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_ragged_points() {
        assert!(PointConfiguration::new(
            vec![vec![rat(0, 1)], vec![rat(0, 1), rat(1, 1)]],
            vec![rat(0, 1)],
            None,
        )
        .is_err());
    }
}
