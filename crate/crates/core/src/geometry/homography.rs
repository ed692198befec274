//! 3x3 plane-to-plane projective maps.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use super::{GeometryError, Point2, DET_EPS_REL, HOMOGENEOUS_EPS_REL};

/// Transformation family of a [`Homography`], by decreasing degrees of
/// freedom: projective (8), affine (6), two-parameter (2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HomographyFamily {
    Projective,
    Affine,
    TwoDof,
}

impl HomographyFamily {
    /// Free parameters of the family.
    pub fn dof(&self) -> usize {
        match self {
            Self::Projective => 8,
            Self::Affine => 6,
            Self::TwoDof => 2,
        }
    }

    /// Minimum point pairs required to determine a map of this family.
    pub fn min_points(&self) -> usize {
        match self {
            Self::Projective => 4,
            Self::Affine => 3,
            Self::TwoDof => 1,
        }
    }
}

/// An invertible 3x3 map between two image planes, normalized so the
/// bottom-right entry is exactly 1.
///
/// Family constraints on the block structure
/// `[[A, b], [c, 1]]` (A 2x2, b 2x1, c 1x2):
///
/// - `Projective`: none beyond the normalization.
/// - `Affine`: `c = 0`.
/// - `TwoDof`: `c = 0` and either diagonal scaling (`A = diag(sx, sy)`,
///   `b = 0`) or pure translation (`A = I`, `b` free). Both two-parameter
///   conventions are accepted by validation; fitting picks one explicitly.
///
/// Serialized as `{"m": [9 row-major numbers], "family": "..."}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HomographyRepr", into = "HomographyRepr")]
pub struct Homography {
    m: Matrix3<f64>,
    family: HomographyFamily,
}

#[derive(Serialize, Deserialize)]
struct HomographyRepr {
    #[serde(
        serialize_with = "crate::serde_util::serialize_mat3",
        deserialize_with = "crate::serde_util::deserialize_mat3"
    )]
    m: Matrix3<f64>,
    family: HomographyFamily,
}

impl From<Homography> for HomographyRepr {
    fn from(h: Homography) -> Self {
        Self {
            m: h.m,
            family: h.family,
        }
    }
}

impl TryFrom<HomographyRepr> for Homography {
    type Error = GeometryError;

    fn try_from(r: HomographyRepr) -> Result<Self, Self::Error> {
        Homography::new(r.m, r.family)
    }
}

impl Homography {
    /// Build a homography from a matrix, rescaling so `m[2][2] == 1` and
    /// validating invertibility and the family block constraints.
    pub fn new(m: Matrix3<f64>, family: HomographyFamily) -> Result<Self, GeometryError> {
        if m.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::NonFinite("Homography"));
        }
        let scale = m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        let w = m[(2, 2)];
        if w.abs() <= HOMOGENEOUS_EPS_REL * scale {
            return Err(GeometryError::SingularMatrix { det: w });
        }
        let m = m / w;
        let det = m.determinant();
        let max_entry = m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if det.abs() <= DET_EPS_REL * max_entry.powi(3) {
            return Err(GeometryError::SingularMatrix { det });
        }
        let h = Self { m, family };
        h.check_family()?;
        Ok(h)
    }

    /// The identity map (projective family).
    pub fn identity() -> Self {
        Self {
            m: Matrix3::identity(),
            family: HomographyFamily::Projective,
        }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    pub fn family(&self) -> HomographyFamily {
        self.family
    }

    fn check_family(&self) -> Result<(), GeometryError> {
        let m = &self.m;
        let violation = Err(GeometryError::FamilyViolation {
            family: self.family,
        });
        match self.family {
            HomographyFamily::Projective => Ok(()),
            HomographyFamily::Affine => {
                if m[(2, 0)] != 0.0 || m[(2, 1)] != 0.0 {
                    violation
                } else {
                    Ok(())
                }
            }
            HomographyFamily::TwoDof => {
                if m[(2, 0)] != 0.0 || m[(2, 1)] != 0.0 {
                    return violation;
                }
                let scaling = m[(0, 1)] == 0.0
                    && m[(1, 0)] == 0.0
                    && m[(0, 2)] == 0.0
                    && m[(1, 2)] == 0.0;
                let translation =
                    m[(0, 0)] == 1.0 && m[(1, 1)] == 1.0 && m[(0, 1)] == 0.0 && m[(1, 0)] == 0.0;
                if scaling || translation {
                    Ok(())
                } else {
                    violation
                }
            }
        }
    }

    /// Map an image point through the homography with the default
    /// degeneracy threshold.
    pub fn apply(&self, v: Point2) -> Result<Point2, GeometryError> {
        self.apply_with(v, HOMOGENEOUS_EPS_REL)
    }

    /// Map an image point, declaring degeneracy when the homogeneous
    /// denominator falls below `eps_rel` times the largest matrix entry.
    pub fn apply_with(&self, v: Point2, eps_rel: f64) -> Result<Point2, GeometryError> {
        v.check_finite()?;
        let m = &self.m;
        let w = m[(2, 0)] * v.x + m[(2, 1)] * v.y + m[(2, 2)];
        let scale = m.iter().fold(0.0f64, |acc, e| acc.max(e.abs()));
        if w.abs() <= eps_rel * scale {
            return Err(GeometryError::DegeneratePoint { w });
        }
        let hx = m[(0, 0)] * v.x + m[(0, 1)] * v.y + m[(0, 2)];
        let hy = m[(1, 0)] * v.x + m[(1, 1)] * v.y + m[(1, 2)];
        Ok(Point2::new(hx / w, hy / w))
    }

    /// The inverse map. Every family here is closed under inversion.
    pub fn inverse(&self) -> Result<Homography, GeometryError> {
        let inv = self
            .m
            .try_inverse()
            .ok_or(GeometryError::SingularMatrix { det: 0.0 })?;
        Homography::new(inv, self.family)
    }

    /// Row-major entries, for reporting.
    pub fn to_row_major(&self) -> [f64; 9] {
        let m = &self.m;
        [
            m[(0, 0)],
            m[(0, 1)],
            m[(0, 2)],
            m[(1, 0)],
            m[(1, 1)],
            m[(1, 2)],
            m[(2, 0)],
            m[(2, 1)],
            m[(2, 2)],
        ]
    }
}

/// Homogeneous image coordinates of `p` as a column vector.
pub(crate) fn homogeneous2(p: Point2) -> Vector3<f64> {
    Vector3::new(p.x, p.y, 1.0)
}
