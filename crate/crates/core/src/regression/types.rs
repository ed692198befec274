//! Correspondence records, the 3D affine correction map, and fit reports.

use nalgebra::{Matrix3, Matrix4, Vector3};
use serde::{Deserialize, Serialize};

use super::RegressionError;
use crate::geometry::{GeometryError, Point2, Point3, DET_EPS_REL};

/// A matched pixel pair: the same reference point seen by the simulated
/// and the real camera.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correspondence2D2D {
    pub sim: Point2,
    pub real: Point2,
}

/// A pixel observation of a point with known world coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correspondence2D3D {
    pub pixel: Point2,
    pub world: Point3,
}

/// A planned robot position paired with the position it should have
/// reached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correspondence3D3D {
    pub planned: Point3,
    pub corrected: Point3,
}

/// A 3D affine correction `p' = U p + v`, stored as the 4x4 homogeneous
/// matrix `[[U, v], [0, 1]]` with the bottom row exact.
///
/// Serialized as `{"d": [16 row-major numbers]}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CorrectionRepr", into = "CorrectionRepr")]
pub struct Correction3D {
    d: Matrix4<f64>,
}

#[derive(Serialize, Deserialize)]
struct CorrectionRepr {
    #[serde(
        serialize_with = "crate::serde_util::serialize_mat4",
        deserialize_with = "crate::serde_util::deserialize_mat4"
    )]
    d: Matrix4<f64>,
}

impl From<Correction3D> for CorrectionRepr {
    fn from(c: Correction3D) -> Self {
        Self { d: c.d }
    }
}

impl TryFrom<CorrectionRepr> for Correction3D {
    type Error = RegressionError;

    fn try_from(repr: CorrectionRepr) -> Result<Self, Self::Error> {
        Correction3D::new(repr.d)
    }
}

impl Correction3D {
    /// Validate the exact bottom row and the invertibility of the linear
    /// block.
    pub fn new(d: Matrix4<f64>) -> Result<Self, RegressionError> {
        if d.iter().any(|v| !v.is_finite()) {
            return Err(RegressionError::InvalidModel(GeometryError::NonFinite(
                "Correction3D",
            )));
        }
        if d[(3, 0)] != 0.0 || d[(3, 1)] != 0.0 || d[(3, 2)] != 0.0 || d[(3, 3)] != 1.0 {
            return Err(RegressionError::ConstraintViolation {
                what: "correction bottom row must be (0, 0, 0, 1)".to_string(),
            });
        }
        let linear: Matrix3<f64> = d.fixed_view::<3, 3>(0, 0).into_owned();
        let det = linear.determinant();
        let scale = linear.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if det.abs() <= DET_EPS_REL * scale.powi(3) {
            return Err(RegressionError::InvalidModel(GeometryError::SingularMatrix {
                det,
            }));
        }
        Ok(Self { d })
    }

    pub fn identity() -> Self {
        Self {
            d: Matrix4::identity(),
        }
    }

    /// Build from a linear block and a translation.
    pub fn from_parts(linear: Matrix3<f64>, translation: Vector3<f64>) -> Result<Self, RegressionError> {
        let mut d = Matrix4::identity();
        d.fixed_view_mut::<3, 3>(0, 0).copy_from(&linear);
        d.fixed_view_mut::<3, 1>(0, 3).copy_from(&translation);
        Self::new(d)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.d
    }

    pub fn linear(&self) -> Matrix3<f64> {
        self.d.fixed_view::<3, 3>(0, 0).into_owned()
    }

    pub fn translation(&self) -> Vector3<f64> {
        self.d.fixed_view::<3, 1>(0, 3).into_owned()
    }

    /// Apply the correction to a planned position.
    pub fn apply(&self, p: Point3) -> Point3 {
        let v = self.linear() * p.to_vector() + self.translation();
        Point3::from_vector(v)
    }
}

/// Summary statistics of per-point residuals (Euclidean distances, in
/// pixels for image-space fits and world length units for 3D fits).
///
/// `residual_mean` and `residual_std` are the population mean and
/// standard deviation of the per-point distances; `mse` is the mean of
/// their squares.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualStats {
    pub residual_mean: f64,
    pub residual_std: f64,
    pub mse: f64,
    pub n_points: usize,
}

impl ResidualStats {
    pub fn from_residuals(residuals: &[f64]) -> Self {
        let n = residuals.len() as f64;
        let mean = residuals.iter().sum::<f64>() / n;
        let var = residuals.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / n;
        let mse = residuals.iter().map(|r| r * r).sum::<f64>() / n;
        Self {
            residual_mean: mean,
            residual_std: var.sqrt(),
            mse,
            n_points: residuals.len(),
        }
    }
}

/// A fitted model together with its training residual statistics and the
/// condition-number estimate of the (internally normalized) design
/// matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport<M> {
    pub model: M,
    #[serde(flatten)]
    pub stats: ResidualStats,
    pub condition_estimate: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_correction_leaves_points_alone() {
        let c = Correction3D::identity();
        let p = Point3::new(0.3, 0.2, 0.1);
        assert_eq!(c.apply(p), p);
    }

    #[test]
    fn pure_translation_correction() {
        let c = Correction3D::from_parts(Matrix3::identity(), Vector3::new(0.01, 0.0, -0.005))
            .unwrap();
        let out = c.apply(Point3::new(0.3, 0.2, 0.1));
        assert!((out.x - 0.31).abs() < 1e-15);
        assert!((out.y - 0.2).abs() < 1e-15);
        assert!((out.z - 0.095).abs() < 1e-15);
    }

    #[test]
    fn bad_bottom_row_rejected() {
        let mut d = Matrix4::identity();
        d[(3, 0)] = 1e-9;
        assert!(matches!(
            Correction3D::new(d),
            Err(RegressionError::ConstraintViolation { .. })
        ));
    }

    #[test]
    fn singular_linear_block_rejected() {
        let mut d = Matrix4::identity();
        d[(0, 0)] = 0.0;
        d[(1, 1)] = 0.0;
        d[(0, 1)] = 1.0;
        d[(1, 0)] = 1.0;
        d[(2, 2)] = 0.0;
        assert!(Correction3D::new(d).is_err());
    }

    #[test]
    fn stats_of_constant_residuals() {
        let s = ResidualStats::from_residuals(&[2.0, 2.0, 2.0]);
        assert_eq!(s.residual_mean, 2.0);
        assert_eq!(s.residual_std, 0.0);
        assert_eq!(s.mse, 4.0);
        assert_eq!(s.n_points, 3);
    }

    #[test]
    fn correction_json_round_trip() {
        let c = Correction3D::from_parts(
            Matrix3::new(1.01, 0.0, 0.0, 0.0, 0.99, 0.01, 0.0, -0.01, 1.0),
            Vector3::new(0.002, -0.001, 0.0005),
        )
        .unwrap();
        let s = serde_json::to_string(&c).unwrap();
        let back: Correction3D = serde_json::from_str(&s).unwrap();
        assert_eq!(c, back);
    }
}
