//! Algebraic ellipse fitting: total least squares on the conic equation,
//! solved in normalized coordinates for conditioning.

use nalgebra::{DMatrix, Matrix3};

use super::TwinError;
use crate::geometry::Point2;
use crate::regression::lstsq::normalize_points;

/// A fitted ellipse: center, semi-axes (`semi_major >= semi_minor`) and
/// the major-axis angle in radians, normalized to `[0, pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct EllipseParams {
    pub center: Point2,
    pub semi_major: f64,
    pub semi_minor: f64,
    pub angle: f64,
}

impl EllipseParams {
    /// Point on the ellipse at parameter `t` (0 = major-positive end).
    pub fn point_at(&self, t: f64) -> Point2 {
        let (s, c) = self.angle.sin_cos();
        let x = self.semi_major * t.cos();
        let y = self.semi_minor * t.sin();
        Point2::new(
            self.center.x + c * x - s * y,
            self.center.y + s * x + c * y,
        )
    }
}

/// Fit the conic `a x^2 + b xy + c y^2 + d x + e y + f = 0` to the
/// points by SVD nullspace and extract ellipse parameters.
///
/// Needs at least 6 points; rank deficiency or a non-elliptical conic is
/// a fit failure.
pub(crate) fn fit_ellipse(points: &[Point2], ratio_eps: f64) -> Result<EllipseParams, TwinError> {
    if points.len() < 6 {
        return Err(TwinError::FitFailure {
            detail: format!("need at least 6 arc points, got {}", points.len()),
        });
    }
    let (norm, t) = normalize_points(points);

    let n = norm.len();
    let mut design = DMatrix::<f64>::zeros(n, 6);
    for (i, p) in norm.iter().enumerate() {
        design[(i, 0)] = p.x * p.x;
        design[(i, 1)] = p.x * p.y;
        design[(i, 2)] = p.y * p.y;
        design[(i, 3)] = p.x;
        design[(i, 4)] = p.y;
        design[(i, 5)] = 1.0;
    }
    let svd = design.svd(true, true);
    let mut sigma_max = 0.0f64;
    let mut min_idx = 0usize;
    let mut sigma_min = f64::INFINITY;
    for (i, s) in svd.singular_values.iter().enumerate() {
        sigma_max = sigma_max.max(*s);
        if *s < sigma_min {
            sigma_min = *s;
            min_idx = i;
        }
    }
    let rank = svd
        .singular_values
        .iter()
        .filter(|s| **s > sigma_max * ratio_eps)
        .count();
    if rank < 5 {
        return Err(TwinError::FitFailure {
            detail: format!("conic design matrix rank {rank}, need 5"),
        });
    }
    let v_t = svd.v_t.as_ref().expect("svd computed with v");
    let coef = v_t.row(min_idx);

    // Conic matrix in normalized coordinates, then pulled back through t:
    // q_raw = t^T q_norm t.
    let q_norm = Matrix3::new(
        coef[0],
        coef[1] / 2.0,
        coef[3] / 2.0,
        coef[1] / 2.0,
        coef[2],
        coef[4] / 2.0,
        coef[3] / 2.0,
        coef[4] / 2.0,
        coef[5],
    );
    let q = t.transpose() * q_norm * t;
    ellipse_from_conic(&q)
}

fn ellipse_from_conic(q: &Matrix3<f64>) -> Result<EllipseParams, TwinError> {
    // Sign-normalize so the quadratic form is positive definite for an
    // ellipse.
    let sign = if q[(0, 0)] + q[(1, 1)] < 0.0 { -1.0 } else { 1.0 };
    let a = sign * q[(0, 0)];
    let b = sign * 2.0 * q[(0, 1)];
    let c = sign * q[(1, 1)];
    let d = sign * 2.0 * q[(0, 2)];
    let e = sign * 2.0 * q[(1, 2)];
    let f = sign * q[(2, 2)];

    let disc = b * b - 4.0 * a * c;
    if !(disc < 0.0) {
        return Err(TwinError::FitFailure {
            detail: format!("conic is not an ellipse (discriminant {disc:.3e})"),
        });
    }
    let x0 = (2.0 * c * d - b * e) / disc;
    let y0 = (2.0 * a * e - b * d) / disc;
    // Conic value at the center; -k must be positive for a real ellipse.
    let k = f + (d * x0 + e * y0) / 2.0;

    // Eigenvalues of the 2x2 quadratic form [[a, b/2], [b/2, c]]:
    // 0 < l1 <= l2 after sign normalization. Semi-axes are
    // sqrt(-k / l), so l1 carries the major axis.
    let half_trace = (a + c) / 2.0;
    let det_term = (((a - c) / 2.0).powi(2) + (b / 2.0).powi(2)).sqrt();
    let l1 = half_trace - det_term;
    let l2 = half_trace + det_term;
    if l1 <= 0.0 || -k <= 0.0 {
        return Err(TwinError::FitFailure {
            detail: "degenerate ellipse (nonpositive axis)".to_string(),
        });
    }
    let semi_major = (-k / l1).sqrt();
    let semi_minor = (-k / l2).sqrt();

    // The direction maximizing the quadratic form (angle
    // 0.5 atan2(b, a - c)) carries l2, i.e. the minor axis; the major
    // axis is perpendicular to it.
    let mut angle = 0.5 * b.atan2(a - c) + std::f64::consts::FRAC_PI_2;
    if angle < 0.0 {
        angle += std::f64::consts::PI;
    }
    if angle >= std::f64::consts::PI {
        angle -= std::f64::consts::PI;
    }

    Ok(EllipseParams {
        center: Point2::new(x0, y0),
        semi_major,
        semi_minor,
        angle,
    })
}
