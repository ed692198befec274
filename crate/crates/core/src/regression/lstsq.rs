//! Shared least-squares machinery: isotropic point normalization and an
//! SVD solve with explicit rank detection.

use nalgebra::{DMatrix, Matrix3};

use crate::geometry::Point2;

/// Result of a full-rank least-squares solve.
pub struct LsSolution {
    pub x: DMatrix<f64>,
    /// Ratio of largest to smallest singular value of the design matrix.
    pub condition: f64,
}

/// Solve `a x = b` (possibly with several right-hand sides) by SVD.
///
/// Returns `Err(rank)` when the numerical rank, judged by the
/// singular-value ratio `ratio_eps`, is below the column count.
pub fn svd_least_squares(
    a: DMatrix<f64>,
    b: DMatrix<f64>,
    ratio_eps: f64,
) -> Result<LsSolution, usize> {
    let ncols = a.ncols();
    let svd = a.svd(true, true);
    let mut sigma_max = 0.0f64;
    let mut sigma_min = f64::INFINITY;
    for s in svd.singular_values.iter() {
        sigma_max = sigma_max.max(*s);
        sigma_min = sigma_min.min(*s);
    }
    let rank = svd
        .singular_values
        .iter()
        .filter(|s| **s > sigma_max * ratio_eps)
        .count();
    if rank < ncols {
        return Err(rank);
    }
    let x = svd.solve(&b, 0.0).expect("svd computed with u and v");
    Ok(LsSolution {
        x,
        condition: sigma_max / sigma_min,
    })
}

/// Isotropic normalization: translate the centroid to the origin and
/// scale so the mean distance from it is sqrt(2). Returns the normalized
/// points and the transform `t` mapping raw to normalized coordinates.
///
/// When all points coincide the identity transform is returned and the
/// downstream rank check reports the degeneracy.
pub fn normalize_points(points: &[Point2]) -> (Vec<Point2>, Matrix3<f64>) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.x).sum::<f64>() / n;
    let my = points.iter().map(|p| p.y).sum::<f64>() / n;
    let mean_dist = points
        .iter()
        .map(|p| (p.x - mx).hypot(p.y - my))
        .sum::<f64>()
        / n;
    if mean_dist <= f64::MIN_POSITIVE {
        return (points.to_vec(), Matrix3::identity());
    }
    let s = std::f64::consts::SQRT_2 / mean_dist;
    let t = Matrix3::new(s, 0.0, -s * mx, 0.0, s, -s * my, 0.0, 0.0, 1.0);
    let normalized = points
        .iter()
        .map(|p| Point2::new(s * (p.x - mx), s * (p.y - my)))
        .collect();
    (normalized, t)
}

/// Closed-form inverse of a normalization transform produced by
/// [`normalize_points`].
pub fn denormalizer(t: &Matrix3<f64>) -> Matrix3<f64> {
    let s = t[(0, 0)];
    if s == 1.0 && t[(0, 2)] == 0.0 && t[(1, 2)] == 0.0 {
        return Matrix3::identity();
    }
    Matrix3::new(
        1.0 / s,
        0.0,
        -t[(0, 2)] / s,
        0.0,
        1.0 / s,
        -t[(1, 2)] / s,
        0.0,
        0.0,
        1.0,
    )
}
