//! Intrinsics calibration from 2D-3D correspondences at a known pose.

use nalgebra::DMatrix;

use super::lstsq::svd_least_squares;
use super::types::{Correspondence2D3D, FitReport, ResidualStats};
use super::{FitOptions, RegressionError};
use crate::geometry::{Extrinsics, Intrinsics, MIN_DEPTH};

/// Fit pinhole intrinsics minimizing squared pixel residuals, with
/// default options.
pub fn fit_intrinsics(
    pairs: &[Correspondence2D3D],
    ext: &Extrinsics,
) -> Result<FitReport<Intrinsics>, RegressionError> {
    fit_intrinsics_with(pairs, ext, &FitOptions::default())
}

/// Fit with explicit thresholds.
///
/// With the pose known, the pixel model separates into two independent
/// two-parameter linear regressions: x-pixels against `X_c/Z_c` give
/// `(fx, cx)` and y-pixels against `Y_c/Z_c` give `(fy, cy)`. Focal
/// lengths must come out strictly positive; a nonpositive optimum is
/// rejected as a constraint violation.
pub fn fit_intrinsics_with(
    pairs: &[Correspondence2D3D],
    ext: &Extrinsics,
    opts: &FitOptions,
) -> Result<FitReport<Intrinsics>, RegressionError> {
    if pairs.len() < 2 {
        return Err(RegressionError::InsufficientPoints {
            needed: 2,
            got: pairs.len(),
        });
    }
    let mut xs = Vec::with_capacity(pairs.len());
    let mut ys = Vec::with_capacity(pairs.len());
    for (index, pair) in pairs.iter().enumerate() {
        if !(pair.pixel.is_finite() && pair.world.is_finite()) {
            return Err(RegressionError::NonFiniteInput { index });
        }
        let cam = ext.to_camera_frame(pair.world);
        if cam.z <= MIN_DEPTH {
            return Err(RegressionError::BadPoint {
                index,
                source: crate::geometry::GeometryError::BehindCamera { depth: cam.z },
            });
        }
        xs.push((cam.x / cam.z, pair.pixel.x));
        ys.push((cam.y / cam.z, pair.pixel.y));
    }

    let fit_axis = |samples: &[(f64, f64)]| -> Result<(f64, f64, f64), RegressionError> {
        let n = samples.len();
        let mut a = DMatrix::<f64>::zeros(n, 2);
        let mut b = DMatrix::<f64>::zeros(n, 1);
        for (i, &(regressor, pixel)) in samples.iter().enumerate() {
            a[(i, 0)] = regressor;
            a[(i, 1)] = 1.0;
            b[(i, 0)] = pixel;
        }
        let sol = svd_least_squares(a, b, opts.singular_ratio_eps)
            .map_err(|rank| RegressionError::DegenerateConfiguration { rank, needed: 2 })?;
        Ok((sol.x[(0, 0)], sol.x[(1, 0)], sol.condition))
    };

    let (fx, cx, cond_x) = fit_axis(&xs)?;
    let (fy, cy, cond_y) = fit_axis(&ys)?;
    if fx <= 0.0 || fy <= 0.0 {
        return Err(RegressionError::ConstraintViolation {
            what: format!("nonpositive focal length: fx = {fx}, fy = {fy}"),
        });
    }
    let model = Intrinsics::new(fx, fy, cx, cy)?;

    let residuals: Vec<f64> = xs
        .iter()
        .zip(ys.iter())
        .map(|(&(ax, u), &(ay, v))| {
            let du = fx * ax + cx - u;
            let dv = fy * ay + cy - v;
            du.hypot(dv)
        })
        .collect();
    Ok(FitReport {
        model,
        stats: ResidualStats::from_residuals(&residuals),
        condition_estimate: cond_x.max(cond_y),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{CameraModel, Point2, Point3};
    use nalgebra::Vector3;

    fn general_points() -> Vec<Point3> {
        vec![
            Point3::new(0.1, 0.2, 0.0),
            Point3::new(-0.3, 0.1, 0.05),
            Point3::new(0.25, -0.2, 0.1),
            Point3::new(-0.15, -0.25, 0.02),
            Point3::new(0.0, 0.3, 0.08),
            Point3::new(0.35, 0.05, 0.0),
            Point3::new(-0.05, 0.02, 0.12),
            Point3::new(0.18, -0.3, 0.06),
            Point3::new(-0.28, 0.22, 0.03),
            Point3::new(0.07, -0.09, 0.09),
        ]
    }

    fn posed_camera() -> CameraModel {
        let ext = Extrinsics::look_at(
            Vector3::new(0.2, -0.3, 1.1),
            Vector3::new(0.0, 0.0, 0.0),
            Vector3::new(1.0, 0.0, 0.0),
        )
        .unwrap();
        CameraModel::new(Intrinsics::new(600.0, 600.0, 320.0, 240.0).unwrap(), ext).unwrap()
    }

    #[test]
    fn noiseless_generate_then_fit_recovers_intrinsics() {
        let cam = posed_camera();
        let pairs: Vec<Correspondence2D3D> = general_points()
            .into_iter()
            .map(|world| Correspondence2D3D {
                pixel: cam.project(world).unwrap(),
                world,
            })
            .collect();
        let report = fit_intrinsics(&pairs, &cam.extrinsics).unwrap();
        let k = report.model;
        assert!((k.fx - 600.0).abs() / 600.0 < 1e-8);
        assert!((k.fy - 600.0).abs() / 600.0 < 1e-8);
        assert!((k.cx - 320.0).abs() / 320.0 < 1e-8);
        assert!((k.cy - 240.0).abs() / 240.0 < 1e-8);
    }

    #[test]
    fn identical_normalized_coordinates_are_degenerate() {
        let ext = Extrinsics::identity();
        // Both points sit on the same viewing ray: X_c/Z_c identical.
        let pairs = vec![
            Correspondence2D3D {
                pixel: Point2::new(100.0, 100.0),
                world: Point3::new(0.1, 0.1, 1.0),
            },
            Correspondence2D3D {
                pixel: Point2::new(100.0, 100.0),
                world: Point3::new(0.2, 0.2, 2.0),
            },
        ];
        assert!(matches!(
            fit_intrinsics(&pairs, &ext).unwrap_err(),
            RegressionError::DegenerateConfiguration { rank: 1, needed: 2 }
        ));
    }

    #[test]
    fn fit_is_stable_under_consistent_extra_points() {
        let cam = posed_camera();
        let all: Vec<Correspondence2D3D> = general_points()
            .into_iter()
            .map(|world| Correspondence2D3D {
                pixel: cam.project(world).unwrap(),
                world,
            })
            .collect();
        let small = fit_intrinsics(&all[..4], &cam.extrinsics).unwrap().model;
        let large = fit_intrinsics(&all, &cam.extrinsics).unwrap().model;
        assert!((small.fx - large.fx).abs() < 1e-10 * large.fx);
        assert!((small.fy - large.fy).abs() < 1e-10 * large.fy);
        assert!((small.cx - large.cx).abs() < 1e-10 * large.cx.abs());
        assert!((small.cy - large.cy).abs() < 1e-10 * large.cy.abs());
    }

    #[test]
    fn point_behind_camera_is_reported_with_index() {
        let ext = Extrinsics::identity();
        let pairs = vec![
            Correspondence2D3D {
                pixel: Point2::new(0.0, 0.0),
                world: Point3::new(0.0, 0.0, 1.0),
            },
            Correspondence2D3D {
                pixel: Point2::new(0.0, 0.0),
                world: Point3::new(0.0, 0.0, -1.0),
            },
        ];
        match fit_intrinsics(&pairs, &ext).unwrap_err() {
            RegressionError::BadPoint { index, .. } => assert_eq!(index, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn negative_focal_optimum_is_a_constraint_violation() {
        let ext = Extrinsics::identity();
        // Pixels decrease as the normalized coordinate increases.
        let pairs = vec![
            Correspondence2D3D {
                pixel: Point2::new(200.0, 200.0),
                world: Point3::new(-0.1, -0.1, 1.0),
            },
            Correspondence2D3D {
                pixel: Point2::new(100.0, 100.0),
                world: Point3::new(0.1, 0.1, 1.0),
            },
        ];
        assert!(matches!(
            fit_intrinsics(&pairs, &ext).unwrap_err(),
            RegressionError::ConstraintViolation { .. }
        ));
    }

    #[test]
    fn too_few_points() {
        let ext = Extrinsics::identity();
        let pairs = vec![Correspondence2D3D {
            pixel: Point2::new(0.0, 0.0),
            world: Point3::new(0.0, 0.0, 1.0),
        }];
        assert_eq!(
            fit_intrinsics(&pairs, &ext).unwrap_err(),
            RegressionError::InsufficientPoints { needed: 2, got: 1 }
        );
    }
}
