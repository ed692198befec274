//! Key-point extraction from object contours.

use super::contour::{order_clockwise_from_top_left, perimeter, select_corners, simplify_closed};
use super::ellipse::fit_ellipse;
use super::types::{Contour2D, KeyPoint, KeyPointSet, ShapeClass};
use super::{PlacementOptions, TwinError, BBOX_SLACK_PX};
use crate::geometry::Point2;

/// Extract shape-specific key points from a contour with default options.
pub fn extract_keypoints(contour: &Contour2D, shape: ShapeClass) -> Result<KeyPointSet, TwinError> {
    extract_keypoints_with(contour, shape, &PlacementOptions::default())
}

/// Extract with explicit thresholds.
///
/// Cuboid: the contour is decimated to a polygon (tolerance a fixed
/// fraction of the perimeter) and the 4 vertices with the largest
/// turning angles become the base corners, ordered clockwise from the
/// top-left. Cylinder: an ellipse is fitted to the lower arc (points at
/// or below the contour centroid in image coordinates, where the base
/// rim of an upright object images) and the center plus axis extremes
/// are returned.
///
/// The result is deterministic in the input point set: it does not
/// depend on the starting vertex or traversal direction of the contour.
pub fn extract_keypoints_with(
    contour: &Contour2D,
    shape: ShapeClass,
    opts: &PlacementOptions,
) -> Result<KeyPointSet, TwinError> {
    let kps = match shape {
        ShapeClass::Cuboid => extract_cuboid(contour, opts)?,
        ShapeClass::Cylinder => extract_cylinder(contour, opts)?,
    };
    check_in_bounds(contour, &kps)?;
    Ok(kps)
}

fn extract_cuboid(
    contour: &Contour2D,
    opts: &PlacementOptions,
) -> Result<KeyPointSet, TwinError> {
    let points = contour.points();
    let tolerance = opts.simplify_perimeter_frac * perimeter(points);
    let simplified = simplify_closed(points, tolerance);
    if simplified.len() < 4 {
        return Err(TwinError::ContourTooCoarse {
            corners: simplified.len(),
            needed: 4,
        });
    }
    let corners = select_corners(&simplified, 4);
    let ordered = order_clockwise_from_top_left(&corners);
    Ok(KeyPointSet::cuboid([
        ordered[0], ordered[1], ordered[2], ordered[3],
    ]))
}

fn extract_cylinder(
    contour: &Contour2D,
    opts: &PlacementOptions,
) -> Result<KeyPointSet, TwinError> {
    let points = contour.points();
    if points.len() < 8 {
        return Err(TwinError::TooFewPoints {
            label: contour.label().to_string(),
            needed: 8,
            got: points.len(),
        });
    }
    let cy = points.iter().map(|p| p.y).sum::<f64>() / points.len() as f64;
    let lower: Vec<Point2> = points.iter().copied().filter(|p| p.y >= cy).collect();
    let ellipse = fit_ellipse(&lower, opts.singular_ratio_eps)?;

    use std::f64::consts::{FRAC_PI_2, PI};
    Ok(KeyPointSet::cylinder(
        ellipse.center,
        ellipse.point_at(0.0),
        ellipse.point_at(PI),
        ellipse.point_at(FRAC_PI_2),
        ellipse.point_at(-FRAC_PI_2),
    ))
}

fn check_in_bounds(contour: &Contour2D, kps: &KeyPointSet) -> Result<(), TwinError> {
    let (min_x, min_y, max_x, max_y) = contour.bounding_box();
    for KeyPoint { label, point } in kps.points() {
        let inside = point.x >= min_x - BBOX_SLACK_PX
            && point.x <= max_x + BBOX_SLACK_PX
            && point.y >= min_y - BBOX_SLACK_PX
            && point.y <= max_y + BBOX_SLACK_PX;
        if !inside {
            return Err(TwinError::KeyPointOutOfBounds {
                label: label.clone(),
                x: point.x,
                y: point.y,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_contour() -> Contour2D {
        Contour2D::new(
            "box",
            vec![
                Point2::new(0.0, 0.0),
                Point2::new(100.0, 0.0),
                Point2::new(100.0, 100.0),
                Point2::new(0.0, 100.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn minimal_square_returns_its_corners_ordered() {
        let kps = extract_keypoints(&square_contour(), ShapeClass::Cuboid).unwrap();
        let pts: Vec<Point2> = kps.points().iter().map(|k| k.point).collect();
        assert_eq!(pts[0], Point2::new(0.0, 0.0));
        assert_eq!(pts[1], Point2::new(100.0, 0.0));
        assert_eq!(pts[2], Point2::new(100.0, 100.0));
        assert_eq!(pts[3], Point2::new(0.0, 100.0));
        assert_eq!(kps.points()[0].label, "corner_0");
    }

    #[test]
    fn jittered_dense_square_recovers_corners_within_a_pixel() {
        // 16 samples per side starting at each corner; deterministic
        // sub-pixel jitter.
        let corners = [
            Point2::new(50.0, 40.0),
            Point2::new(150.0, 40.0),
            Point2::new(150.0, 140.0),
            Point2::new(50.0, 140.0),
        ];
        let mut pts = Vec::new();
        let mut state = 0x12345678u64;
        let mut jitter = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as f64 / (1u64 << 31) as f64 - 0.5
        };
        for s in 0..4 {
            let a = corners[s];
            let b = corners[(s + 1) % 4];
            for k in 0..16 {
                let t = k as f64 / 16.0;
                pts.push(Point2::new(
                    a.x + t * (b.x - a.x) + jitter(),
                    a.y + t * (b.y - a.y) + jitter(),
                ));
            }
        }
        let contour = Contour2D::new("box", pts).unwrap();
        let kps = extract_keypoints(&contour, ShapeClass::Cuboid).unwrap();
        for (kp, truth) in kps.points().iter().zip(corners.iter()) {
            assert!(
                kp.point.distance(truth) < 1.0,
                "{:?} vs {truth:?}",
                kp.point
            );
        }
    }

    #[test]
    fn extraction_invariant_to_start_vertex_and_orientation() {
        let base: Vec<Point2> = (0..24)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / 24.0;
                // A rounded-square-ish convex contour.
                Point2::new(
                    100.0 + 60.0 * t.cos() + 8.0 * (3.0 * t).cos(),
                    80.0 + 60.0 * t.sin() + 8.0 * (3.0 * t).sin(),
                )
            })
            .collect();
        let reference = extract_keypoints(
            &Contour2D::new("c", base.clone()).unwrap(),
            ShapeClass::Cuboid,
        )
        .unwrap();

        let mut rotated = base.clone();
        rotated.rotate_left(7);
        let mut reversed = base.clone();
        reversed.reverse();

        for variant in [rotated, reversed] {
            let kps = extract_keypoints(
                &Contour2D::new("c", variant).unwrap(),
                ShapeClass::Cuboid,
            )
            .unwrap();
            for (a, b) in kps.points().iter().zip(reference.points().iter()) {
                assert!(a.point.distance(&b.point) < 1e-9);
            }
        }
    }

    #[test]
    fn ellipse_contour_gives_center_and_axes() {
        let (cx, cy, a, b) = (320.0, 240.0, 40.0, 20.0);
        let pts: Vec<Point2> = (0..64)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / 64.0;
                Point2::new(cx + a * t.cos(), cy + b * t.sin())
            })
            .collect();
        let contour = Contour2D::new("jar", pts).unwrap();
        let kps = extract_keypoints(&contour, ShapeClass::Cylinder).unwrap();
        let center = kps.points()[0].point;
        assert!(center.distance(&Point2::new(cx, cy)) < 0.5);
        let major_pos = kps.points()[1].point;
        let major_neg = kps.points()[2].point;
        let fitted_a = major_pos.distance(&major_neg) / 2.0;
        assert!((fitted_a - a).abs() / a < 0.02);
        let minor_pos = kps.points()[3].point;
        let minor_neg = kps.points()[4].point;
        let fitted_b = minor_pos.distance(&minor_neg) / 2.0;
        assert!((fitted_b - b).abs() / b < 0.02);
    }

    #[test]
    fn cylinder_needs_eight_points() {
        let pts: Vec<Point2> = (0..6)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / 6.0;
                Point2::new(10.0 * t.cos(), 5.0 * t.sin())
            })
            .collect();
        let contour = Contour2D::new("jar", pts).unwrap();
        assert!(matches!(
            extract_keypoints(&contour, ShapeClass::Cylinder).unwrap_err(),
            TwinError::TooFewPoints { needed: 8, .. }
        ));
    }

    #[test]
    fn coarse_contour_for_cuboid_is_rejected() {
        let contour = Contour2D::new(
            "tri",
            vec![
                Point2::new(0.0, 0.0),
                Point2::new(100.0, 0.0),
                Point2::new(50.0, 90.0),
            ],
        )
        .unwrap();
        assert!(matches!(
            extract_keypoints(&contour, ShapeClass::Cuboid).unwrap_err(),
            TwinError::ContourTooCoarse { corners: 3, needed: 4 }
        ));
    }
}
