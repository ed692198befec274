//! Object placement: backproject key points onto the support plane and
//! recover pose and dimensions.

use std::collections::BTreeMap;

use nalgebra::Vector3;

use super::keypoints::extract_keypoints_with;
use super::types::{
    Contour2D, Dimensions, KeyPointSet, ObjectFailure, PlacedObject, ShapeClass, TwinScene,
};
use super::{PlacementOptions, TwinError};
use crate::geometry::{CameraModel, Plane, Point3};

/// Place one object from its key points with default options.
pub fn place_object(
    kps: &KeyPointSet,
    cam: &CameraModel,
    plane: &Plane,
    assumed_height: f64,
) -> Result<PlacedObject, TwinError> {
    place_object_with(kps, cam, plane, assumed_height, "object", &PlacementOptions::default())
}

/// Place one object: backproject the key points onto the support plane,
/// take the footprint centroid as position, the principal (longest)
/// footprint edge as the yaw reference, and the footprint extents as
/// base dimensions. Height is the supplied measured value.
pub fn place_object_with(
    kps: &KeyPointSet,
    cam: &CameraModel,
    plane: &Plane,
    assumed_height: f64,
    label: &str,
    opts: &PlacementOptions,
) -> Result<PlacedObject, TwinError> {
    if !(assumed_height > 0.0) {
        return Err(TwinError::InvalidDimensions {
            detail: format!("assumed height {assumed_height} must be positive"),
        });
    }
    let backproject = |p: crate::geometry::Point2| -> Result<Point3, TwinError> {
        Ok(cam.backproject_to_plane_with(p, plane, opts.pivot_ratio_eps, opts.min_depth)?)
    };

    match kps.shape() {
        ShapeClass::Cuboid => {
            let mut corners = [Point3::new(0.0, 0.0, 0.0); 4];
            for (i, kp) in kps.points().iter().enumerate() {
                corners[i] = backproject(kp.point)?;
            }
            place_cuboid(&corners, plane, assumed_height, label, opts)
        }
        ShapeClass::Cylinder => {
            let pts = kps.points();
            let center = backproject(pts[0].point)?;
            let major_pos = backproject(pts[1].point)?;
            let major_neg = backproject(pts[2].point)?;
            let minor_pos = backproject(pts[3].point)?;
            let minor_neg = backproject(pts[4].point)?;
            let r_major = major_pos.distance(&major_neg) / 2.0;
            let r_minor = minor_pos.distance(&minor_neg) / 2.0;
            let max_r = r_major.max(r_minor);
            if (r_major - r_minor).abs() > opts.rigidity_frac * max_r {
                return Err(TwinError::InconsistentFootprint {
                    detail: format!(
                        "backprojected axis half-lengths differ: {r_major:.4} vs {r_minor:.4}"
                    ),
                });
            }
            let position = plane.project_point(center);
            PlacedObject::new(
                label,
                ShapeClass::Cylinder,
                position,
                0.0,
                Dimensions::Cylinder {
                    radius: (r_major + r_minor) / 2.0,
                    height: assumed_height,
                },
                plane,
                opts.plane_residual,
            )
        }
    }
}

fn place_cuboid(
    corners: &[Point3; 4],
    plane: &Plane,
    assumed_height: f64,
    label: &str,
    opts: &PlacementOptions,
) -> Result<PlacedObject, TwinError> {
    let edges: Vec<Vector3<f64>> = (0..4)
        .map(|i| corners[(i + 1) % 4].to_vector() - corners[i].to_vector())
        .collect();
    let lengths: Vec<f64> = edges.iter().map(|e| e.norm()).collect();

    // A rigid cuboid base backprojects to a parallelogram: opposite
    // edges must agree in length.
    for (i, j) in [(0usize, 2usize), (1, 3)] {
        let max = lengths[i].max(lengths[j]);
        if max > 0.0 && (lengths[i] - lengths[j]).abs() > opts.rigidity_frac * max {
            return Err(TwinError::InconsistentFootprint {
                detail: format!(
                    "opposite edges {i} and {j} differ: {:.4} vs {:.4}",
                    lengths[i], lengths[j]
                ),
            });
        }
    }

    let centroid = Point3::new(
        corners.iter().map(|c| c.x).sum::<f64>() / 4.0,
        corners.iter().map(|c| c.y).sum::<f64>() / 4.0,
        corners.iter().map(|c| c.z).sum::<f64>() / 4.0,
    );
    let position = plane.project_point(centroid);

    let principal = (0..4)
        .max_by(|&a, &b| lengths[a].partial_cmp(&lengths[b]).unwrap())
        .unwrap();
    let (e1, e2) = plane.basis();
    let dir = edges[principal];
    let mut yaw = dir.dot(&e2).atan2(dir.dot(&e1));
    // Edges are undirected: fold into [0, pi).
    if yaw < 0.0 {
        yaw += std::f64::consts::PI;
    }
    if yaw >= std::f64::consts::PI {
        yaw -= std::f64::consts::PI;
    }

    let width = (lengths[principal] + lengths[(principal + 2) % 4]) / 2.0;
    let depth = (lengths[(principal + 1) % 4] + lengths[(principal + 3) % 4]) / 2.0;

    PlacedObject::new(
        label,
        ShapeClass::Cuboid,
        position,
        yaw,
        Dimensions::Cuboid {
            width,
            depth,
            height: assumed_height,
        },
        plane,
        opts.plane_residual,
    )
}

/// Build a whole twin scene from labeled contours with default options.
pub fn build_twin(
    contours: &[(Contour2D, ShapeClass)],
    cam: &CameraModel,
    plane: &Plane,
    heights: &BTreeMap<String, f64>,
) -> Result<TwinBuild, TwinError> {
    build_twin_with(contours, cam, plane, heights, &PlacementOptions::default())
}

/// Scene assembly result: the scene plus any per-object failures.
/// Placement failures are tolerated object by object; only an empty
/// result from a nonempty input is a whole-scene error.
#[derive(Debug, Clone, PartialEq)]
pub struct TwinBuild {
    pub scene: TwinScene,
    pub failures: Vec<ObjectFailure>,
}

/// Build a scene: extract key points and place every contour, aggregate
/// per-object failures by label, and sort placed objects by label.
pub fn build_twin_with(
    contours: &[(Contour2D, ShapeClass)],
    cam: &CameraModel,
    plane: &Plane,
    heights: &BTreeMap<String, f64>,
    opts: &PlacementOptions,
) -> Result<TwinBuild, TwinError> {
    let mut seen = std::collections::BTreeSet::new();
    for (contour, _) in contours {
        if !seen.insert(contour.label().to_string()) {
            return Err(TwinError::DuplicateLabel {
                label: contour.label().to_string(),
            });
        }
    }

    let mut objects = Vec::new();
    let mut failures = Vec::new();
    for (contour, shape) in contours {
        let label = contour.label().to_string();
        let placed = heights
            .get(&label)
            .copied()
            .ok_or_else(|| TwinError::MissingHeight {
                label: label.clone(),
            })
            .and_then(|height| {
                let kps = extract_keypoints_with(contour, *shape, opts)?;
                place_object_with(&kps, cam, plane, height, &label, opts)
            });
        match placed {
            Ok(object) => objects.push(object),
            Err(error) => failures.push(ObjectFailure { label, error }),
        }
    }

    if objects.is_empty() && !contours.is_empty() {
        return Err(TwinError::AllObjectsFailed { failures });
    }
    let scene = TwinScene::new(*plane, *cam, objects)?;
    Ok(TwinBuild { scene, failures })
}
