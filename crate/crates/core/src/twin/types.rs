//! Twin-scene data types.

use serde::{Deserialize, Serialize};

use super::TwinError;
use crate::geometry::{CameraModel, Plane, Point2, Point3};

/// Supported object shape classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeClass {
    Cuboid,
    Cylinder,
}

/// A closed object contour in image coordinates. Closure is implicit:
/// the last stored point connects back to the first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ContourRepr", into = "ContourRepr")]
pub struct Contour2D {
    label: String,
    points: Vec<Point2>,
}

#[derive(Serialize, Deserialize)]
struct ContourRepr {
    label: String,
    points: Vec<Point2>,
}

impl From<Contour2D> for ContourRepr {
    fn from(c: Contour2D) -> Self {
        Self {
            label: c.label,
            points: c.points,
        }
    }
}

impl TryFrom<ContourRepr> for Contour2D {
    type Error = TwinError;

    fn try_from(r: ContourRepr) -> Result<Self, Self::Error> {
        Contour2D::new(r.label, r.points)
    }
}

impl Contour2D {
    /// Build a contour; an explicitly repeated closing point is dropped.
    pub fn new(label: impl Into<String>, mut points: Vec<Point2>) -> Result<Self, TwinError> {
        let label = label.into();
        if points.len() > 1 && points.first() == points.last() {
            points.pop();
        }
        for p in &points {
            p.check_finite().map_err(TwinError::Geometry)?;
        }
        if points.len() < 3 {
            return Err(TwinError::TooFewPoints {
                label,
                needed: 3,
                got: points.len(),
            });
        }
        Ok(Self { label, points })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    /// Axis-aligned bounding box: `(min_x, min_y, max_x, max_y)`.
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        let mut min_x = f64::INFINITY;
        let mut min_y = f64::INFINITY;
        let mut max_x = f64::NEG_INFINITY;
        let mut max_y = f64::NEG_INFINITY;
        for p in &self.points {
            min_x = min_x.min(p.x);
            min_y = min_y.min(p.y);
            max_x = max_x.max(p.x);
            max_y = max_y.max(p.y);
        }
        (min_x, min_y, max_x, max_y)
    }
}

/// One labeled contour as it appears in a contours input file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourRecord {
    pub label: String,
    pub shape: ShapeClass,
    pub points: Vec<Point2>,
}

impl ContourRecord {
    pub fn into_parts(self) -> Result<(Contour2D, ShapeClass), TwinError> {
        Ok((Contour2D::new(self.label, self.points)?, self.shape))
    }
}

/// A labeled extracted key point.
#[derive(Debug, Clone, PartialEq)]
pub struct KeyPoint {
    pub label: String,
    pub point: Point2,
}

/// The shape-specific key points extracted from a contour.
///
/// Conventions (fixed so downstream tests are deterministic):
/// - `Cuboid`: the 4 base-face corners, labeled `corner_0..corner_3`,
///   ordered clockwise on screen (image y grows downward) starting from
///   the corner nearest the image top-left.
/// - `Cylinder`: `center`, then the major-axis extremes `major_pos`,
///   `major_neg`, then the minor-axis extremes `minor_pos`, `minor_neg`
///   of the base ellipse.
#[derive(Debug, Clone, PartialEq)]
pub struct KeyPointSet {
    shape: ShapeClass,
    image_points: Vec<KeyPoint>,
}

impl KeyPointSet {
    pub fn expected_count(shape: ShapeClass) -> usize {
        match shape {
            ShapeClass::Cuboid => 4,
            ShapeClass::Cylinder => 5,
        }
    }

    pub fn new(shape: ShapeClass, image_points: Vec<KeyPoint>) -> Result<Self, TwinError> {
        let expected = Self::expected_count(shape);
        if image_points.len() != expected {
            return Err(TwinError::KeyPointCount {
                shape,
                expected,
                got: image_points.len(),
            });
        }
        Ok(Self {
            shape,
            image_points,
        })
    }

    /// Convenience constructor for a cuboid's 4 ordered base corners.
    pub fn cuboid(corners: [Point2; 4]) -> Self {
        let image_points = corners
            .iter()
            .enumerate()
            .map(|(i, &point)| KeyPoint {
                label: format!("corner_{i}"),
                point,
            })
            .collect();
        Self {
            shape: ShapeClass::Cuboid,
            image_points,
        }
    }

    /// Convenience constructor for a cylinder's center and axis extremes.
    pub fn cylinder(
        center: Point2,
        major_pos: Point2,
        major_neg: Point2,
        minor_pos: Point2,
        minor_neg: Point2,
    ) -> Self {
        let labels = ["center", "major_pos", "major_neg", "minor_pos", "minor_neg"];
        let pts = [center, major_pos, major_neg, minor_pos, minor_neg];
        Self {
            shape: ShapeClass::Cylinder,
            image_points: labels
                .iter()
                .zip(pts.iter())
                .map(|(l, p)| KeyPoint {
                    label: (*l).to_string(),
                    point: *p,
                })
                .collect(),
        }
    }

    pub fn shape(&self) -> ShapeClass {
        self.shape
    }

    pub fn points(&self) -> &[KeyPoint] {
        &self.image_points
    }
}

/// Shape-specific object dimensions, in world length units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Dimensions {
    Cuboid { width: f64, depth: f64, height: f64 },
    Cylinder { radius: f64, height: f64 },
}

impl Dimensions {
    pub fn validate(&self) -> Result<(), TwinError> {
        let ok = match *self {
            Dimensions::Cuboid {
                width,
                depth,
                height,
            } => width > 0.0 && depth > 0.0 && height > 0.0,
            Dimensions::Cylinder { radius, height } => radius > 0.0 && height > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(TwinError::InvalidDimensions {
                detail: format!("{self:?}"),
            })
        }
    }
}

/// An object placed on the support plane: base-center position, yaw
/// about the plane normal (radians, in `[0, pi)` measured in the plane
/// basis), and measured dimensions. The object extends from its base
/// along the plane normal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacedObject {
    pub label: String,
    pub shape: ShapeClass,
    pub position: Point3,
    pub yaw: f64,
    pub dimensions: Dimensions,
}

impl PlacedObject {
    pub fn new(
        label: impl Into<String>,
        shape: ShapeClass,
        position: Point3,
        yaw: f64,
        dimensions: Dimensions,
        plane: &Plane,
        plane_residual: f64,
    ) -> Result<Self, TwinError> {
        dimensions.validate()?;
        let residual = plane.signed_distance(position).abs();
        if residual > plane_residual {
            return Err(TwinError::OffPlane { residual });
        }
        Ok(Self {
            label: label.into(),
            shape,
            position,
            yaw,
            dimensions,
        })
    }
}

/// A complete twin scene: the support plane, the simulated camera, and
/// the placed objects sorted by label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SceneRepr", into = "SceneRepr")]
pub struct TwinScene {
    pub support_plane: Plane,
    pub sim_camera: CameraModel,
    pub objects: Vec<PlacedObject>,
}

#[derive(Serialize, Deserialize)]
struct SceneRepr {
    support_plane: Plane,
    sim_camera: CameraModel,
    objects: Vec<PlacedObject>,
}

impl From<TwinScene> for SceneRepr {
    fn from(s: TwinScene) -> Self {
        Self {
            support_plane: s.support_plane,
            sim_camera: s.sim_camera,
            objects: s.objects,
        }
    }
}

impl TryFrom<SceneRepr> for TwinScene {
    type Error = TwinError;

    fn try_from(r: SceneRepr) -> Result<Self, Self::Error> {
        TwinScene::new(r.support_plane, r.sim_camera, r.objects)
    }
}

impl TwinScene {
    /// Build a scene; objects are sorted by label and labels must be
    /// unique.
    pub fn new(
        support_plane: Plane,
        sim_camera: CameraModel,
        mut objects: Vec<PlacedObject>,
    ) -> Result<Self, TwinError> {
        objects.sort_by(|a, b| a.label.cmp(&b.label));
        for pair in objects.windows(2) {
            if pair[0].label == pair[1].label {
                return Err(TwinError::DuplicateLabel {
                    label: pair[0].label.clone(),
                });
            }
        }
        Ok(Self {
            support_plane,
            sim_camera,
            objects,
        })
    }

    pub fn object(&self, label: &str) -> Option<&PlacedObject> {
        self.objects.iter().find(|o| o.label == label)
    }
}

/// A per-object placement failure, keyed by contour label.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectFailure {
    pub label: String,
    pub error: TwinError,
}
