//! Digital-twin scene construction: 2D object contours plus camera and
//! support-plane knowledge become placed 3D objects.
//!
//! The pipeline per object is contour → key points
//! ([`extract_keypoints`]) → plane-constrained backprojection and pose
//! recovery ([`place_object`]); [`build_twin`] runs it for a whole scene.
//! Object height is not observable from a single base footprint, so it
//! arrives as a measured per-label input.

mod contour;
mod ellipse;
mod keypoints;
mod place;
mod types;

pub use keypoints::{extract_keypoints, extract_keypoints_with};
pub use place::{build_twin, build_twin_with, place_object, place_object_with, TwinBuild};
pub use types::{
    Contour2D, ContourRecord, Dimensions, KeyPoint, KeyPointSet, ObjectFailure, PlacedObject,
    ShapeClass, TwinScene,
};

use thiserror::Error;

use crate::geometry::GeometryError;

/// Fraction of the contour perimeter used as the vertex-decimation
/// tolerance when simplifying a contour to a polygon.
pub const SIMPLIFY_PERIMETER_FRAC: f64 = 0.01;

/// Relative tolerance on footprint rigidity (opposite-edge or axis
/// mismatch) before a placement is rejected as inconsistent.
pub const RIGIDITY_FRAC: f64 = 0.10;

/// Tolerance on the on-plane invariant of a placed object's position.
pub const PLANE_RESIDUAL_EPS: f64 = 1e-6;

/// Slack, in pixels, allowed when checking that extracted key points lie
/// inside the source contour's bounding box (fitted ellipse extremes can
/// poke marginally past jittered samples).
pub const BBOX_SLACK_PX: f64 = 1.0;

/// Thresholds for key-point extraction and object placement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlacementOptions {
    pub simplify_perimeter_frac: f64,
    pub rigidity_frac: f64,
    pub pivot_ratio_eps: f64,
    pub min_depth: f64,
    pub plane_residual: f64,
    pub singular_ratio_eps: f64,
}

impl Default for PlacementOptions {
    fn default() -> Self {
        Self {
            simplify_perimeter_frac: SIMPLIFY_PERIMETER_FRAC,
            rigidity_frac: RIGIDITY_FRAC,
            pivot_ratio_eps: crate::geometry::PIVOT_RATIO_EPS,
            min_depth: crate::geometry::MIN_DEPTH,
            plane_residual: PLANE_RESIDUAL_EPS,
            singular_ratio_eps: crate::regression::SINGULAR_RATIO_EPS,
        }
    }
}

/// Errors from twin construction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TwinError {
    #[error("contour '{label}': need at least {needed} points, got {got}")]
    TooFewPoints {
        label: String,
        needed: usize,
        got: usize,
    },
    #[error("contour too coarse: simplification left {corners} vertices, need {needed}")]
    ContourTooCoarse { corners: usize, needed: usize },
    #[error("ellipse fit failed: {detail}")]
    FitFailure { detail: String },
    #[error("key point '{label}' at ({x}, {y}) lies outside the contour bounding box")]
    KeyPointOutOfBounds { label: String, x: f64, y: f64 },
    #[error("key point set has {got} points, expected {expected} for {shape:?}")]
    KeyPointCount {
        shape: ShapeClass,
        expected: usize,
        got: usize,
    },
    #[error("inconsistent footprint: {detail}")]
    InconsistentFootprint { detail: String },
    #[error("no assumed height configured for label '{label}'")]
    MissingHeight { label: String },
    #[error("invalid dimensions: {detail}")]
    InvalidDimensions { detail: String },
    #[error("duplicate object label '{label}'")]
    DuplicateLabel { label: String },
    #[error("placed object is off the support plane by {residual:.3e}")]
    OffPlane { residual: f64 },
    #[error("all {} objects failed to place", failures.len())]
    AllObjectsFailed { failures: Vec<ObjectFailure> },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
