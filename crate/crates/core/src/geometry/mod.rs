//! Projective-geometry primitives: image/world points, homographies,
//! pinhole cameras and support planes, with exact forward projection and
//! plane-constrained backprojection.
//!
//! All types are plain immutable values. Constructors validate the type
//! invariants (finiteness, rotation orthonormality, unit plane normals,
//! homography family constraints) and return [`GeometryError`] on
//! violation, so a constructed value can be trusted downstream.

mod camera;
mod homography;
mod linsys;
mod plane;
mod point;

pub use camera::{CameraModel, Extrinsics, Intrinsics};
pub use homography::{Homography, HomographyFamily};
pub use linsys::solve3;
pub use plane::Plane;
pub use point::{Point2, Point3};

use thiserror::Error;

/// Relative threshold for homogeneous-division degeneracy: a point is
/// degenerate under a homography when `|w| <= HOMOGENEOUS_EPS_REL * max|m_ij|`.
pub const HOMOGENEOUS_EPS_REL: f64 = 1e-12;

/// Relative determinant threshold below which a 3x3 map is rejected as
/// non-invertible (scaled by `max|m_ij|^3`).
pub const DET_EPS_REL: f64 = 1e-12;

/// Pivot-ratio threshold for the direct 3x3 elimination solver: the system
/// is singular when any pivot falls below this fraction of the largest
/// initial entry.
pub const PIVOT_RATIO_EPS: f64 = 1e-10;

/// Minimum camera-frame depth for a point to count as in front of the camera.
pub const MIN_DEPTH: f64 = 1e-12;

/// Absolute tolerance for rotation-matrix orthonormality and determinant.
pub const ROTATION_EPS: f64 = 1e-9;

/// Errors from geometric constructors and mapping operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    /// A coordinate or matrix entry was NaN or infinite.
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    /// The homogeneous denominator vanished: the point maps to infinity.
    #[error("degenerate point: homogeneous denominator {w:.3e} below threshold")]
    DegeneratePoint { w: f64 },
    /// The point lies at or behind the camera plane.
    #[error("point behind camera: depth {depth:.3e}")]
    BehindCamera { depth: f64 },
    /// The viewing ray through the pixel never meets the plane.
    #[error("viewing ray is parallel to the plane")]
    RayParallelToPlane,
    /// A matrix required to be invertible was singular.
    #[error("singular matrix: |det| = {det:.3e}")]
    SingularMatrix { det: f64 },
    /// The homography matrix violates its declared family constraints.
    #[error("matrix violates {family:?} family constraints")]
    FamilyViolation { family: HomographyFamily },
    /// Focal lengths must be strictly positive.
    #[error("invalid intrinsics: fx = {fx}, fy = {fy} (must be > 0)")]
    InvalidIntrinsics { fx: f64, fy: f64 },
    /// The rotation block is not a proper rotation.
    #[error("invalid rotation: orthogonality residual {ortho:.3e}, det {det}")]
    InvalidRotation { ortho: f64, det: f64 },
    /// A plane normal of zero length was supplied.
    #[error("plane normal has zero length")]
    ZeroNormal,
}
