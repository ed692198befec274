//! The three alignment regressions: camera-alignment homography fits,
//! simulated-camera intrinsics calibration, and 3D affine control
//! correction, plus holdout evaluation of a fitted alignment.
//!
//! Every fit is an exact linear least-squares solve (no iteration, no
//! robustification) and is deterministic: identical inputs produce
//! bitwise-identical reports.

mod alignment;
mod calibration;
mod correction;
pub(crate) mod lstsq;
mod types;

pub use alignment::{evaluate_alignment, fit_homography, fit_homography_with};
pub use calibration::{fit_intrinsics, fit_intrinsics_with};
pub use correction::{fit_correction, fit_correction_with};
pub use types::{
    Correction3D, Correspondence2D2D, Correspondence2D3D, Correspondence3D3D, FitReport,
    ResidualStats,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::GeometryError;

/// Singular-value ratio below which a design matrix is declared
/// rank-deficient, relative to its largest singular value.
pub const SINGULAR_RATIO_EPS: f64 = 1e-10;

/// Which two-parameter alignment model `fit_homography` uses for the
/// two-DOF family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwoDofConvention {
    /// Per-axis scaling about the pixel origin: `A = diag(sx, sy)`, `b = 0`.
    #[default]
    Scaling,
    /// Pure translation: `A = I`, `b` free.
    Translation,
}

/// Tunable thresholds and conventions for the fitting operations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Rank-detection threshold (singular-value ratio).
    pub singular_ratio_eps: f64,
    /// Two-DOF model convention.
    pub two_dof: TwoDofConvention,
    /// Degeneracy threshold for homogeneous division when evaluating
    /// residuals of a fitted homography.
    pub homogeneous_eps_rel: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            singular_ratio_eps: SINGULAR_RATIO_EPS,
            two_dof: TwoDofConvention::default(),
            homogeneous_eps_rel: crate::geometry::HOMOGENEOUS_EPS_REL,
        }
    }
}

/// Errors from the fitting operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegressionError {
    #[error("insufficient points: need at least {needed}, got {got}")]
    InsufficientPoints { needed: usize, got: usize },
    /// The design matrix is rank-deficient (collinear or coplanar data,
    /// constant regressors).
    #[error("degenerate configuration: design matrix rank {rank}, need {needed}")]
    DegenerateConfiguration { rank: usize, needed: usize },
    /// The unconstrained optimum violates a hard model constraint
    /// (e.g. a nonpositive focal length); the data is considered corrupt
    /// rather than clamped to the boundary.
    #[error("constraint violation: {what}")]
    ConstraintViolation { what: String },
    #[error("non-finite input at record {index}")]
    NonFiniteInput { index: usize },
    /// A geometric failure attributable to one input point.
    #[error("point {index}: {source}")]
    BadPoint { index: usize, source: GeometryError },
    /// The fitted parameters do not form a valid model.
    #[error("fitted model invalid: {0}")]
    InvalidModel(#[from] GeometryError),
}
