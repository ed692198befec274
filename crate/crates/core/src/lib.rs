//! Sim-to-real alignment toolkit.
//!
//! This crate aligns a simulated digital twin with a real scene observed by
//! an RGB camera, using three independent regressions plus a task-graph
//! planner and a fluent-consistency validator:
//!
//! 1. **Camera alignment** ([`regression::fit_homography`]): a constrained
//!    least-squares homography mapping simulated-camera pixels to
//!    real-camera pixels, in projective, affine or two-parameter families.
//! 2. **Simulated-camera calibration** ([`regression::fit_intrinsics`]):
//!    pinhole intrinsics from 2D-3D correspondences at a known pose, with
//!    plane-constrained backprojection
//!    ([`geometry::CameraModel::backproject_to_plane`]) to localize objects.
//! 3. **Control correction** ([`regression::fit_correction`]): a 3D affine
//!    map absorbing systematic robot-control error between planned and
//!    observed positions.
//!
//! On top of the regressions sit [`twin`] (contour → key points → placed
//! objects on a support plane), [`planner`] (And-Or task graphs expanded
//! into ordered atomic actions), [`fluents`] (checkpoint questionnaires and
//! the `exp(-hamming)` consistency score between simulated and real
//! execution), and [`synth`] (a seeded synthetic benchmark harness that
//! generates ground-truth camera pairs and reproduces the regression
//! ablation end to end).
//!
//! All types are immutable values and all operations are pure functions;
//! everything here is safe to call concurrently.

pub mod fluents;
pub mod geometry;
pub mod planner;
pub mod regression;
pub mod twin;

mod serde_util;
