//! Control-correction fitting: the least-squares 3D affine map from
//! planned to observed positions.

use nalgebra::{DMatrix, Matrix3, Vector3};

use super::lstsq::svd_least_squares;
use super::types::{Correction3D, Correspondence3D3D, FitReport, ResidualStats};
use super::{FitOptions, RegressionError};

/// Fit the 12-parameter affine correction mapping planned positions to
/// their observed (should-be) positions, with default options.
pub fn fit_correction(
    pairs: &[Correspondence3D3D],
) -> Result<FitReport<Correction3D>, RegressionError> {
    fit_correction_with(pairs, &FitOptions::default())
}

/// Fit with explicit thresholds. Requires at least 4 pairs whose planned
/// points are not coplanar; coplanar data leaves the homogeneous design
/// matrix rank-deficient.
pub fn fit_correction_with(
    pairs: &[Correspondence3D3D],
    opts: &FitOptions,
) -> Result<FitReport<Correction3D>, RegressionError> {
    if pairs.len() < 4 {
        return Err(RegressionError::InsufficientPoints {
            needed: 4,
            got: pairs.len(),
        });
    }
    for (index, pair) in pairs.iter().enumerate() {
        if !(pair.planned.is_finite() && pair.corrected.is_finite()) {
            return Err(RegressionError::NonFiniteInput { index });
        }
    }

    let n = pairs.len();
    let mut a = DMatrix::<f64>::zeros(n, 4);
    let mut b = DMatrix::<f64>::zeros(n, 3);
    for (i, pair) in pairs.iter().enumerate() {
        a[(i, 0)] = pair.planned.x;
        a[(i, 1)] = pair.planned.y;
        a[(i, 2)] = pair.planned.z;
        a[(i, 3)] = 1.0;
        b[(i, 0)] = pair.corrected.x;
        b[(i, 1)] = pair.corrected.y;
        b[(i, 2)] = pair.corrected.z;
    }

    let sol = svd_least_squares(a, b, opts.singular_ratio_eps)
        .map_err(|rank| RegressionError::DegenerateConfiguration { rank, needed: 4 })?;
    // Column c of the solution holds the affine row for output coordinate c.
    let linear = Matrix3::new(
        sol.x[(0, 0)],
        sol.x[(1, 0)],
        sol.x[(2, 0)],
        sol.x[(0, 1)],
        sol.x[(1, 1)],
        sol.x[(2, 1)],
        sol.x[(0, 2)],
        sol.x[(1, 2)],
        sol.x[(2, 2)],
    );
    let translation = Vector3::new(sol.x[(3, 0)], sol.x[(3, 1)], sol.x[(3, 2)]);
    let model = Correction3D::from_parts(linear, translation)?;

    let residuals: Vec<f64> = pairs
        .iter()
        .map(|pair| model.apply(pair.planned).distance(&pair.corrected))
        .collect();
    Ok(FitReport {
        model,
        stats: ResidualStats::from_residuals(&residuals),
        condition_estimate: sol.condition,
    })
}
