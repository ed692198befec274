//! Camera-alignment fitting: least-squares homographies from pixel pairs,
//! and holdout evaluation of a fitted map.

use nalgebra::{DMatrix, Matrix3};

use super::lstsq::{denormalizer, normalize_points, svd_least_squares};
use super::types::{Correspondence2D2D, FitReport, ResidualStats};
use super::{FitOptions, RegressionError, TwoDofConvention};
use crate::geometry::{Homography, HomographyFamily, Point2};

/// Fit the least-squares map of the requested family taking simulated
/// pixels to real pixels, with default options.
pub fn fit_homography(
    pairs: &[Correspondence2D2D],
    family: HomographyFamily,
) -> Result<FitReport<Homography>, RegressionError> {
    fit_homography_with(pairs, family, &FitOptions::default())
}

/// Fit with explicit thresholds and two-DOF convention.
///
/// The projective fit fixes the bottom-right entry to 1 and solves the
/// linearized system in the remaining 8 unknowns; isotropic point
/// normalization is applied internally for conditioning and undone before
/// reporting. Residuals are per-point Euclidean pixel distances on the
/// raw data.
pub fn fit_homography_with(
    pairs: &[Correspondence2D2D],
    family: HomographyFamily,
    opts: &FitOptions,
) -> Result<FitReport<Homography>, RegressionError> {
    for (i, p) in pairs.iter().enumerate() {
        if !(p.sim.is_finite() && p.real.is_finite()) {
            return Err(RegressionError::NonFiniteInput { index: i });
        }
    }
    let needed = family.min_points();
    if pairs.len() < needed {
        return Err(RegressionError::InsufficientPoints {
            needed,
            got: pairs.len(),
        });
    }

    let (model, condition) = match family {
        HomographyFamily::Projective => fit_projective(pairs, opts)?,
        HomographyFamily::Affine => fit_affine(pairs, opts)?,
        HomographyFamily::TwoDof => match opts.two_dof {
            TwoDofConvention::Scaling => fit_scaling(pairs, opts)?,
            TwoDofConvention::Translation => fit_translation(pairs)?,
        },
    };

    let residuals = homography_residuals(&model, pairs, opts.homogeneous_eps_rel)?;
    Ok(FitReport {
        model,
        stats: ResidualStats::from_residuals(&residuals),
        condition_estimate: condition,
    })
}

/// Residual statistics of a fitted map on held-out pixel pairs.
pub fn evaluate_alignment(
    h: &Homography,
    holdout: &[Correspondence2D2D],
) -> Result<ResidualStats, RegressionError> {
    if holdout.is_empty() {
        return Err(RegressionError::InsufficientPoints { needed: 1, got: 0 });
    }
    for (i, p) in holdout.iter().enumerate() {
        if !(p.sim.is_finite() && p.real.is_finite()) {
            return Err(RegressionError::NonFiniteInput { index: i });
        }
    }
    let residuals = homography_residuals(h, holdout, crate::geometry::HOMOGENEOUS_EPS_REL)?;
    Ok(ResidualStats::from_residuals(&residuals))
}

fn homography_residuals(
    h: &Homography,
    pairs: &[Correspondence2D2D],
    eps_rel: f64,
) -> Result<Vec<f64>, RegressionError> {
    pairs
        .iter()
        .enumerate()
        .map(|(index, pair)| {
            let predicted = h
                .apply_with(pair.sim, eps_rel)
                .map_err(|source| RegressionError::BadPoint { index, source })?;
            Ok(predicted.distance(&pair.real))
        })
        .collect()
}

fn split(pairs: &[Correspondence2D2D]) -> (Vec<Point2>, Vec<Point2>) {
    (
        pairs.iter().map(|p| p.sim).collect(),
        pairs.iter().map(|p| p.real).collect(),
    )
}

fn fit_projective(
    pairs: &[Correspondence2D2D],
    opts: &FitOptions,
) -> Result<(Homography, f64), RegressionError> {
    let (sim, real) = split(pairs);
    let (sim_n, t_sim) = normalize_points(&sim);
    let (real_n, t_real) = normalize_points(&real);

    let n = pairs.len();
    let mut a = DMatrix::<f64>::zeros(2 * n, 8);
    let mut b = DMatrix::<f64>::zeros(2 * n, 1);
    for i in 0..n {
        let (x, y) = (sim_n[i].x, sim_n[i].y);
        let (u, v) = (real_n[i].x, real_n[i].y);
        let r0 = 2 * i;
        let r1 = 2 * i + 1;
        a[(r0, 0)] = x;
        a[(r0, 1)] = y;
        a[(r0, 2)] = 1.0;
        a[(r0, 6)] = -u * x;
        a[(r0, 7)] = -u * y;
        b[(r0, 0)] = u;
        a[(r1, 3)] = x;
        a[(r1, 4)] = y;
        a[(r1, 5)] = 1.0;
        a[(r1, 6)] = -v * x;
        a[(r1, 7)] = -v * y;
        b[(r1, 0)] = v;
    }

    let sol = svd_least_squares(a, b, opts.singular_ratio_eps)
        .map_err(|rank| RegressionError::DegenerateConfiguration { rank, needed: 8 })?;
    let h = &sol.x;
    let m_norm = Matrix3::new(
        h[(0, 0)],
        h[(1, 0)],
        h[(2, 0)],
        h[(3, 0)],
        h[(4, 0)],
        h[(5, 0)],
        h[(6, 0)],
        h[(7, 0)],
        1.0,
    );
    let m = denormalizer(&t_real) * m_norm * t_sim;
    let model = Homography::new(m, HomographyFamily::Projective)?;
    Ok((model, sol.condition))
}

fn fit_affine(
    pairs: &[Correspondence2D2D],
    opts: &FitOptions,
) -> Result<(Homography, f64), RegressionError> {
    let (sim, real) = split(pairs);
    let (sim_n, t_sim) = normalize_points(&sim);
    let (real_n, t_real) = normalize_points(&real);

    let n = pairs.len();
    let mut a = DMatrix::<f64>::zeros(2 * n, 6);
    let mut b = DMatrix::<f64>::zeros(2 * n, 1);
    for i in 0..n {
        let (x, y) = (sim_n[i].x, sim_n[i].y);
        let r0 = 2 * i;
        let r1 = 2 * i + 1;
        a[(r0, 0)] = x;
        a[(r0, 1)] = y;
        a[(r0, 2)] = 1.0;
        b[(r0, 0)] = real_n[i].x;
        a[(r1, 3)] = x;
        a[(r1, 4)] = y;
        a[(r1, 5)] = 1.0;
        b[(r1, 0)] = real_n[i].y;
    }

    let sol = svd_least_squares(a, b, opts.singular_ratio_eps)
        .map_err(|rank| RegressionError::DegenerateConfiguration { rank, needed: 6 })?;
    let h = &sol.x;
    let m_norm = Matrix3::new(
        h[(0, 0)],
        h[(1, 0)],
        h[(2, 0)],
        h[(3, 0)],
        h[(4, 0)],
        h[(5, 0)],
        0.0,
        0.0,
        1.0,
    );
    let m = denormalizer(&t_real) * m_norm * t_sim;
    let model = Homography::new(m, HomographyFamily::Affine)?;
    Ok((model, sol.condition))
}

/// Per-axis scaling about the pixel origin. Fitted on raw coordinates:
/// the model class is not closed under recentering, so normalization
/// would change what is being fitted.
fn fit_scaling(
    pairs: &[Correspondence2D2D],
    opts: &FitOptions,
) -> Result<(Homography, f64), RegressionError> {
    let axis = |coords: &dyn Fn(&Correspondence2D2D) -> (f64, f64)| -> Result<f64, usize> {
        let mut num = 0.0;
        let mut den = 0.0;
        let mut max_abs = 0.0f64;
        for pair in pairs {
            let (x, u) = coords(pair);
            num += u * x;
            den += x * x;
            max_abs = max_abs.max(x.abs());
        }
        let threshold = (opts.singular_ratio_eps * max_abs).powi(2) * pairs.len() as f64;
        if den <= threshold {
            return Err(0);
        }
        Ok(num / den)
    };

    let sx = axis(&|p: &Correspondence2D2D| (p.sim.x, p.real.x));
    let sy = axis(&|p: &Correspondence2D2D| (p.sim.y, p.real.y));
    let rank = sx.is_ok() as usize + sy.is_ok() as usize;
    let (sx, sy) = match (sx, sy) {
        (Ok(sx), Ok(sy)) => (sx, sy),
        _ => return Err(RegressionError::DegenerateConfiguration { rank, needed: 2 }),
    };
    let m = Matrix3::new(sx, 0.0, 0.0, 0.0, sy, 0.0, 0.0, 0.0, 1.0);
    let model = Homography::new(m, HomographyFamily::TwoDof)?;
    // Two uncoupled single-parameter solves.
    Ok((model, 1.0))
}

fn fit_translation(pairs: &[Correspondence2D2D]) -> Result<(Homography, f64), RegressionError> {
    let n = pairs.len() as f64;
    let bx = pairs.iter().map(|p| p.real.x - p.sim.x).sum::<f64>() / n;
    let by = pairs.iter().map(|p| p.real.y - p.sim.y).sum::<f64>() / n;
    let m = Matrix3::new(1.0, 0.0, bx, 0.0, 1.0, by, 0.0, 0.0, 1.0);
    let model = Homography::new(m, HomographyFamily::TwoDof)?;
    Ok((model, 1.0))
}
