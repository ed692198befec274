//! Direct 3x3 linear solve by Gaussian elimination with partial pivoting.

use nalgebra::{Matrix3, Vector3};

use super::GeometryError;

/// Solve `a * x = b` for a 3x3 system.
///
/// Singularity is declared when a pivot falls below `pivot_ratio_eps`
/// times the largest absolute entry of the original matrix, and reported
/// as [`GeometryError::RayParallelToPlane`] by the backprojection caller.
pub fn solve3(
    a: &Matrix3<f64>,
    b: &Vector3<f64>,
    pivot_ratio_eps: f64,
) -> Result<Vector3<f64>, GeometryError> {
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Err(GeometryError::SingularMatrix { det: 0.0 });
    }
    let threshold = pivot_ratio_eps * scale;

    let mut m = [
        [a[(0, 0)], a[(0, 1)], a[(0, 2)], b[0]],
        [a[(1, 0)], a[(1, 1)], a[(1, 2)], b[1]],
        [a[(2, 0)], a[(2, 1)], a[(2, 2)], b[2]],
    ];

    for col in 0..3 {
        let mut pivot_row = col;
        for row in col + 1..3 {
            if m[row][col].abs() > m[pivot_row][col].abs() {
                pivot_row = row;
            }
        }
        if m[pivot_row][col].abs() <= threshold {
            return Err(GeometryError::SingularMatrix {
                det: m[pivot_row][col],
            });
        }
        m.swap(col, pivot_row);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] -= f * m[col][k];
            }
        }
    }

    let mut x = [0.0f64; 3];
    for row in (0..3).rev() {
        let mut acc = m[row][3];
        for k in row + 1..3 {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    Ok(Vector3::new(x[0], x[1], x[2]))
}
