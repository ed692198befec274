//! Closed-contour simplification and corner selection.

use crate::geometry::Point2;

/// Perimeter of a closed polyline.
pub(crate) fn perimeter(points: &[Point2]) -> f64 {
    let n = points.len();
    (0..n)
        .map(|i| points[i].distance(&points[(i + 1) % n]))
        .sum()
}

fn point_segment_distance(p: &Point2, a: &Point2, b: &Point2) -> f64 {
    let abx = b.x - a.x;
    let aby = b.y - a.y;
    let len2 = abx * abx + aby * aby;
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = (((p.x - a.x) * abx + (p.y - a.y) * aby) / len2).clamp(0.0, 1.0);
    p.distance(&Point2::new(a.x + t * abx, a.y + t * aby))
}

/// Douglas-Peucker on an open chain; endpoints are always kept.
fn decimate_chain(points: &[Point2], tolerance: f64, keep: &mut Vec<Point2>) {
    if points.len() < 3 {
        keep.extend_from_slice(&points[..points.len().saturating_sub(1)]);
        return;
    }
    let first = points[0];
    let last = points[points.len() - 1];
    let mut max_dist = -1.0;
    let mut max_idx = 0;
    for (i, p) in points.iter().enumerate().take(points.len() - 1).skip(1) {
        let d = point_segment_distance(p, &first, &last);
        if d > max_dist {
            max_dist = d;
            max_idx = i;
        }
    }
    if max_dist > tolerance {
        decimate_chain(&points[..=max_idx], tolerance, keep);
        decimate_chain(&points[max_idx..], tolerance, keep);
    } else {
        keep.push(first);
    }
}

/// Simplify a closed contour: split at the two mutually farthest
/// vertices, decimate each chain, and rejoin.
pub(crate) fn simplify_closed(points: &[Point2], tolerance: f64) -> Vec<Point2> {
    let n = points.len();
    if n <= 3 {
        return points.to_vec();
    }
    let (mut best_i, mut best_j, mut best_d) = (0usize, 1usize, -1.0f64);
    for i in 0..n {
        for j in i + 1..n {
            let d = points[i].distance(&points[j]);
            if d > best_d {
                best_d = d;
                best_i = i;
                best_j = j;
            }
        }
    }

    let chain_a: Vec<Point2> = points[best_i..=best_j].to_vec();
    let mut chain_b: Vec<Point2> = points[best_j..].to_vec();
    chain_b.extend_from_slice(&points[..=best_i]);

    let mut keep = Vec::new();
    decimate_chain(&chain_a, tolerance, &mut keep);
    decimate_chain(&chain_b, tolerance, &mut keep);
    keep
}

/// Absolute turning angle at `cur` between the incoming and outgoing
/// edge directions, in `[0, pi]`.
pub(crate) fn turning_angle(prev: &Point2, cur: &Point2, next: &Point2) -> f64 {
    let (ax, ay) = (cur.x - prev.x, cur.y - prev.y);
    let (bx, by) = (next.x - cur.x, next.y - cur.y);
    let na = ax.hypot(ay);
    let nb = bx.hypot(by);
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    let cos = ((ax * bx + ay * by) / (na * nb)).clamp(-1.0, 1.0);
    cos.acos()
}

/// Keep the `k` vertices of a closed polygon with the largest turning
/// angles, preserving polygon order.
pub(crate) fn select_corners(polygon: &[Point2], k: usize) -> Vec<Point2> {
    let n = polygon.len();
    let mut scored: Vec<(usize, f64)> = (0..n)
        .map(|i| {
            let prev = &polygon[(i + n - 1) % n];
            let next = &polygon[(i + 1) % n];
            (i, turning_angle(prev, &polygon[i], next))
        })
        .collect();
    scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    let mut picked: Vec<usize> = scored.iter().take(k).map(|s| s.0).collect();
    picked.sort_unstable();
    picked.into_iter().map(|i| polygon[i]).collect()
}

/// Order corners clockwise on screen (image y grows downward), starting
/// from the corner nearest the top-left (smallest x + y, ties broken by
/// smaller y then x).
pub(crate) fn order_clockwise_from_top_left(corners: &[Point2]) -> Vec<Point2> {
    let n = corners.len() as f64;
    let cx = corners.iter().map(|p| p.x).sum::<f64>() / n;
    let cy = corners.iter().map(|p| p.y).sum::<f64>() / n;
    let mut ordered = corners.to_vec();
    // Ascending atan2 sweeps +x toward +y(down): clockwise on screen.
    ordered.sort_by(|a, b| {
        let ta = (a.y - cy).atan2(a.x - cx);
        let tb = (b.y - cy).atan2(b.x - cx);
        ta.partial_cmp(&tb).unwrap()
    });
    let start = ordered
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            (a.x + a.y)
                .partial_cmp(&(b.x + b.y))
                .unwrap()
                .then(a.y.partial_cmp(&b.y).unwrap())
                .then(a.x.partial_cmp(&b.x).unwrap())
        })
        .map(|(i, _)| i)
        .unwrap_or(0);
    ordered.rotate_left(start);
    ordered
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Vec<Point2> {
        vec![
            Point2::new(0.0, 0.0),
            Point2::new(100.0, 0.0),
            Point2::new(100.0, 100.0),
            Point2::new(0.0, 100.0),
        ]
    }

    #[test]
    fn perimeter_of_square() {
        assert!((perimeter(&square()) - 400.0).abs() < 1e-12);
    }

    #[test]
    fn dense_square_simplifies_to_corners() {
        // 16 samples per side, corners included.
        let sq = square();
        let mut dense = Vec::new();
        for s in 0..4 {
            let a = sq[s];
            let b = sq[(s + 1) % 4];
            for k in 0..16 {
                let t = k as f64 / 16.0;
                dense.push(Point2::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)));
            }
        }
        let simplified = simplify_closed(&dense, 0.01 * perimeter(&dense));
        assert!(simplified.len() >= 4 && simplified.len() <= 6);
        let corners = select_corners(&simplified, 4);
        let ordered = order_clockwise_from_top_left(&corners);
        let expected = [
            Point2::new(0.0, 0.0),
            Point2::new(100.0, 0.0),
            Point2::new(100.0, 100.0),
            Point2::new(0.0, 100.0),
        ];
        for (got, want) in ordered.iter().zip(expected.iter()) {
            assert!(got.distance(want) < 1e-9, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn ordering_starts_top_left_and_runs_clockwise() {
        let shuffled = vec![
            Point2::new(100.0, 100.0),
            Point2::new(0.0, 0.0),
            Point2::new(0.0, 100.0),
            Point2::new(100.0, 0.0),
        ];
        let ordered = order_clockwise_from_top_left(&shuffled);
        assert_eq!(ordered[0], Point2::new(0.0, 0.0));
        assert_eq!(ordered[1], Point2::new(100.0, 0.0));
        assert_eq!(ordered[2], Point2::new(100.0, 100.0));
        assert_eq!(ordered[3], Point2::new(0.0, 100.0));
    }

    #[test]
    fn turning_angle_is_right_angle_on_square_corner() {
        let a = turning_angle(
            &Point2::new(0.0, 100.0),
            &Point2::new(0.0, 0.0),
            &Point2::new(100.0, 0.0),
        );
        assert!((a - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }
}
