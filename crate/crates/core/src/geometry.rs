//! Convex polygon clipping against half-planes (Sutherland–Hodgman on a
//! single convex subject polygon).

pub type Point = [f64; 2];

/// Axis-aligned square `[-w, w]²`, counterclockwise.
pub fn square(w: f64) -> Vec<Point> {
    vec![[-w, -w], [w, -w], [w, w], [-w, w]]
}

/// Keeps the part of a convex polygon where `a · x ≤ b`.
///
/// Points within `eps` of the boundary count as inside, so clipping by both
/// sides of a line leaves a degenerate segment instead of nothing.
pub fn clip_halfplane(poly: &[Point], a: Point, b: f64, eps: f64) -> Vec<Point> {
    if poly.is_empty() {
        return Vec::new();
    }
    let side = |p: &Point| a[0] * p[0] + a[1] * p[1] - b;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let cur = poly[i];
        let next = poly[(i + 1) % poly.len()];
        let (sc, sn) = (side(&cur), side(&next));
        let cur_in = sc <= eps;
        let next_in = sn <= eps;
        if cur_in {
            out.push(cur);
        }
        if cur_in != next_in && (sc - sn).abs() > 0.0 {
            let t = sc / (sc - sn);
            out.push([cur[0] + t * (next[0] - cur[0]), cur[1] + t * (next[1] - cur[1])]);
        }
    }
    dedup(out, eps.max(1e-12))
}

/// Drops consecutive (cyclically) coincident vertices.
fn dedup(points: Vec<Point>, eps: f64) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(points.len());
    for p in points {
        if out.last().is_some_and(|q| close(q, &p, eps)) {
            continue;
        }
        out.push(p);
    }
    while out.len() > 1 && close(&out[0], out.last().unwrap(), eps) {
        out.pop();
    }
    out
}

fn close(p: &Point, q: &Point, eps: f64) -> bool {
    (p[0] - q[0]).abs() <= eps && (p[1] - q[1]).abs() <= eps
}

/// Rotates the vertex list so it starts at the lexicographically smallest
/// vertex; orientation is preserved.
pub fn canonical_start(mut poly: Vec<Point>) -> Vec<Point> {
    if let Some(k) = (0..poly.len()).min_by(|&i, &j| {
        poly[i][0]
            .total_cmp(&poly[j][0])
            .then(poly[i][1].total_cmp(&poly[j][1]))
    }) {
        poly.rotate_left(k);
    }
    poly
}

/// Twice the signed area; positive for counterclockwise polygons.
pub fn signed_area2(poly: &[Point]) -> f64 {
    (0..poly.len())
        .map(|i| {
            let p = poly[i];
            let q = poly[(i + 1) % poly.len()];
            p[0] * q[1] - q[0] * p[1]
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clip_square_by_diagonal() {
        let sq = square(1.0);
        let tri = clip_halfplane(&sq, [1.0, 1.0], 0.0, 1e-12);
        assert_eq!(tri.len(), 3);
        assert!(signed_area2(&tri) > 0.0);
        assert!((signed_area2(&tri) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn clip_to_nothing_and_to_a_segment() {
        let sq = square(1.0);
        assert!(clip_halfplane(&sq, [1.0, 0.0], -2.0, 1e-12).is_empty());
        let seg = clip_halfplane(&clip_halfplane(&sq, [1.0, 0.0], 0.0, 1e-12), [-1.0, 0.0], 0.0, 1e-12);
        assert_eq!(seg.len(), 2);
        assert!(seg.iter().all(|p| p[0].abs() < 1e-12));
    }
}
