//! Geometric median (Fermat-Weber point).

use crate::terrain::Point2;

const MAX_ITER: usize = 10_000;

/// Minimizer of the summed Euclidean distance to `points`, by Weiszfeld
/// iteration with the Vardi-Zhang correction at input points. Starts from
/// the centroid, so two points give their midpoint.
///
/// # Panics
/// Panics on an empty slice.
pub fn fermat_weber(points: &[Point2], tol: f64) -> Point2 {
    assert!(!points.is_empty(), "fermat_weber needs at least one point");
    let k = points.len() as f64;
    let mut y = Point2::new(
        points.iter().map(|p| p.x).sum::<f64>() / k,
        points.iter().map(|p| p.y).sum::<f64>() / k,
    );
    for _ in 0..MAX_ITER {
        let mut coincident = 0.0;
        let (mut tx, mut ty, mut wsum) = (0.0, 0.0, 0.0);
        let (mut rx, mut ry) = (0.0, 0.0);
        for p in points {
            let d = p.dist(y);
            if d <= tol * 1e-3 {
                coincident += 1.0;
                continue;
            }
            wsum += 1.0 / d;
            tx += p.x / d;
            ty += p.y / d;
            rx += (p.x - y.x) / d;
            ry += (p.y - y.y) / d;
        }
        if wsum == 0.0 {
            return y;
        }
        let t = Point2::new(tx / wsum, ty / wsum);
        let next = if coincident == 0.0 {
            t
        } else {
            let r = rx.hypot(ry);
            if r <= coincident {
                return y;
            }
            let a = coincident / r;
            Point2::new((1.0 - a) * t.x + a * y.x, (1.0 - a) * t.y + a * y.y)
        };
        let step = next.dist(y);
        y = next;
        if step <= tol {
            break;
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cost(points: &[Point2], y: Point2) -> f64 {
        points.iter().map(|p| p.dist(y)).sum()
    }

    #[test]
    fn trivial_cases() {
        let p = Point2::new(3.0, -2.0);
        assert_eq!(fermat_weber(&[p], 1e-9), p);
        let m = fermat_weber(&[Point2::new(0.0, 0.0), Point2::new(4.0, 2.0)], 1e-9);
        assert!(m.dist(Point2::new(2.0, 1.0)) < 1e-12);
    }

    #[test]
    fn equilateral_triangle_gives_centroid() {
        let s = 3f64.sqrt();
        let pts = [Point2::new(0.0, 0.0), Point2::new(2.0, 0.0), Point2::new(1.0, s)];
        let m = fermat_weber(&pts, 1e-12);
        assert!(m.dist(Point2::new(1.0, s / 3.0)) < 1e-6, "{m:?}");
    }

    #[test]
    fn obtuse_vertex_is_optimal() {
        // Angle at the origin exceeds 120 degrees.
        let pts = [Point2::new(0.0, 0.0), Point2::new(10.0, 1.0), Point2::new(-10.0, 1.0)];
        let m = fermat_weber(&pts, 1e-12);
        assert!(m.dist(Point2::new(0.0, 0.0)) < 1e-6, "{m:?}");
    }

    #[test]
    fn matches_grid_search() {
        let pts = [
            Point2::new(0.0, 0.0),
            Point2::new(7.0, 1.0),
            Point2::new(3.0, 9.0),
            Point2::new(-4.0, 5.0),
            Point2::new(1.0, 2.0),
        ];
        let m = fermat_weber(&pts, 1e-12);
        let mut best = f64::INFINITY;
        for i in -400..=400 {
            for j in -400..=400 {
                let q = Point2::new(1.0 + f64::from(i) * 0.01, 2.0 + f64::from(j) * 0.01);
                best = best.min(cost(&pts, q));
            }
        }
        assert!(cost(&pts, m) <= best + 1e-9);
    }
}
