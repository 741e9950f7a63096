//! Minimum enclosing circle.

use serde::{Deserialize, Serialize};

use crate::terrain::Point2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point2,
    pub radius: f64,
}

impl Circle {
    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        p.dist(self.center) <= self.radius + tol
    }

    fn diameter(a: Point2, b: Point2) -> Self {
        let center = Point2::new(0.5 * (a.x + b.x), 0.5 * (a.y + b.y));
        Self {
            center,
            radius: center.dist(a).max(center.dist(b)),
        }
    }

    /// Circumcircle, or `None` for collinear points.
    pub(crate) fn circumscribed(a: Point2, b: Point2, c: Point2) -> Option<Self> {
        let (bx, by) = (b.x - a.x, b.y - a.y);
        let (cx, cy) = (c.x - a.x, c.y - a.y);
        let d = 2.0 * (bx * cy - by * cx);
        if d.abs() < 1e-12 * (bx.abs() + by.abs() + cx.abs() + cy.abs()).powi(2) {
            return None;
        }
        let b2 = bx * bx + by * by;
        let c2 = cx * cx + cy * cy;
        let center = Point2::new(a.x + (cy * b2 - by * c2) / d, a.y + (bx * c2 - cx * b2) / d);
        Some(Self {
            center,
            radius: center.dist(a).max(center.dist(b)).max(center.dist(c)),
        })
    }
}

const TOL: f64 = 1e-9;

/// Exact minimum enclosing circle by incremental construction (Welzl's
/// scheme without recursion). Input order is kept, so the result is
/// deterministic.
///
/// # Panics
/// Panics on an empty slice.
pub fn min_enclosing_circle(points: &[Point2]) -> Circle {
    assert!(!points.is_empty(), "min_enclosing_circle needs at least one point");
    let mut c = Circle {
        center: points[0],
        radius: 0.0,
    };
    for i in 1..points.len() {
        if c.contains(points[i], TOL) {
            continue;
        }
        c = Circle {
            center: points[i],
            radius: 0.0,
        };
        for j in 0..i {
            if c.contains(points[j], TOL) {
                continue;
            }
            c = Circle::diameter(points[i], points[j]);
            for k in 0..j {
                if c.contains(points[k], TOL) {
                    continue;
                }
                c = Circle::circumscribed(points[i], points[j], points[k]).unwrap_or_else(|| {
                    // Collinear: the farthest pair spans the circle.
                    let trio = [points[i], points[j], points[k]];
                    let mut best = Circle::diameter(trio[0], trio[1]);
                    for (a, b) in [(0, 2), (1, 2)] {
                        let cand = Circle::diameter(trio[a], trio[b]);
                        if cand.radius > best.radius {
                            best = cand;
                        }
                    }
                    best
                });
            }
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn trivial_cases() {
        let p = Point2::new(1.0, 2.0);
        assert_eq!(min_enclosing_circle(&[p]).radius, 0.0);
        let c = min_enclosing_circle(&[Point2::new(0.0, 0.0), Point2::new(6.0, 8.0)]);
        assert!(c.center.dist(Point2::new(3.0, 4.0)) < 1e-12);
        assert!((c.radius - 5.0).abs() < 1e-12);
    }

    #[test]
    fn collinear_and_duplicates() {
        let pts = [
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(3.0, 3.0),
            Point2::new(1.0, 1.0),
            Point2::new(2.0, 2.0),
        ];
        let c = min_enclosing_circle(&pts);
        assert!(c.center.dist(Point2::new(1.5, 1.5)) < 1e-12);
        assert!((c.radius - 4.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn right_triangle_uses_hypotenuse() {
        let c = min_enclosing_circle(&[Point2::new(0.0, 0.0), Point2::new(4.0, 0.0), Point2::new(0.0, 3.0)]);
        assert!(c.center.dist(Point2::new(2.0, 1.5)) < 1e-12);
        assert!((c.radius - 2.5).abs() < 1e-12);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let pts: Vec<Point2> = (0..30)
            .map(|_| Point2::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)))
            .collect();
        let c = min_enclosing_circle(&pts);
        assert!(pts.iter().all(|&p| c.contains(p, 1e-9)));
    }
}
