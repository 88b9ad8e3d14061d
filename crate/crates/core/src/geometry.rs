//! Exact 2-D halfplane intersection by pairwise line intersection.
//!
//! With at most a dozen constraints the quadratic candidate set is tiny, so
//! every pair of boundary lines is intersected and the feasible candidates
//! are kept.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use crate::core_math::Rational;

pub type Point = (Rational, Rational);

/// `c1 * x + c2 * y <= rhs`
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HalfPlane {
    pub c1: Rational,
    pub c2: Rational,
    pub rhs: Rational,
}

impl HalfPlane {
    pub fn new(c1: Rational, c2: Rational, rhs: Rational) -> Self {
        HalfPlane { c1, c2, rhs }
    }

    pub fn lhs(&self, p: Point) -> Rational {
        self.c1 * p.0 + self.c2 * p.1
    }

    pub fn contains(&self, p: Point) -> bool {
        self.lhs(p) <= self.rhs
    }

    pub fn is_tight(&self, p: Point) -> bool {
        self.lhs(p) == self.rhs
    }

    fn is_degenerate(&self) -> bool {
        self.c1.is_zero() && self.c2.is_zero()
    }

    /// Intersection of the two boundary lines; `None` when parallel.
    pub fn meet(&self, other: &HalfPlane) -> Option<Point> {
        let det = self.c1 * other.c2 - other.c1 * self.c2;
        if det.is_zero() {
            return None;
        }
        let x = (self.rhs * other.c2 - other.rhs * self.c2) / det;
        let y = (self.c1 * other.rhs - other.c1 * self.rhs) / det;
        Some((x, y))
    }
}

/// Vertices of the polygon `{p : h.contains(p) for all h}`, deduplicated and
/// ordered counterclockwise. Empty when the intersection is empty or has no
/// vertex (unbounded strips are not expected by callers).
pub fn vertices(planes: &[HalfPlane]) -> Vec<Point> {
    if planes.iter().any(|h| h.is_degenerate() && h.rhs.is_negative()) {
        return Vec::new();
    }
    let lines: Vec<&HalfPlane> = planes.iter().filter(|h| !h.is_degenerate()).collect();
    let mut found: Vec<Point> = Vec::new();
    for (i, a) in lines.iter().enumerate() {
        for b in &lines[i + 1..] {
            if let Some(p) = a.meet(b) {
                if planes.iter().all(|h| h.contains(p)) && !found.contains(&p) {
                    found.push(p);
                }
            }
        }
    }
    order_ccw(found)
}

fn upper_half(v: Point) -> bool {
    v.1.is_positive() || (v.1.is_zero() && v.0.is_positive())
}

/// Sorts the vertices of a convex polygon counterclockwise around their
/// centroid, starting from the direction of the positive x axis.
pub fn order_ccw(mut points: Vec<Point>) -> Vec<Point> {
    if points.len() < 2 {
        return points;
    }
    let n = points.len() as i64;
    let cx = points.iter().map(|p| p.0).sum::<Rational>() / n;
    let cy = points.iter().map(|p| p.1).sum::<Rational>() / n;
    points.sort_by(|p, q| {
        let u = (p.0 - cx, p.1 - cy);
        let v = (q.0 - cx, q.1 - cy);
        match (upper_half(u), upper_half(v)) {
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => {
                let cross = u.0 * v.1 - u.1 * v.0;
                // collinear with the centroid only happens for degenerate polygons
                Rational::zero()
                    .cmp(&cross)
                    .then_with(|| (u.0 * u.0 + u.1 * u.1).cmp(&(v.0 * v.0 + v.1 * v.1)))
            }
        }
    });
    points
}

/// Twice the signed area; positive for counterclockwise order.
pub fn doubled_area(points: &[Point]) -> Rational {
    let n = points.len();
    (0..n)
        .map(|i| {
            let (p, q) = (points[i], points[(i + 1) % n]);
            p.0 * q.1 - q.0 * p.1
        })
        .sum()
}

/// Exact point-in-convex-polygon test for a counterclockwise vertex list.
pub fn polygon_contains(polygon: &[Point], p: Point) -> bool {
    match polygon.len() {
        0 => false,
        1 => polygon[0] == p,
        n => (0..n).all(|i| {
            let (a, b) = (polygon[i], polygon[(i + 1) % n]);
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            !cross.is_negative()
        }),
    }
}
