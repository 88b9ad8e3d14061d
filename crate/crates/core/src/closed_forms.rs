//! Closed-form symmetric GDoF curves, interference regimes and the
//! zero-forcing baseline.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::core_math::{int, rat, Rational};
use crate::error::{Error, Result};
use crate::geometry::{self, HalfPlane, Point};
use crate::region::{AntennaProfile, ExponentProfile, GdofRegion};

/// One linear piece `slope * alpha + intercept` on `[lo, hi]`; `hi = None`
/// means the piece extends to infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurvePiece {
    pub lo: Rational,
    pub hi: Option<Rational>,
    pub slope: Rational,
    pub intercept: Rational,
}

impl CurvePiece {
    pub fn at(&self, alpha: Rational) -> Rational {
        self.slope * alpha + self.intercept
    }
}

/// A continuous piecewise-linear function of the interference exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricCurve {
    pub pieces: Vec<CurvePiece>,
}

impl SymmetricCurve {
    /// Pieces must be contiguous and continuous at every junction.
    pub fn new(pieces: Vec<CurvePiece>) -> Result<Self> {
        for w in pieces.windows(2) {
            let hi = w[0].hi.ok_or_else(|| Error::Domain("unbounded piece before the last".into()))?;
            if hi != w[1].lo || w[0].lo >= hi {
                return Err(Error::Domain(format!("pieces not contiguous at {hi}")));
            }
            if w[0].at(hi) != w[1].at(hi) {
                return Err(Error::Domain(format!("curve discontinuous at {hi}")));
            }
        }
        Ok(SymmetricCurve { pieces })
    }

    /// Value at `alpha`; at a junction the left piece is used, which agrees
    /// with the right one by continuity. `None` outside the domain.
    pub fn at(&self, alpha: Rational) -> Option<Rational> {
        self.pieces
            .iter()
            .find(|p| p.lo <= alpha && p.hi.is_none_or(|hi| alpha <= hi))
            .map(|p| p.at(alpha))
    }

    pub fn breakpoints(&self) -> Vec<Rational> {
        self.pieces
            .windows(2)
            .filter(|w| w[0].slope != w[1].slope)
            .map(|w| w[1].lo)
            .collect()
    }
}

fn piece(lo: Rational, hi: Option<Rational>, slope: Rational, intercept: Rational) -> CurvePiece {
    CurvePiece { lo, hi, slope, intercept }
}

/// The four-branch `D(alpha)` for the `(M, N, M, N)` channel, `M > N`.
pub fn corollary_curve(m: u32, n: u32) -> Result<SymmetricCurve> {
    if m <= n || n == 0 {
        return Err(Error::Domain(format!(
            "closed form needs M > N >= 1, got M = {m}, N = {n}; use the reciprocal channel for M <= N"
        )));
    }
    let (m, n) = (int(m.into()), int(n.into()));
    let half = rat(1, 2);
    let two_thirds = rat(2, 3);
    let one = Rational::one();
    SymmetricCurve::new(vec![
        piece(Rational::zero(), Some(half), -(n * 2 - m), n),
        piece(half, Some(two_thirds), n * 2 - m, m - n),
        piece(two_thirds, Some(one), -(n * 2 - m) / 2, n),
        piece(one, None, n / 2, m / 2 - n / 2),
    ])
}

/// `min{N, D(alpha)}` for the `(M, N, M, N)` channel with `M > N`.
pub fn corollary_d(m: u32, n: u32, alpha: Rational) -> Result<Rational> {
    if alpha < Rational::zero() {
        return Err(Error::NegativeExponent(alpha.to_string()));
    }
    let d = corollary_curve(m, n)?.at(alpha).expect("curve covers alpha >= 0");
    Ok(d.min(int(n.into())))
}

/// The SISO "W" curve: `1-a, a, 1-a/2, a/2, 1` with junctions at 1/2, 2/3, 1, 2.
pub fn siso_w_curve(alpha: Rational) -> Rational {
    let one = Rational::one();
    if alpha < rat(1, 2) {
        one - alpha
    } else if alpha < rat(2, 3) {
        alpha
    } else if alpha < one {
        one - alpha / 2
    } else if alpha < int(2) {
        alpha / 2
    } else {
        one
    }
}

/// The "V" curve of the `(1, 1, 2, 1)` channel.
pub fn curve_1121(alpha: Rational) -> Rational {
    let one = Rational::one();
    if alpha <= one {
        one - alpha / 2
    } else if alpha <= int(2) {
        alpha / 2
    } else {
        one
    }
}

/// Interference exponent from which both users of the `(M, N, M, N)`
/// channel reach `N` GDoF: `3 - M/N`.
pub fn alpha_star(m: u32, n: u32) -> Result<Rational> {
    if m < n || n == 0 {
        return Err(Error::Domain(format!("alpha* needs M >= N >= 1, got M = {m}, N = {n}")));
    }
    Ok(int(3) - rat(m.into(), n.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeLabel {
    VeryWeak,
    Weak,
    Moderate,
    Strong,
    VeryStrong,
}

impl fmt::Display for RegimeLabel {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.write_str(match self {
            RegimeLabel::VeryWeak => "very_weak",
            RegimeLabel::Weak => "weak",
            RegimeLabel::Moderate => "moderate",
            RegimeLabel::Strong => "strong",
            RegimeLabel::VeryStrong => "very_strong",
        })
    }
}

/// Left-closed intervals `[0,1/2)`, `[1/2,2/3)`, `[2/3,1)`, `[1,alpha*)`,
/// `[alpha*, inf)`; `very_strong` wins whenever `alpha >= alpha*`.
pub fn classify_regime(m: u32, n: u32, alpha: Rational) -> Result<RegimeLabel> {
    if alpha < Rational::zero() {
        return Err(Error::NegativeExponent(alpha.to_string()));
    }
    let star = alpha_star(m, n)?;
    Ok(if alpha >= star {
        RegimeLabel::VeryStrong
    } else if alpha < rat(1, 2) {
        RegimeLabel::VeryWeak
    } else if alpha < rat(2, 3) {
        RegimeLabel::Weak
    } else if alpha < Rational::one() {
        RegimeLabel::Moderate
    } else {
        RegimeLabel::Strong
    })
}

/// `min{M1+M2, N1+N2, max(M1,N2), max(M2,N1)}`, the sum-DoF bound.
pub fn dof_sum_bound(ant: &AntennaProfile) -> u32 {
    let AntennaProfile { m1, n1, m2, n2 } = *ant;
    (m1 + m2).min(n1 + n2).min(m1.max(n2)).min(m2.max(n1))
}

/// GDoF of transmit/receive zero-forcing with time sharing: integer stream
/// pairs `(s1, s2)` within the single-user limits and the stream-counting
/// sum bound, each stream worth one GDoF of its own user. A cross link with
/// zero exponent sits at the noise floor and imposes no sum constraint.
pub fn zf_only_region(ant: &AntennaProfile, exp: &ExponentProfile) -> Polygon {
    let AntennaProfile { m1, n1, m2, n2 } = *ant;
    let (dir1, dir2) = ant.direct_dims();
    let mut sum_cap = dir1 + dir2;
    if exp.a12 > Rational::zero() {
        sum_cap = sum_cap.min(m1.max(n2));
    }
    if exp.a21 > Rational::zero() {
        sum_cap = sum_cap.min(m2.max(n1));
    }
    let mut points = Vec::new();
    for s1 in 0..=dir1 {
        for s2 in 0..=dir2.min(sum_cap.saturating_sub(s1)) {
            points.push((int(s1.into()), int(s2.into())));
        }
    }
    let mut vertices = convex_hull(points);
    if let Some(pos) = vertices.iter().position(|v| v.0.is_zero() && v.1.is_zero()) {
        vertices.rotate_left(pos);
    }
    Polygon { vertices }
}

/// A convex polygon given by its counterclockwise vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polygon {
    pub vertices: Vec<Point>,
}

impl Polygon {
    pub fn contains(&self, p: Point) -> bool {
        geometry::polygon_contains(&self.vertices, p)
    }

    /// Every vertex of `self` lies in `region`.
    pub fn inside(&self, region: &GdofRegion) -> bool {
        self.vertices.iter().all(|v| region.contains(*v))
    }

    /// Inside `region` and missing at least one of its vertices.
    pub fn strictly_inside(&self, region: &GdofRegion) -> bool {
        self.inside(region) && region.vertices.iter().any(|v| !self.contains(*v))
    }
}

/// Hull of a lattice point set, counterclockwise from the origin.
fn convex_hull(mut points: Vec<Point>) -> Vec<Point> {
    points.sort();
    points.dedup();
    if points.len() < 3 {
        return points;
    }
    let cross = |o: Point, a: Point, b: Point| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut hull: Vec<Point> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> =
            if pass == 0 { Box::new(points.iter()) } else { Box::new(points.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= Rational::zero() {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.len() < 3 {
        return geometry::order_ccw(hull);
    }
    hull
}

/// Halfplanes describing a counterclockwise convex polygon.
pub fn polygon_half_planes(polygon: &[Point]) -> Vec<HalfPlane> {
    let n = polygon.len();
    (0..n)
        .map(|i| {
            let (a, b) = (polygon[i], polygon[(i + 1) % n]);
            // interior on the left of a -> b
            let c1 = b.1 - a.1;
            let c2 = a.0 - b.0;
            HalfPlane::new(c1, c2, c1 * a.0 + c2 * a.1)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::{symmetric_gdof, ExponentProfile};

    #[test]
    fn corollary_examples() {
        assert_eq!(corollary_d(3, 2, rat(1, 2)).unwrap(), rat(3, 2));
        assert_eq!(corollary_d(3, 2, rat(1, 4)).unwrap(), rat(7, 4));
        for k in 0..=12 {
            assert_eq!(corollary_d(2, 1, rat(k, 4)).unwrap(), int(1));
        }
        assert!(corollary_d(2, 2, rat(1, 2)).is_err());
        assert!(corollary_d(1, 3, rat(1, 2)).is_err());
    }

    #[test]
    fn corollary_branches_continuous() {
        for (m, n) in [(2, 1), (3, 2), (4, 3), (4, 1), (5, 3)] {
            let c = corollary_curve(m, n).unwrap();
            for w in c.pieces.windows(2) {
                let x = w[1].lo;
                assert_eq!(w[0].at(x), w[1].at(x), "({m},{n}) at {x}");
            }
        }
        assert_eq!(corollary_curve(3, 2).unwrap().breakpoints(), vec![rat(1, 2), rat(2, 3), int(1)]);
    }

    #[test]
    fn discontinuous_curve_rejected() {
        let bad = vec![
            piece(int(0), Some(int(1)), int(1), int(0)),
            piece(int(1), None, int(0), int(5)),
        ];
        assert!(SymmetricCurve::new(bad).is_err());
    }

    #[test]
    fn w_curve_values() {
        assert_eq!(siso_w_curve(rat(1, 2)), rat(1, 2));
        assert_eq!(siso_w_curve(rat(2, 3)), rat(2, 3));
        assert_eq!(siso_w_curve(int(0)), int(1));
        assert_eq!(siso_w_curve(int(1)), rat(1, 2));
        assert_eq!(siso_w_curve(int(3)), int(1));
    }

    #[test]
    fn v_curve_values() {
        assert_eq!(curve_1121(int(1)), rat(1, 2));
        assert_eq!(curve_1121(int(2)), int(1));
        assert_eq!(curve_1121(int(0)), int(1));
        assert_eq!(curve_1121(int(5)), int(1));
    }

    #[test]
    fn alpha_star_values() {
        for m in 1..=5 {
            assert_eq!(alpha_star(m, m).unwrap(), int(2));
        }
        assert_eq!(alpha_star(3, 2).unwrap(), rat(3, 2));
        assert_eq!(alpha_star(2, 1).unwrap(), int(1));
        assert!(alpha_star(1, 2).is_err());
    }

    #[test]
    fn regimes() {
        assert_eq!(classify_regime(1, 1, rat(1, 4)).unwrap(), RegimeLabel::VeryWeak);
        assert_eq!(classify_regime(3, 2, rat(7, 4)).unwrap(), RegimeLabel::VeryStrong);
        assert_eq!(classify_regime(1, 1, int(2)).unwrap(), RegimeLabel::VeryStrong);
        assert_eq!(classify_regime(1, 1, rat(1, 2)).unwrap(), RegimeLabel::Weak);
        assert_eq!(classify_regime(1, 1, rat(2, 3)).unwrap(), RegimeLabel::Moderate);
        assert_eq!(classify_regime(1, 1, int(1)).unwrap(), RegimeLabel::Strong);
        // alpha* = 1 leaves no strong interval
        assert_eq!(classify_regime(2, 1, int(1)).unwrap(), RegimeLabel::VeryStrong);
        // alpha* = 0: everything is very strong
        assert_eq!(classify_regime(3, 1, int(0)).unwrap(), RegimeLabel::VeryStrong);
        assert!(RegimeLabel::VeryWeak < RegimeLabel::VeryStrong);
    }

    #[test]
    fn dof_sum_examples() {
        let a = |m1, n1, m2, n2| AntennaProfile::new(m1, n1, m2, n2).unwrap();
        assert_eq!(dof_sum_bound(&a(2, 2, 1, 1)), 2);
        assert_eq!(dof_sum_bound(&a(1, 1, 1, 1)), 1);
        // max(M2, N1) = 2 binds
        assert_eq!(dof_sum_bound(&a(3, 2, 2, 3)), 2);
        assert_eq!(dof_sum_bound(&a(3, 2, 3, 2)), 3);
    }

    #[test]
    fn zf_examples() {
        let siso = AntennaProfile::new(1, 1, 1, 1).unwrap();
        let zf = zf_only_region(&siso, &ExponentProfile::symmetric(int(1)).unwrap());
        assert_eq!(zf.vertices, vec![(int(0), int(0)), (int(1), int(0)), (int(0), int(1))]);

        let a = AntennaProfile::new(3, 2, 1, 4).unwrap();
        let zf = zf_only_region(&a, &ExponentProfile::new(int(1), int(0), int(0), int(1)).unwrap());
        assert_eq!(zf.vertices, vec![(int(0), int(0)), (int(2), int(0)), (int(2), int(1)), (int(0), int(1))]);
    }

    #[test]
    fn zf_strictly_inside_at_two_thirds() {
        let a = AntennaProfile::symmetric(3, 2).unwrap();
        let exp = ExponentProfile::symmetric(rat(2, 3)).unwrap();
        let zf = zf_only_region(&a, &exp);
        let fundamental = crate::region::GdofRegion::new(&a, &exp);
        assert!(zf.inside(&fundamental));
        assert!(zf.strictly_inside(&fundamental));
        assert_eq!(symmetric_gdof(&a, &exp), rat(5, 3));
    }

    #[test]
    fn half_planes_round_trip() {
        let square = vec![(int(0), int(0)), (int(2), int(0)), (int(2), int(1)), (int(0), int(1))];
        let planes = polygon_half_planes(&square);
        let mut v = geometry::vertices(&planes);
        let pos = v.iter().position(|p| *p == (int(0), int(0))).unwrap();
        v.rotate_left(pos);
        assert_eq!(v, square);
    }
}
