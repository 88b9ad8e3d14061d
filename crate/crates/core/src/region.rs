//! The seven-bound GDoF region of the two-user MIMO interference channel.
//!
//! Coordinates are per-user normalized: `d_i` is the rate of user `i` over
//! `log rho_ii`. Because the bounds are expressed in units of the nominal
//! SNR, user 2 enters the sum bounds weighted by `alpha22`.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::core_math::{f, g, int, pos_part, wd, Rational};
use crate::error::{Error, Result};
use crate::geometry::{self, HalfPlane, Point};

/// Antenna counts `(M1, N1, M2, N2)` at Tx1, Rx1, Tx2, Rx2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AntennaProfile {
    pub m1: u32,
    pub n1: u32,
    pub m2: u32,
    pub n2: u32,
}

impl AntennaProfile {
    pub fn new(m1: u32, n1: u32, m2: u32, n2: u32) -> Result<Self> {
        if [m1, n1, m2, n2].contains(&0) {
            return Err(Error::InvalidAntennas(format!(
                "({m1},{n1},{m2},{n2}): every node needs at least one antenna"
            )));
        }
        Ok(AntennaProfile { m1, n1, m2, n2 })
    }

    /// `(M, N, M, N)`
    pub fn symmetric(m: u32, n: u32) -> Result<Self> {
        Self::new(m, n, m, n)
    }

    pub fn as_array(&self) -> [u32; 4] {
        [self.m1, self.n1, self.m2, self.n2]
    }

    /// Single-user spatial dimensions `min(M_i, N_i)`.
    pub fn direct_dims(&self) -> (u32, u32) {
        (self.m1.min(self.n1), self.m2.min(self.n2))
    }
}

impl fmt::Display for AntennaProfile {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "({},{},{},{})", self.m1, self.n1, self.m2, self.n2)
    }
}

/// SNR/INR exponents `[alpha11, alpha12, alpha21, alpha22]`, with `alpha12`
/// the exponent of the cross link from Tx1 to Rx2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExponentProfile {
    pub a11: Rational,
    pub a12: Rational,
    pub a21: Rational,
    pub a22: Rational,
}

impl ExponentProfile {
    /// Rejects negative exponents and any `alpha11 != 1`.
    pub fn new(a11: Rational, a12: Rational, a21: Rational, a22: Rational) -> Result<Self> {
        for a in [a11, a12, a21, a22] {
            if a.is_negative() {
                return Err(Error::NegativeExponent(a.to_string()));
            }
        }
        if !a11.is_one() {
            return Err(Error::Unnormalized { alpha11: a11.to_string() });
        }
        Ok(ExponentProfile { a11, a12, a21, a22 })
    }

    /// `[1, alpha, alpha, 1]`
    pub fn symmetric(alpha: Rational) -> Result<Self> {
        Self::new(Rational::one(), alpha, alpha, Rational::one())
    }

    pub fn as_array(&self) -> [Rational; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }

    /// `beta_12 = (alpha11 - alpha12)^+`
    pub fn beta12(&self) -> Rational {
        pos_part(self.a11 - self.a12)
    }

    /// `beta_21 = (alpha22 - alpha21)^+`
    pub fn beta21(&self) -> Rational {
        pos_part(self.a22 - self.a21)
    }
}

impl fmt::Display for ExponentProfile {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "[{},{},{},{}]", self.a11, self.a12, self.a21, self.a22)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum BoundKind {
    D1,
    D2,
    D3,
    D4,
    D5,
    D6,
    D7,
}

impl BoundKind {
    pub const ALL: [BoundKind; 7] = [
        BoundKind::D1,
        BoundKind::D2,
        BoundKind::D3,
        BoundKind::D4,
        BoundKind::D5,
        BoundKind::D6,
        BoundKind::D7,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::D1 => "D1",
            BoundKind::D2 => "D2",
            BoundKind::D3 => "D3",
            BoundKind::D4 => "D4",
            BoundKind::D5 => "D5",
            BoundKind::D6 => "D6",
            BoundKind::D7 => "D7",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.write_str(self.name())
    }
}

/// `c1 * d1 + c2 * d2 <= rhs`
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GdofBound {
    pub kind: BoundKind,
    pub c1: Rational,
    pub c2: Rational,
    pub rhs: Rational,
}

impl GdofBound {
    pub fn half_plane(&self) -> HalfPlane {
        HalfPlane::new(self.c1, self.c2, self.rhs)
    }

    pub fn admits(&self, p: Point) -> bool {
        self.half_plane().contains(p)
    }
}

/// Cross-link quantities shared by several bounds.
struct Derived {
    m12: u32,
    m21: u32,
    /// `(M1 - N2)^+`, dimensions of Tx1 invisible at Rx2.
    null1: u32,
    /// `(M2 - N1)^+`
    null2: u32,
    beta12: Rational,
    beta21: Rational,
}

impl Derived {
    fn new(ant: &AntennaProfile, exp: &ExponentProfile) -> Self {
        Derived {
            m12: ant.m1.min(ant.n2),
            m21: ant.m2.min(ant.n1),
            null1: ant.m1.saturating_sub(ant.n2),
            null2: ant.m2.saturating_sub(ant.n1),
            beta12: exp.beta12(),
            beta21: exp.beta21(),
        }
    }
}

/// The seven bounds `D1..D7`. The exponent of user 1's null-space term in
/// `D5`/`D7` is `alpha11`, equal to one under the normalization.
///
/// `D7` mirrors `D6` with the users exchanged: its MAC term is Rx2's
/// `f(N2, (alpha12, M1), (alpha22, M2))`. Writing it as
/// `f(M2, (alpha21, N1), (alpha22, N2))` gives a region that differs from
/// that of the reciprocal channel.
pub fn theorem_bounds(ant: &AntennaProfile, exp: &ExponentProfile) -> Vec<GdofBound> {
    let AntennaProfile { m1, n1, m2, n2 } = *ant;
    let ExponentProfile { a11, a12, a21, a22 } = *exp;
    let dv = Derived::new(ant, exp);

    // Rx2 as a MAC for (public of Tx1, all of Tx2)
    let mac_rx2 = f(n2, wd(a12, m1), wd(a22, m2));
    // Rx1 as a MAC for (public of Tx2, all of Tx1)
    let mac_rx1 = f(n1, wd(a21, m2), wd(a11, m1));
    // private GDoF of user 1 below Rx2's noise floor or in the null space of H12
    let private1 = f(n1, wd(dv.beta12, dv.m12), wd(a11, dv.null1));
    let private2 = f(n2, wd(dv.beta21, dv.m21), wd(a22, dv.null2));
    // private of own user plus interfering public at each receiver
    let joint_rx1 = g(n1, wd(a21, m2), wd(dv.beta12, dv.m12), wd(a11, dv.null1));
    let joint_rx2 = g(n2, wd(a12, m1), wd(dv.beta21, dv.m21), wd(a22, dv.null2));

    let one = Rational::one();
    let (dir1, dir2) = ant.direct_dims();
    let bound = |kind, c1, c2, rhs| GdofBound { kind, c1, c2, rhs };
    vec![
        bound(BoundKind::D1, one, Rational::zero(), int(dir1.into())),
        bound(BoundKind::D2, Rational::zero(), one, int(dir2.into())),
        bound(BoundKind::D3, one, a22, mac_rx2 + private1),
        bound(BoundKind::D4, one, a22, mac_rx1 + private2),
        bound(BoundKind::D5, one, a22, joint_rx1 + joint_rx2),
        bound(BoundKind::D6, int(2), a22, mac_rx1 + private1 + joint_rx2),
        bound(BoundKind::D7, one, a22 * 2, mac_rx2 + private2 + joint_rx1),
    ]
}

fn axes() -> [HalfPlane; 2] {
    [
        HalfPlane::new(-Rational::one(), Rational::zero(), Rational::zero()),
        HalfPlane::new(Rational::zero(), -Rational::one(), Rational::zero()),
    ]
}

/// A GDoF region: the bounds together with the polygon's vertices,
/// counterclockwise from the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GdofRegion {
    pub bounds: Vec<GdofBound>,
    pub vertices: Vec<Point>,
}

impl GdofRegion {
    pub fn new(ant: &AntennaProfile, exp: &ExponentProfile) -> Self {
        build_region(theorem_bounds(ant, exp))
    }

    pub fn contains(&self, point: Point) -> bool {
        contains(self, point)
    }

    pub fn bound(&self, kind: BoundKind) -> Option<&GdofBound> {
        self.bounds.iter().find(|b| b.kind == kind)
    }

    /// Bounds tight at `point`.
    pub fn active_at(&self, point: Point) -> Vec<BoundKind> {
        self.bounds
            .iter()
            .filter(|b| b.half_plane().is_tight(point))
            .map(|b| b.kind)
            .collect()
    }

    pub fn vertex_set(&self) -> BTreeSet<Point> {
        self.vertices.iter().copied().collect()
    }
}

/// Intersects the bounds with the nonnegative quadrant.
pub fn build_region(bounds: Vec<GdofBound>) -> GdofRegion {
    let mut planes: Vec<HalfPlane> = axes().to_vec();
    planes.extend(bounds.iter().map(GdofBound::half_plane));
    let mut vertices = geometry::vertices(&planes);
    // the origin is always feasible, start the listing there
    if let Some(pos) = vertices.iter().position(|v| v.0.is_zero() && v.1.is_zero()) {
        vertices.rotate_left(pos);
    }
    GdofRegion { bounds, vertices }
}

pub fn contains(region: &GdofRegion, point: Point) -> bool {
    !point.0.is_negative() && !point.1.is_negative() && region.bounds.iter().all(|b| b.admits(point))
}

/// Largest `d` with `(d, d)` in the region, and the first bound attaining it.
pub fn symmetric_gdof_detail(ant: &AntennaProfile, exp: &ExponentProfile) -> (Rational, BoundKind) {
    theorem_bounds(ant, exp)
        .iter()
        .map(|b| (b.rhs / (b.c1 + b.c2), b.kind))
        .min_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)))
        .expect("seven bounds")
}

pub fn symmetric_gdof(ant: &AntennaProfile, exp: &ExponentProfile) -> Rational {
    symmetric_gdof_detail(ant, exp).0
}

/// The channel with transmitters and receivers swapped.
pub fn reciprocal(ant: &AntennaProfile, exp: &ExponentProfile) -> (AntennaProfile, ExponentProfile) {
    (
        AntennaProfile { m1: ant.n1, n1: ant.m1, m2: ant.n2, n2: ant.m2 },
        ExponentProfile { a11: exp.a11, a12: exp.a21, a21: exp.a12, a22: exp.a22 },
    )
}

pub fn regions_equal(r1: &GdofRegion, r2: &GdofRegion) -> bool {
    r1.vertex_set() == r2.vertex_set()
}

/// `c + k * alpha`
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Affine {
    pub constant: Rational,
    pub slope: Rational,
}

impl Affine {
    pub fn constant(c: Rational) -> Self {
        Affine { constant: c, slope: Rational::zero() }
    }

    pub fn alpha() -> Self {
        Affine { constant: Rational::zero(), slope: Rational::one() }
    }

    pub fn at(&self, alpha: Rational) -> Rational {
        self.constant + self.slope * alpha
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.constant.is_zero(), self.slope.is_zero()) {
            (_, true) => write!(out, "{}", self.constant),
            (true, false) if self.slope.is_one() => out.write_str("a"),
            (true, false) => write!(out, "{}*a", self.slope),
            (false, false) => {
                let sign = if self.slope.is_negative() { "-" } else { "+" };
                let k = self.slope.abs();
                if k.is_one() {
                    write!(out, "{}{sign}a", self.constant)
                } else {
                    write!(out, "{}{sign}{k}*a", self.constant)
                }
            }
        }
    }
}

/// Exponent profile whose entries are affine in a single free parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlphaTemplate {
    pub entries: [Affine; 4],
}

impl Default for AlphaTemplate {
    /// `[1, a, a, 1]`
    fn default() -> Self {
        let one = Affine::constant(Rational::one());
        AlphaTemplate { entries: [one, Affine::alpha(), Affine::alpha(), one] }
    }
}

impl AlphaTemplate {
    pub fn at(&self, alpha: Rational) -> Result<ExponentProfile> {
        let [a11, a12, a21, a22] = self.entries.map(|e| e.at(alpha));
        ExponentProfile::new(a11, a12, a21, a22)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepPoint {
    pub alpha: Rational,
    pub d_sym: Rational,
    pub active: BoundKind,
    pub is_breakpoint: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Sweep {
    pub points: Vec<SweepPoint>,
}

impl Sweep {
    pub fn breakpoints(&self) -> Vec<Rational> {
        self.points.iter().filter(|p| p.is_breakpoint).map(|p| p.alpha).collect()
    }

    pub fn values(&self) -> Vec<Rational> {
        self.points.iter().map(|p| p.d_sym).collect()
    }
}

/// Evaluates the symmetric GDoF along the grid (sorted and deduplicated)
/// and flags interior grid points where the left and right slopes differ.
pub fn sweep_alpha(ant: &AntennaProfile, template: &AlphaTemplate, grid: &[Rational]) -> Result<Sweep> {
    let mut alphas = grid.to_vec();
    alphas.sort();
    alphas.dedup();
    let mut points = alphas
        .iter()
        .map(|&alpha| {
            let (d_sym, active) = symmetric_gdof_detail(ant, &template.at(alpha)?);
            Ok(SweepPoint { alpha, d_sym, active, is_breakpoint: false })
        })
        .collect::<Result<Vec<_>>>()?;
    for i in 1..points.len().saturating_sub(1) {
        let (l, m, r) = (&points[i - 1], &points[i], &points[i + 1]);
        let left = (m.d_sym - l.d_sym) / (m.alpha - l.alpha);
        let right = (r.d_sym - m.d_sym) / (r.alpha - m.alpha);
        points[i].is_breakpoint = left != right;
    }
    Ok(Sweep { points })
}

/// `lo, lo + step, ..., <= hi`
pub fn grid(lo: Rational, hi: Rational, step: Rational) -> Result<Vec<Rational>> {
    if !step.is_positive() {
        return Err(Error::Domain(format!("grid step must be positive, got {step}")));
    }
    let mut out = Vec::new();
    let mut x = lo;
    while x <= hi {
        out.push(x);
        x += step;
    }
    Ok(out)
}
