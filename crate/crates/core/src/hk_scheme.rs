//! The Han-Kobayashi power split and the private/public GDoF split.
//!
//! Each transmitter sends a private codeword with covariance
//! `K_u = (I + rho_ij H_ij^H H_ij)^{-1} / M_i`, which arrives at the other
//! receiver at or below the noise floor, and a public codeword filling the
//! rest of the `I / M_i` budget.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use num_traits::{One, Signed, Zero};

use crate::core_math::{f, g, pos_part, wd, Rational};
use crate::error::{Error, Result};
use crate::finite_snr::sample_channel;
use crate::geometry::{self, HalfPlane, Point};
use crate::region::{contains, theorem_bounds, AntennaProfile, ExponentProfile, GdofRegion};

pub type CMatrix = DMatrix<Complex<f64>>;

/// Condition number above which a channel is treated as rank deficient.
pub const MAX_CONDITION: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum User {
    One,
    Two,
}

impl User {
    pub fn other(self) -> User {
        match self {
            User::One => User::Two,
            User::Two => User::One,
        }
    }
}

/// Channel matrices and exponents. `h[i][j]` is the `N_j x M_i` link from
/// Tx `i+1` to Rx `j+1`.
#[derive(Debug, Clone)]
pub struct ChannelInstance {
    pub ant: AntennaProfile,
    pub h: [[CMatrix; 2]; 2],
    pub rho_ref: f64,
    pub exp: ExponentProfile,
}

impl ChannelInstance {
    /// Builds an instance from `H11, H12, H21, H22`.
    pub fn new(
        ant: AntennaProfile,
        links: [CMatrix; 4],
        rho_ref: f64,
        exp: ExponentProfile,
    ) -> Result<Self> {
        if !(rho_ref.is_finite() && rho_ref > 0.0) {
            return Err(Error::Domain(format!("nominal SNR must be positive, got {rho_ref}")));
        }
        let [h11, h12, h21, h22] = links;
        let inst = ChannelInstance { ant, h: [[h11, h12], [h21, h22]], rho_ref, exp };
        for tx in [User::One, User::Two] {
            for rx in [User::One, User::Two] {
                let m = inst.tx_antennas(tx) as usize;
                let n = inst.rx_antennas(rx) as usize;
                let link = inst.link(tx, rx);
                if link.shape() != (n, m) {
                    return Err(Error::Dimension(format!(
                        "H{}{} is {}x{}, expected {n}x{m}",
                        index(tx),
                        index(rx),
                        link.nrows(),
                        link.ncols()
                    )));
                }
            }
        }
        Ok(inst)
    }

    /// Draws all four links i.i.d. `CN(0, 1)` from `seed`.
    pub fn sample(ant: AntennaProfile, exp: ExponentProfile, rho_ref: f64, seed: u64) -> Result<Self> {
        let AntennaProfile { m1, n1, m2, n2 } = ant;
        let dims = [(n1, m1), (n2, m1), (n1, m2), (n2, m2)];
        let links = std::array::from_fn(|k| {
            let (rows, cols) = dims[k];
            sample_channel(rows as usize, cols as usize, seed.wrapping_mul(4).wrapping_add(k as u64))
        });
        Self::new(ant, links, rho_ref, exp)
    }

    pub fn tx_antennas(&self, user: User) -> u32 {
        match user {
            User::One => self.ant.m1,
            User::Two => self.ant.m2,
        }
    }

    pub fn rx_antennas(&self, user: User) -> u32 {
        match user {
            User::One => self.ant.n1,
            User::Two => self.ant.n2,
        }
    }

    pub fn link(&self, tx: User, rx: User) -> &CMatrix {
        &self.h[index(tx) - 1][index(rx) - 1]
    }

    pub fn exponent(&self, tx: User, rx: User) -> Rational {
        match (tx, rx) {
            (User::One, User::One) => self.exp.a11,
            (User::One, User::Two) => self.exp.a12,
            (User::Two, User::One) => self.exp.a21,
            (User::Two, User::Two) => self.exp.a22,
        }
    }

    /// `rho^{alpha_ij}`
    pub fn snr(&self, tx: User, rx: User) -> f64 {
        self.rho_ref.powf(crate::core_math::to_f64(self.exponent(tx, rx)))
    }
}

fn index(user: User) -> usize {
    match user {
        User::One => 1,
        User::Two => 2,
    }
}

/// Private and public input covariances of one transmitter.
#[derive(Debug, Clone)]
pub struct CovariancePair {
    pub k_u: CMatrix,
    pub k_w: CMatrix,
}

/// `K_u = (I + rho_ij H^H H)^{-1} / M`, `K_w = I / M - K_u`.
pub fn covariances(inst: &ChannelInstance, user: User) -> CovariancePair {
    let m = inst.tx_antennas(user) as usize;
    let cross = inst.link(user, user.other());
    let rho = inst.snr(user, user.other());
    let scale = Complex::new(1.0 / m as f64, 0.0);
    let gram = cross.adjoint() * cross;
    let a = CMatrix::identity(m, m) + gram * Complex::new(rho, 0.0);
    // identity plus a PSD matrix is positive definite
    let inv = a.cholesky().expect("I + rho H^H H is positive definite").inverse();
    let k_u = inv * scale;
    let k_w = CMatrix::identity(m, m) * scale - &k_u;
    CovariancePair { k_u, k_w }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamClass {
    Public,
    /// Along a cross-link signal direction, received at the noise floor.
    PrivateBelowNoise,
    /// In the null space of the cross link.
    PrivateNullspace,
}

#[derive(Debug, Clone)]
pub struct Stream {
    pub direction: DVector<Complex<f64>>,
    /// Amplitude multiplying the unit-power symbol.
    pub amplitude: f64,
    pub class: StreamClass,
}

/// Right singular vectors of the cross link `H_ij` (as eigenvectors of
/// `H_ij^H H_ij`), strongest first, with the matching eigenvalues.
fn cross_link_basis(inst: &ChannelInstance, user: User) -> (Vec<f64>, CMatrix) {
    let cross = inst.link(user, user.other());
    let eig = SymmetricEigen::new(cross.adjoint() * cross);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k].max(0.0)).collect();
    let vectors = CMatrix::from_columns(&order.iter().map(|&k| eig.eigenvectors.column(k)).collect::<Vec<_>>());
    (values, vectors)
}

/// Splits `X_i` into `m_ij` public streams, `m_ij` private streams at the
/// noise floor of the other receiver and `M_i - m_ij` private streams in
/// the cross link's null space.
pub fn stream_decomposition(inst: &ChannelInstance, user: User) -> Result<Vec<Stream>> {
    let m = inst.tx_antennas(user) as usize;
    let n_other = inst.rx_antennas(user.other()) as usize;
    let rank = m.min(n_other);
    let rho = inst.snr(user, user.other());
    let (lambda, basis) = cross_link_basis(inst, user);

    let condition = (lambda[0] / lambda[rank - 1]).sqrt();
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(Error::RankDeficient {
            link: format!("H{}{}", index(user), index(user.other())),
            condition,
        });
    }

    let per_dim = 1.0 / m as f64;
    let mut streams = Vec::with_capacity(m + rank);
    for k in 0..rank {
        let gain = m as f64 * (1.0 + rho * lambda[k]);
        streams.push(Stream {
            direction: basis.column(k).into_owned(),
            amplitude: (per_dim - 1.0 / gain).max(0.0).sqrt(),
            class: StreamClass::Public,
        });
    }
    for k in 0..rank {
        let gain = m as f64 * (1.0 + rho * lambda[k]);
        streams.push(Stream {
            direction: basis.column(k).into_owned(),
            amplitude: (1.0 / gain).sqrt(),
            class: StreamClass::PrivateBelowNoise,
        });
    }
    for k in rank..m {
        streams.push(Stream {
            direction: basis.column(k).into_owned(),
            amplitude: per_dim.sqrt(),
            class: StreamClass::PrivateNullspace,
        });
    }
    Ok(streams)
}

/// `sum amplitude^2 v v^H` over the selected streams.
pub fn stream_covariance<'a>(streams: impl IntoIterator<Item = &'a Stream>, dim: usize) -> CMatrix {
    let mut acc = CMatrix::zeros(dim, dim);
    for s in streams {
        acc += &s.direction * s.direction.adjoint() * Complex::new(s.amplitude * s.amplitude, 0.0);
    }
    acc
}

/// Per-user private and public GDoF `(d1c, d1p, d2c, d2p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DofSplit {
    pub d1c: Rational,
    pub d1p: Rational,
    pub d2c: Rational,
    pub d2p: Rational,
}

impl DofSplit {
    pub fn totals(&self) -> Point {
        (self.d1c + self.d1p, self.d2c + self.d2p)
    }

    pub fn as_array(&self) -> [Rational; 4] {
        [self.d1c, self.d1p, self.d2c, self.d2p]
    }
}

/// Right-hand sides of the split constraints, all in base-`rho` units.
#[derive(Debug, Clone, Copy)]
struct SplitCaps {
    /// C1: private of user i
    private: [Rational; 2],
    /// C2: public of user i plus all of user j at Rx j
    mac_other: [Rational; 2],
    /// C3: all of user i plus public of user j at Rx i
    mac_own: [Rational; 2],
    /// C4: private of user i plus public of user j at Rx i
    joint: [Rational; 2],
}

impl SplitCaps {
    fn new(ant: &AntennaProfile, exp: &ExponentProfile) -> Self {
        let AntennaProfile { m1, n1, m2, n2 } = *ant;
        let ExponentProfile { a11, a12, a21, a22 } = *exp;
        let (m12, m21) = (m1.min(n2), m2.min(n1));
        let (null1, null2) = (m1.saturating_sub(n2), m2.saturating_sub(n1));
        let (b12, b21) = (pos_part(a11 - a12), pos_part(a22 - a21));
        SplitCaps {
            private: [f(n1, wd(b12, m12), wd(a11, null1)), f(n2, wd(b21, m21), wd(a22, null2))],
            mac_other: [f(n2, wd(a12, m1), wd(a22, m2)), f(n1, wd(a21, m2), wd(a11, m1))],
            mac_own: [f(n1, wd(a21, m2), wd(a11, m1)), f(n2, wd(a12, m1), wd(a22, m2))],
            joint: [
                g(n1, wd(a21, m2), wd(b12, m12), wd(a11, null1)),
                g(n2, wd(a12, m1), wd(b21, m21), wd(a22, null2)),
            ],
        }
    }
}

/// Names of the C1-C4 constraints violated by `split`, checked directly on
/// the four components.
pub fn violated_constraints(ant: &AntennaProfile, exp: &ExponentProfile, split: &DofSplit) -> Vec<String> {
    let caps = SplitCaps::new(ant, exp);
    let w = [exp.a11, exp.a22];
    let total = [split.d1c + split.d1p, split.d2c + split.d2p];
    let public = [split.d1c, split.d2c];
    let private = [split.d1p, split.d2p];
    let mut out = Vec::new();
    if split.as_array().iter().any(|x| x.is_negative()) {
        out.push("nonnegativity".to_string());
    }
    for i in 0..2 {
        let j = 1 - i;
        let checks = [
            ("C1", w[i] * private[i], caps.private[i]),
            ("C2", w[i] * public[i] + w[j] * total[j], caps.mac_other[i]),
            ("C3", w[i] * total[i] + w[j] * public[j], caps.mac_own[i]),
            ("C4", w[i] * private[i] + w[j] * public[j], caps.joint[i]),
        ];
        for (name, lhs, rhs) in checks {
            if lhs > rhs {
                out.push(format!("{name}_{}", i + 1));
            }
        }
    }
    out
}

/// The split constraints as halfplanes in `(d1p, d2p)` for a fixed target,
/// using `d_ic = d_i - d_ip`.
fn split_half_planes(caps: &SplitCaps, exp: &ExponentProfile, point: Point) -> Vec<(String, HalfPlane)> {
    let w = [exp.a11, exp.a22];
    let d = [point.0, point.1];
    let zero = Rational::zero();
    let one = Rational::one();
    // coefficient vector selecting user i's private variable
    let unit = |i: usize, scale: Rational| if i == 0 { (scale, zero) } else { (zero, scale) };
    let mut planes = vec![
        ("d1p >= 0".to_string(), HalfPlane::new(-one, zero, zero)),
        ("d2p >= 0".to_string(), HalfPlane::new(zero, -one, zero)),
        ("d1c >= 0".to_string(), HalfPlane::new(one, zero, d[0])),
        ("d2c >= 0".to_string(), HalfPlane::new(zero, one, d[1])),
    ];
    for i in 0..2 {
        let j = 1 - i;
        let tag = |c: &str| format!("{c}_{}", i + 1);
        // C1: w_i x_i <= private_i
        let (a, b) = unit(i, w[i]);
        planes.push((tag("C1"), HalfPlane::new(a, b, caps.private[i])));
        // C2: w_i (d_i - x_i) + w_j d_j <= mac_other_i
        let (a, b) = unit(i, -w[i]);
        planes.push((tag("C2"), HalfPlane::new(a, b, caps.mac_other[i] - w[i] * d[i] - w[j] * d[j])));
        // C3: w_i d_i + w_j (d_j - x_j) <= mac_own_i
        let (a, b) = unit(j, -w[j]);
        planes.push((tag("C3"), HalfPlane::new(a, b, caps.mac_own[i] - w[i] * d[i] - w[j] * d[j])));
        // C4: w_i x_i + w_j (d_j - x_j) <= joint_i
        let (a1, b1) = unit(i, w[i]);
        let (a2, b2) = unit(j, -w[j]);
        planes.push((tag("C4"), HalfPlane::new(a1 + a2, b1 + b2, caps.joint[i] - w[j] * d[j])));
    }
    planes
}

/// Finds a private/public split of a region point. Among feasible splits the
/// one with the largest total private GDoF is returned, ties broken towards
/// more private GDoF for user 1.
pub fn split_solver(ant: &AntennaProfile, exp: &ExponentProfile, point: Point) -> Result<DofSplit> {
    let region = GdofRegion { bounds: theorem_bounds(ant, exp), vertices: Vec::new() };
    if !contains(&region, point) {
        return Err(Error::OutsideRegion { d1: point.0.to_string(), d2: point.1.to_string() });
    }
    let caps = SplitCaps::new(ant, exp);
    let labelled = split_half_planes(&caps, exp, point);
    let planes: Vec<HalfPlane> = labelled.iter().map(|(_, h)| *h).collect();
    let feasible = geometry::vertices(&planes);
    let best = feasible
        .into_iter()
        .max_by(|p, q| (p.0 + p.1).cmp(&(q.0 + q.1)).then(p.0.cmp(&q.0)));
    match best {
        Some((x, y)) => Ok(DofSplit { d1c: point.0 - x, d1p: x, d2c: point.1 - y, d2p: y }),
        None => {
            // report what fails at the least-violating corner of the box
            let corners = [
                (Rational::zero(), Rational::zero()),
                (point.0, Rational::zero()),
                (Rational::zero(), point.1),
                point,
            ];
            let violated = corners
                .iter()
                .map(|&c| labelled.iter().filter(|(_, h)| !h.contains(c)).map(|(n, _)| n.clone()).collect::<Vec<_>>())
                .min_by_key(Vec::len)
                .unwrap_or_default();
            Err(Error::InfeasibleSplit { violated })
        }
    }
}
