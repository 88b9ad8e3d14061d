//! Finite-SNR Monte Carlo: Gaussian log-det rates on sampled channels and
//! secant estimates of their high-SNR slopes.

use nalgebra::{Complex, DMatrix, SymmetricEigen};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::core_math::{to_f64, Rational};
use crate::error::{Error, Result};
use crate::hk_scheme::{ChannelInstance, User};

type CMatrix = DMatrix<Complex<f64>>;

const PSD_TOLERANCE: f64 = 1e-12;

/// `rows x cols` matrix of i.i.d. `CN(0, 1)` entries, reproducible from `seed`.
pub fn sample_channel(rows: usize, cols: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex::new(re * scale, im * scale)
    })
}

/// `log2 det(A)` for Hermitian positive definite `A`.
fn log2_det_pd(a: CMatrix) -> f64 {
    let chol = a.cholesky().expect("identity plus PSD is positive definite");
    let l = chol.l_dirty();
    2.0 * (0..l.nrows()).map(|i| l[(i, i)].re.ln()).sum::<f64>() / std::f64::consts::LN_2
}

fn check_psd(q: &CMatrix) -> Result<()> {
    if !q.is_square() {
        return Err(Error::Dimension(format!("covariance is {}x{}", q.nrows(), q.ncols())));
    }
    let asym = (q - q.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let scale = q.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if asym > PSD_TOLERANCE * scale {
        return Err(Error::NotPsd(f64::NAN));
    }
    let min = SymmetricEigen::new(q.clone()).eigenvalues.min();
    if min < -PSD_TOLERANCE * scale {
        return Err(Error::NotPsd(min));
    }
    Ok(())
}

/// `log2 det(I + snr H Q H^H)`
pub fn p2p_rate(h: &CMatrix, q: &CMatrix, snr: f64) -> Result<f64> {
    check_psd(q)?;
    if h.ncols() != q.nrows() {
        return Err(Error::Dimension(format!("H is {}x{} but Q is {}x{}", h.nrows(), h.ncols(), q.nrows(), q.ncols())));
    }
    if snr.is_nan() || snr < 0.0 {
        return Err(Error::Domain(format!("snr must be nonnegative, got {snr}")));
    }
    let n = h.nrows();
    let a = CMatrix::identity(n, n) + h * q * h.adjoint() * Complex::new(snr, 0.0);
    Ok(log2_det_pd(a))
}

/// One transmitter of a multiple-access channel with white input `I / M`.
#[derive(Debug, Clone)]
pub struct MacUser {
    pub h: CMatrix,
    pub exponent: Rational,
}

impl MacUser {
    pub fn antennas(&self) -> usize {
        self.h.ncols()
    }
}

/// `log2 det(I + sum_k rho^{a_k} H_k H_k^H / M_k)`
pub fn mac_sum_rate(receiver_dims: usize, users: &[MacUser], rho: f64) -> Result<f64> {
    if !(2..=3).contains(&users.len()) {
        return Err(Error::Dimension(format!("MAC needs 2 or 3 users, got {}", users.len())));
    }
    let mut a = CMatrix::identity(receiver_dims, receiver_dims);
    for (k, u) in users.iter().enumerate() {
        if u.h.nrows() != receiver_dims || u.h.ncols() == 0 {
            return Err(Error::Dimension(format!(
                "user {k} channel is {}x{}, receiver has {receiver_dims} antennas",
                u.h.nrows(),
                u.h.ncols()
            )));
        }
        let power = rho.powf(to_f64(u.exponent)) / u.antennas() as f64;
        a += &u.h * u.h.adjoint() * Complex::new(power, 0.0);
    }
    Ok(log2_det_pd(a))
}

/// Rates of both users when each receiver treats the other user's signal as
/// noise, with white inputs `I / M_k`, at nominal SNR `rho`.
pub fn tin_rates(inst: &ChannelInstance, rho: f64) -> (f64, f64) {
    let rate = |own: User| {
        let other = own.other();
        let n = inst.rx_antennas(own) as usize;
        let exp = |tx, rx| to_f64(inst.exponent(tx, rx));
        let received = |tx: User| {
            let h = inst.link(tx, own);
            let p = rho.powf(exp(tx, own)) / inst.tx_antennas(tx) as f64;
            h * h.adjoint() * Complex::new(p, 0.0)
        };
        let interference = CMatrix::identity(n, n) + received(other);
        let total = &interference + received(own);
        log2_det_pd(total) - log2_det_pd(interference)
    };
    (rate(User::One), rate(User::Two))
}

/// Ascending nominal SNRs; slopes use the two extremes.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrLadder {
    rho_values: Vec<f64>,
}

impl SnrLadder {
    pub fn new(rho_values: Vec<f64>) -> Result<Self> {
        if rho_values.len() < 2 {
            return Err(Error::Domain("SNR ladder needs at least two values".into()));
        }
        if rho_values.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::Domain("SNR values must be positive and finite".into()));
        }
        if rho_values.windows(2).any(|w| w[1].log10() - w[0].log10() < 2.0) {
            return Err(Error::Domain("SNR ladder must ascend by at least 20 dB per step".into()));
        }
        Ok(SnrLadder { rho_values })
    }

    pub fn values(&self) -> &[f64] {
        &self.rho_values
    }

    pub fn lo(&self) -> f64 {
        self.rho_values[0]
    }

    pub fn hi(&self) -> f64 {
        *self.rho_values.last().expect("nonempty")
    }
}

impl Default for SnrLadder {
    /// `{1e8, 1e12}`
    fn default() -> Self {
        SnrLadder { rho_values: vec![1e8, 1e12] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeEstimate {
    pub value: f64,
    /// Sample standard deviation of the per-draw slopes.
    pub per_draw_spread: f64,
    pub draws: usize,
    pub seed: u64,
}

/// Seed of draw `k` under the experiment seed.
pub fn draw_seed(seed: u64, k: usize) -> u64 {
    // splitmix64 finalizer
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(k as u64 + 1));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => pairwise_sum(&xs[..n / 2]) + pairwise_sum(&xs[n / 2..]),
    }
}

/// Averages the secant slope `(R(rho_hi) - R(rho_lo)) / log2(rho_hi / rho_lo)`
/// over `draws` independent draws. `rate_fn(draw_seed, rho)` must use the
/// same channel for a given draw seed.
pub fn estimate_slope<F>(rate_fn: F, ladder: &SnrLadder, draws: usize, seed: u64) -> SlopeEstimate
where
    F: Fn(u64, f64) -> f64,
{
    let draws = draws.max(1);
    let window = ladder.hi().log2() - ladder.lo().log2();
    let slopes: Vec<f64> = (0..draws)
        .map(|k| {
            let s = draw_seed(seed, k);
            (rate_fn(s, ladder.hi()) - rate_fn(s, ladder.lo())) / window
        })
        .collect();
    let mean = pairwise_sum(&slopes) / draws as f64;
    let spread = if draws > 1 {
        let dev: Vec<f64> = slopes.iter().map(|s| (s - mean).powi(2)).collect();
        (pairwise_sum(&dev) / (draws - 1) as f64).sqrt()
    } else {
        0.0
    };
    SlopeEstimate { value: mean, per_draw_spread: spread, draws, seed }
}

/// MAC users with channels drawn from `seed`, one per `(exponent, antennas)`.
pub fn sample_mac(receiver_dims: usize, users: &[(Rational, usize)], seed: u64) -> Vec<MacUser> {
    users
        .iter()
        .enumerate()
        .map(|(k, &(exponent, m))| MacUser {
            h: sample_channel(receiver_dims, m, draw_seed(seed, 1000 + k)),
            exponent,
        })
        .collect()
}

/// Per-user TIN GDoF estimate for a sampled channel family.
pub fn tin_slopes(
    ant: crate::region::AntennaProfile,
    exp: crate::region::ExponentProfile,
    ladder: &SnrLadder,
    draws: usize,
    seed: u64,
) -> Result<(SlopeEstimate, SlopeEstimate)> {
    // validate once; the closures below cannot report errors
    ChannelInstance::sample(ant, exp, ladder.lo(), seed)?;
    let rate = |user: User| {
        move |s: u64, rho: f64| {
            let inst = ChannelInstance::sample(ant, exp, rho, s).expect("validated above");
            let (r1, r2) = tin_rates(&inst, rho);
            let own = if user == User::One { r1 } else { r2 };
            // per-user normalization by the user's own SNR exponent
            let w = to_f64(inst.exponent(user, user));
            if w > 0.0 { own / w } else { own }
        }
    };
    Ok((
        estimate_slope(rate(User::One), ladder, draws, seed),
        estimate_slope(rate(User::Two), ladder, draws, seed),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_math::{f, g, int, rat, wd};
    use crate::region::{AntennaProfile, ExponentProfile};

    #[test]
    fn sampling_is_deterministic() {
        assert_eq!(sample_channel(2, 2, 7), sample_channel(2, 2, 7));
        assert_ne!(sample_channel(2, 2, 7), sample_channel(2, 2, 8));
    }

    #[test]
    fn sampled_tall_matrix_full_rank() {
        for seed in 0..20 {
            let h = sample_channel(3, 2, seed);
            let s = h.singular_values();
            assert!(s.min() > 1e-6, "seed {seed}");
        }
    }

    #[test]
    fn unit_average_power() {
        let n = 10_000;
        let mean: f64 = (0..n).map(|s| sample_channel(1, 1, s)[(0, 0)].norm_sqr()).sum::<f64>() / n as f64;
        assert!((mean - 1.0).abs() < 0.05, "mean {mean}");
    }

    #[test]
    fn p2p_basics() {
        let one = CMatrix::identity(1, 1);
        assert_eq!(p2p_rate(&one, &one, 0.0).unwrap(), 0.0);
        assert!((p2p_rate(&one, &one, 3.0).unwrap() - 2.0).abs() < 1e-12);
        let mut bad = CMatrix::identity(2, 2);
        bad[(1, 1)] = Complex::new(-1.0, 0.0);
        assert!(matches!(p2p_rate(&CMatrix::identity(2, 2), &bad, 1.0), Err(Error::NotPsd(_))));
        assert!(p2p_rate(&CMatrix::identity(2, 3), &CMatrix::identity(2, 2), 1.0).is_err());
    }

    #[test]
    fn p2p_slope_is_min_dimension() {
        let ladder = SnrLadder::default();
        for (rows, cols) in [(2, 2), (3, 2), (1, 3)] {
            let q = CMatrix::identity(cols, cols) * Complex::new(1.0 / cols as f64, 0.0);
            let est = estimate_slope(|s, rho| p2p_rate(&sample_channel(rows, cols, s), &q, rho).unwrap(), &ladder, 5, 1);
            assert!((est.value - rows.min(cols) as f64).abs() < 0.02, "{rows}x{cols}: {}", est.value);
        }
    }

    #[test]
    fn mac_slopes_match_oracles() {
        let ladder = SnrLadder::default();
        let two = [(int(1), 1usize), (rat(1, 2), 2usize)];
        let est = estimate_slope(|s, rho| mac_sum_rate(2, &sample_mac(2, &two, s), rho).unwrap(), &ladder, 5, 2);
        let oracle = f(2, wd(int(1), 1), wd(rat(1, 2), 2));
        assert!((est.value - to_f64(oracle)).abs() < 0.05, "{} vs {oracle}", est.value);

        let three = [(int(1), 1usize), (rat(2, 3), 2usize), (rat(1, 3), 2usize)];
        let est = estimate_slope(|s, rho| mac_sum_rate(3, &sample_mac(3, &three, s), rho).unwrap(), &ladder, 5, 3);
        let oracle = g(3, wd(int(1), 1), wd(rat(2, 3), 2), wd(rat(1, 3), 2));
        assert_eq!(oracle, rat(7, 3));
        assert!((est.value - 7.0 / 3.0).abs() < 0.05, "{}", est.value);

        let flat = [(int(0), 1usize), (int(0), 2usize)];
        let est = estimate_slope(|s, rho| mac_sum_rate(2, &sample_mac(2, &flat, s), rho).unwrap(), &ladder, 5, 4);
        assert!(est.value.abs() < 1e-9);
    }

    #[test]
    fn mac_rejects_bad_shapes() {
        let users = sample_mac(2, &[(int(1), 1)], 0);
        assert!(mac_sum_rate(2, &users, 10.0).is_err());
        let users = sample_mac(2, &[(int(1), 1), (int(1), 1)], 0);
        assert!(mac_sum_rate(3, &users, 10.0).is_err());
    }

    #[test]
    fn tin_without_interference_tracks_p2p() {
        let ant = AntennaProfile::new(2, 2, 2, 2).unwrap();
        let exp = ExponentProfile::new(int(1), int(0), int(0), int(1)).unwrap();
        for rho in [1e4, 1e8] {
            let inst = ChannelInstance::sample(ant, exp, rho, 5).unwrap();
            let (r1, _) = tin_rates(&inst, rho);
            let q = CMatrix::identity(2, 2) * Complex::new(0.5, 0.0);
            let p2p = p2p_rate(inst.link(User::One, User::One), &q, rho).unwrap();
            assert!(r1 <= p2p + 1e-9 && p2p - r1 < 1.0 + 2.0, "{r1} vs {p2p}");
        }
    }

    #[test]
    fn siso_tin_very_weak_slope() {
        let ant = AntennaProfile::new(1, 1, 1, 1).unwrap();
        let exp = ExponentProfile::symmetric(rat(1, 4)).unwrap();
        let (s1, s2) = tin_slopes(ant, exp, &SnrLadder::default(), 5, 9).unwrap();
        assert!((s1.value - 0.75).abs() < 0.05, "{}", s1.value);
        assert!((s2.value - 0.75).abs() < 0.05, "{}", s2.value);
    }

    #[test]
    fn slope_of_trivial_functions() {
        let ladder = SnrLadder::default();
        assert_eq!(estimate_slope(|_, _| 4.2, &ladder, 3, 0).value, 0.0);
        let est = estimate_slope(|_, rho| 1.5 * rho.log2(), &ladder, 3, 0);
        assert!((est.value - 1.5).abs() < 1e-12);
        assert_eq!(est.per_draw_spread, 0.0);
    }

    #[test]
    fn estimates_reproducible() {
        let ladder = SnrLadder::default();
        let users = [(int(1), 2usize), (rat(1, 3), 1usize)];
        let run = || estimate_slope(|s, rho| mac_sum_rate(2, &sample_mac(2, &users, s), rho).unwrap(), &ladder, 5, 77);
        assert_eq!(run().value.to_bits(), run().value.to_bits());
    }

    #[test]
    fn ladder_validation() {
        assert!(SnrLadder::new(vec![1e8]).is_err());
        assert!(SnrLadder::new(vec![1e8, 1e9]).is_err());
        assert!(SnrLadder::new(vec![1e12, 1e8]).is_err());
        assert!(SnrLadder::new(vec![0.0, 1e8]).is_err());
        assert!(SnrLadder::new(vec![1e4, 1e8, 1e12]).is_ok());
    }

    #[test]
    fn rates_monotone_in_snr() {
        let ant = AntennaProfile::new(3, 2, 2, 3).unwrap();
        let exp = ExponentProfile::new(int(1), rat(1, 2), rat(2, 3), rat(3, 4)).unwrap();
        for seed in 0..5 {
            let users = sample_mac(3, &[(int(1), 2), (rat(1, 2), 1), (rat(1, 4), 3)], seed);
            let mut prev = (f64::NEG_INFINITY, f64::NEG_INFINITY);
            for e in 0..=12 {
                let rho = 10f64.powi(e);
                let inst = ChannelInstance::sample(ant, exp, rho, seed).unwrap();
                let mac = mac_sum_rate(3, &users, rho).unwrap();
                let q = CMatrix::identity(3, 3) * Complex::new(1.0 / 3.0, 0.0);
                let p2p = p2p_rate(inst.link(User::One, User::One), &q, rho).unwrap();
                assert!(mac >= prev.0 - 1e-9 && p2p >= prev.1 - 1e-9);
                prev = (mac, p2p);
            }
        }
    }
}
