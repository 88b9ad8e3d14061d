//! Exact rational arithmetic and the two MAC allocation functions `f` and `g`.
//!
//! `f` is the sum GDoF of a 2-user MIMO multiple-access channel and `g` the
//! 3-user analogue: a receiver with `u` dimensions serves transmitters in
//! decreasing order of SNR exponent, each taking as many of the remaining
//! dimensions as it has antennas.

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::Error;

/// Exact rational number used for every exponent and GDoF value.
pub type Rational = Ratio<i64>;

/// Shorthand constructor, `rat(2, 3)` is two thirds.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(numer, denom)
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(value)
}

/// `(x)^+`
pub fn pos_part(x: Rational) -> Rational {
    if x.is_negative() {
        Rational::zero()
    } else {
        x
    }
}

/// An `(exponent, dimension count)` pair, the arguments of `f` and `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeightedDim {
    pub a: Rational,
    pub u: u32,
}

impl WeightedDim {
    pub fn new(a: Rational, u: u32) -> Self {
        debug_assert!(!a.is_negative(), "exponent must be nonnegative");
        WeightedDim { a, u }
    }
}

/// Shorthand for `WeightedDim::new`.
pub fn wd(a: Rational, u: u32) -> WeightedDim {
    WeightedDim::new(a, u)
}

/// Greedy allocation of `u` receive dimensions over pairs already sorted by
/// exponent, highest first.
fn allocate(u: u32, sorted: &[WeightedDim]) -> Rational {
    let mut remaining = u;
    let mut total = Rational::zero();
    for p in sorted {
        let take = remaining.min(p.u);
        total += p.a * i64::from(take);
        remaining -= take;
    }
    total
}

/// Two-user MAC sum GDoF. Ties in the exponent take the first pair first.
pub fn f(u: u32, p1: WeightedDim, p2: WeightedDim) -> Rational {
    if p1.a >= p2.a {
        allocate(u, &[p1, p2])
    } else {
        allocate(u, &[p2, p1])
    }
}

/// Three-user MAC sum GDoF. The pairs are sorted by exponent descending with
/// argument position breaking ties.
pub fn g(u: u32, t1: WeightedDim, t2: WeightedDim, t3: WeightedDim) -> Rational {
    let mut sorted = [t1, t2, t3];
    // stable sort keeps argument order among equal exponents
    sorted.sort_by_key(|x| std::cmp::Reverse(x.a));
    allocate(u, &sorted)
}

/// Parses `"2/3"`, `"-4"`, `"0.125"` or `"1.5e-1"`-free decimal strings into an
/// exact rational. Decimal inputs are converted digit by digit, never via `f64`.
pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let numer: i64 = n.trim().parse().map_err(|_| bad())?;
        let denom: i64 = d.trim().parse().map_err(|_| bad())?;
        if denom == 0 {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(numer, denom));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = whole.trim_start_matches(['-', '+']);
        if frac.is_empty() && digits.is_empty() {
            return Err(bad());
        }
        if !digits.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        if frac.len() > 18 {
            return Err(Error::Parse(format!("too many decimal places in {text:?}")));
        }
        let scale = 10i64.pow(frac.len() as u32);
        let int_part: i64 = if digits.is_empty() { 0 } else { digits.parse().map_err(|_| bad())? };
        let frac_part: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let magnitude = int_part
            .checked_mul(scale)
            .and_then(|v| v.checked_add(frac_part))
            .ok_or_else(bad)?;
        let numer = if negative { -magnitude } else { magnitude };
        return Ok(Rational::new(numer, scale));
    }
    s.parse::<i64>().map(Rational::from_integer).map_err(|_| bad())
}

/// Lossy conversion for plotting and float comparisons.
pub fn to_f64(x: Rational) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}
