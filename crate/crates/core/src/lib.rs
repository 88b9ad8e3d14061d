//! Exact generalized degrees of freedom (GDoF) calculator for the two-user
//! MIMO Gaussian interference channel, with a finite-SNR Monte Carlo
//! cross-check.

pub mod cli;
pub mod closed_forms;
pub mod core_math;
pub mod error;
pub mod finite_snr;
pub mod geometry;
pub mod hk_scheme;
pub mod region;

pub use core_math::{f, g, pos_part, Rational, WeightedDim};
pub use error::{Error, Result};
pub use region::{AntennaProfile, BoundKind, ExponentProfile, GdofBound, GdofRegion};
