use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid antenna profile: {0}")]
    InvalidAntennas(String),

    #[error("exponent profile must have alpha11 = 1, got {alpha11}; rescale every exponent by 1/{alpha11} (GDoF values scale accordingly)")]
    Unnormalized { alpha11: String },

    #[error("negative exponent {0}")]
    NegativeExponent(String),

    #[error("{0}")]
    Domain(String),

    #[error("point ({d1}, {d2}) lies outside the GDoF region")]
    OutsideRegion { d1: String, d2: String },

    #[error("no feasible private/public split; violated constraints: {}", violated.join(", "))]
    InfeasibleSplit { violated: Vec<String> },

    #[error("channel {link} is numerically rank deficient (condition number {condition:.3e})")]
    RankDeficient { link: String, condition: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Stable machine-readable tag for CLI error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidAntennas(_) => "invalid_antennas",
            Error::Unnormalized { .. } => "unnormalized_exponents",
            Error::NegativeExponent(_) => "negative_exponent",
            Error::Domain(_) => "domain",
            Error::OutsideRegion { .. } => "outside_region",
            Error::InfeasibleSplit { .. } => "infeasible_split",
            Error::RankDeficient { .. } => "rank_deficient",
            Error::Dimension(_) => "dimension_mismatch",
            Error::NotPsd(_) => "not_psd",
            Error::Parse(_) => "parse",
            Error::Io { .. } => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
