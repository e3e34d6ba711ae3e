use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("sphere dimension N={0} is not supported (need N >= {1})")]
    Dimension(usize, usize),

    #[error("dimension mismatch: S^{0} vs S^{1}")]
    DimensionMismatch(usize, usize),

    #[error("point has zero or non-finite norm")]
    DegeneratePoint,

    #[error("{name}={value} is out of range: {expected}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("degree {k} exceeds table limit k_max={k_max}")]
    DegreeOutOfTable { k: usize, k_max: usize },

    #[error(
        "spectral table too large: N={n}, k_max={k_max} (limits N <= {max_n}, k_max <= {max_k})"
    )]
    TableTooLarge {
        n: usize,
        k_max: usize,
        max_n: usize,
        max_k: usize,
    },

    #[error("integer overflow computing {0}")]
    Overflow(&'static str),

    #[error("quadrature with {nodes} nodes per panel cannot resolve degree {degree}")]
    Unresolved { nodes: usize, degree: usize },

    #[error("non-finite integrand value {value} at gamma={gamma}")]
    NonFinite { gamma: f64, value: f64 },

    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("nonpositive value {value} at n={n}; log-log fit needs v > 0")]
    NonPositive { n: f64, value: f64 },

    #[error("invalid step function: {0}")]
    InvalidStep(String),

    #[error("unknown profile {0:?}")]
    UnknownProfile(String),

    #[error("zero denominator: {0}")]
    ZeroDenominator(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn out_of_range<T>(name: &'static str, value: f64, expected: &'static str) -> Result<T> {
    Err(Error::OutOfRange {
        name,
        value,
        expected,
    })
}
