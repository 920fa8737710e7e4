use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid gamma: {0}")]
    InvalidGamma(String),

    #[error("invalid test prior pi0 = {0}: must lie in (0, 1)")]
    InvalidPrior(f64),

    #[error("invalid SNR delta2 = {0}: must be finite and nonnegative")]
    InvalidDelta(f64),

    #[error("invalid ridge level lambda = {0}: must be finite and positive")]
    InvalidLambda(f64),

    #[error("class {class} has {count} samples; at least 2 are required")]
    TooFewSamples { class: usize, count: usize },

    #[error("Stieltjes transform has an atom at zero for gamma = {0} >= 1")]
    AtomAtZero(f64),

    #[error("curve has {0} points; behavior classification needs at least 8")]
    CurveTooShort(usize),

    #[error("gamma0 = {gamma0} lies on the phase knot {knot}")]
    OnKnot { gamma0: f64, knot: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("covariance factor must be lower triangular with a strictly positive diagonal")]
    NotPositiveDefinite,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid sweep spec: {0}")]
    InvalidSpec(String),

    #[error("serialization failed: {0}")]
    Serialization(String),
}
