use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("integrand returned a non-finite value ({value}) at x = {x}")]
    NonFiniteIntegrand { x: f64, value: f64 },

    #[error("invalid integration interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },

    #[error("no sign change of g on [{lo}, {hi}]: g(lo) = {g_lo}, g(hi) = {g_hi}; expand the bracket")]
    NoSignChange { lo: f64, hi: f64, g_lo: f64, g_hi: f64 },

    #[error("domain too narrow around t = {t} for a difference stencil")]
    StencilDomain { t: f64 },

    #[error("{function}: argument out of domain ({detail})")]
    Domain { function: &'static str, detail: String },

    #[error("invalid distribution parameters: {0}")]
    InvalidParameters(String),

    #[error("cannot parse distribution spec `{spec}`: {reason}")]
    Parse { spec: String, reason: String },

    #[error("degenerate {tail} at t = {t}: normalizer {normalizer:e} underflows")]
    DegenerateTail { tail: Tail, t: f64, normalizer: f64 },

    #[error("t = {t} lies outside the support ({lo}, {hi})")]
    OutsideSupport { t: f64, lo: f64, hi: f64 },

    #[error("transform is not strictly monotone: derivative changes sign near x = {x}")]
    NotMonotone { x: f64 },

    #[error("too few valid grid points ({valid}, need {needed})")]
    TooFewPoints { valid: usize, needed: usize },

    #[error("reconstruction failed at t = {t}: {reason}")]
    Reconstruction { t: f64, reason: String },

    #[error("{0}")]
    Invalid(String),
}

/// Which conditional normalizer underflowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    /// Survival function (right tail), normalizer of the residual lifetime.
    Right,
    /// Distribution function (left tail), normalizer of the past lifetime.
    Left,
}

impl std::fmt::Display for Tail {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tail::Right => f.write_str("right tail (survival)"),
            Tail::Left => f.write_str("left tail (cdf)"),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
