//! Static and dynamic (residual / past) entropies, weighted and unweighted,
//! with the conditional means and length-biased functions they decompose
//! into.
//!
//! All logarithms are natural. Conditional laws are normalized with the
//! distribution's own `cdf`/`survival` rather than a re-integrated density,
//! and the normalizer is applied inside the integrand so absolute quadrature
//! tolerances stay meaningful deep in a tail.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{Distribution, Family, Lifetime, NORMALIZER_FLOOR};
use crate::error::{Error, Result, Tail};
use crate::format::{de_f64, fmt17, ser_f64};
use crate::numerics::{digamma, integrate_pieces, log_gamma, p_log_p, p_log_p_from_ln, QuadratureConfig};

/// A quadrature-backed value together with its accumulated error estimate
/// and convergence flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self { value, error: 0.0, converged: true }
    }

    /// Combine estimates with `f` applied to the values; errors add (scaled by
    /// `scale`), convergence requires all parts.
    fn combine(parts: &[Estimate], scale: f64, value: f64) -> Self {
        Self {
            value,
            error: scale.abs() * parts.iter().map(|p| p.error).sum::<f64>(),
            converged: parts.iter().all(|p| p.converged),
        }
    }
}

/// Integrate `f` over `[a, b]` inside the support of `d`, splitting at the
/// density's breakpoints. For an infinite upper limit the mapped rule is tried
/// first; only if it fails to converge is the range truncated where the
/// survival function drops below `1e-14`.
pub(crate) fn quad<L, F>(d: &L, f: F, a: f64, b: f64) -> Result<Estimate>
where
    L: Lifetime + ?Sized,
    F: Fn(f64) -> f64,
{
    let cfg = QuadratureConfig::fine();
    if b <= a {
        return Ok(Estimate::exact(0.0));
    }
    let mut points = vec![a];
    points.extend(d.breakpoints().into_iter().filter(|&p| p > a && p < b));
    points.push(b);
    let r = integrate_pieces(&f, &points, &cfg)?;
    if r.converged || b.is_finite() {
        return Ok(Estimate { value: r.value, error: r.error_estimate, converged: r.converged });
    }
    let cut = d.quantile(1.0 - 1e-14)?;
    if cut <= a {
        return Ok(Estimate { value: r.value, error: r.error_estimate, converged: false });
    }
    let last = points.len() - 1;
    points[last] = cut;
    let t = integrate_pieces(&f, &points, &cfg)?;
    Ok(Estimate { value: t.value, error: t.error_estimate, converged: t.converged })
}

fn check_residual<L: Lifetime + ?Sized>(d: &L, t: f64) -> Result<f64> {
    let (lo, hi) = d.support();
    if !(t >= lo && t < hi) {
        return Err(Error::OutsideSupport { t, lo, hi });
    }
    let s = d.survival(t);
    if !(s > NORMALIZER_FLOOR) {
        return Err(Error::DegenerateTail { tail: Tail::Right, t, normalizer: s });
    }
    Ok(s)
}

fn check_past<L: Lifetime + ?Sized>(d: &L, t: f64) -> Result<f64> {
    let (lo, hi) = d.support();
    if !(t > lo && t <= hi) {
        return Err(Error::OutsideSupport { t, lo, hi });
    }
    let c = d.cdf(t);
    if !(c > NORMALIZER_FLOOR) {
        return Err(Error::DegenerateTail { tail: Tail::Left, t, normalizer: c });
    }
    Ok(c)
}

/// Differential entropy `H = -∫ f log f`.
pub fn differential_entropy<L: Lifetime + ?Sized>(d: &L) -> Result<Estimate> {
    let (lo, hi) = d.support();
    let r = quad(d, |x| p_log_p_from_ln(d.ln_density(x)), lo, hi)?;
    Ok(Estimate { value: -r.value, ..r })
}

/// Weighted entropy `H^w = -∫ x f log f`.
pub fn weighted_entropy<L: Lifetime + ?Sized>(d: &L) -> Result<Estimate> {
    let (lo, hi) = d.support();
    let r = quad(d, |x| x * p_log_p_from_ln(d.ln_density(x)), lo, hi)?;
    Ok(Estimate { value: -r.value, ..r })
}

/// Residual entropy `H(t)`, the differential entropy of `[X | X > t]`,
/// evaluated as `log F̄(t) - ∫_t^ν (f / F̄(t)) log f`.
pub fn residual_entropy<L: Lifetime + ?Sized>(d: &L, t: f64) -> Result<Estimate> {
    let s = check_residual(d, t)?;
    let ln_s = s.ln();
    let r = quad(d, |x| conditional_times_ln_f(d.ln_density(x), ln_s), t, d.support().1)?;
    Ok(Estimate { value: ln_s - r.value, ..r })
}

/// Past entropy `H̄(t)`, the differential entropy of `[X | X <= t]`.
pub fn past_entropy<L: Lifetime + ?Sized>(d: &L, t: f64) -> Result<Estimate> {
    let c = check_past(d, t)?;
    let ln_c = c.ln();
    let r = quad(d, |x| conditional_times_ln_f(d.ln_density(x), ln_c), d.support().0, t)?;
    Ok(Estimate { value: ln_c - r.value, ..r })
}

// (f / N) log f with the 0 log 0 = 0 convention.
#[inline]
fn conditional_times_ln_f(ln_f: f64, ln_norm: f64) -> f64 {
    let g = (ln_f - ln_norm).exp();
    if ln_f.exp() < 1e-300 || g == 0.0 {
        0.0
    } else {
        g * ln_f
    }
}

/// Weighted residual entropy `H^w(t) = -∫_t^ν x (f/F̄(t)) log(f/F̄(t))`,
/// evaluated directly from the conditional density.
pub fn weighted_residual_entropy<L: Lifetime + ?Sized>(d: &L, t: f64) -> Result<Estimate> {
    let s = check_residual(d, t)?;
    let ln_s = s.ln();
    let r = quad(d, |x| x * conditional_plogp(d.ln_density(x), ln_s), t, d.support().1)?;
    Ok(Estimate { value: -r.value, ..r })
}

/// `H^w(t)` through the split form
/// `-(1/F̄)∫_t x f log f + (log F̄ / F̄) ∫_t x f`, with the tail mean taken from
/// `∫_t x f = t F̄(t) + ∫_t F̄`.
pub fn weighted_residual_entropy_split<L: Lifetime + ?Sized>(d: &L, t: f64) -> Result<Estimate> {
    let s = check_residual(d, t)?;
    let ln_s = s.ln();
    let hi = d.support().1;
    let a = quad(d, |x| x * conditional_times_ln_f(d.ln_density(x), ln_s), t, hi)?;
    let b = quad(d, |y| d.survival(y) / s, t, hi)?;
    let tail_mean = t + b.value;
    Ok(Estimate::combine(&[a, b], 1.0 + ln_s.abs(), -a.value + ln_s * tail_mean))
}

/// Weighted past entropy `H̄^w(t) = -∫_0^t x (f/F(t)) log(f/F(t))`.
pub fn weighted_past_entropy<L: Lifetime + ?Sized>(d: &L, t: f64) -> Result<Estimate> {
    let c = check_past(d, t)?;
    let ln_c = c.ln();
    let r = quad(d, |x| x * conditional_plogp(d.ln_density(x), ln_c), d.support().0, t)?;
    Ok(Estimate { value: -r.value, ..r })
}

/// `H̄^w(t)` through the split form, with `∫_0^t x f = t F(t) - ∫_0^t F`.
pub fn weighted_past_entropy_split<L: Lifetime + ?Sized>(d: &L, t: f64) -> Result<Estimate> {
    let c = check_past(d, t)?;
    let ln_c = c.ln();
    let lo = d.support().0;
    let a = quad(d, |x| x * conditional_times_ln_f(d.ln_density(x), ln_c), lo, t)?;
    let b = quad(d, |y| d.cdf(y) / c, lo, t)?;
    let head_mean = t - b.value;
    Ok(Estimate::combine(&[a, b], 1.0 + ln_c.abs(), -a.value + ln_c * head_mean))
}

#[inline]
fn conditional_plogp(ln_f: f64, ln_norm: f64) -> f64 {
    if ln_f == f64::NEG_INFINITY {
        0.0
    } else {
        p_log_p_from_ln(ln_f - ln_norm)
    }
}

/// `∫_t^ν x f(x) dx`.
pub fn tail_first_moment<L: Lifetime + ?Sized>(d: &L, t: f64) -> Result<Estimate> {
    quad(d, |x| x * d.density(x), t.max(d.support().0), d.support().1)
}

/// `∫_0^t x f(x) dx`.
pub fn head_first_moment<L: Lifetime + ?Sized>(d: &L, t: f64) -> Result<Estimate> {
    quad(d, |x| x * d.density(x), d.support().0, t.min(d.support().1))
}

/// `∫_t^ν F̄(y) dy`.
pub fn tail_survival_integral<L: Lifetime + ?Sized>(d: &L, t: f64) -> Result<Estimate> {
    quad(d, |y| d.survival(y), t.max(d.support().0), d.support().1)
}

/// `∫_0^t F(y) dy`.
pub fn head_cdf_integral<L: Lifetime + ?Sized>(d: &L, t: f64) -> Result<Estimate> {
    quad(d, |y| d.cdf(y), d.support().0, t.min(d.support().1))
}

/// Vitality function `δ(t) = E(X | X > t)`, computed by both the direct
/// moment and `t + (1/F̄(t)) ∫_t F̄`.
pub fn mean_residual_value_forms<L: Lifetime + ?Sized>(d: &L, t: f64) -> Result<(Estimate, Estimate)> {
    let s = check_residual(d, t)?;
    let hi = d.support().1;
    let direct = quad(d, |x| x * d.density(x) / s, t, hi)?;
    let tail = quad(d, |y| d.survival(y) / s, t, hi)?;
    Ok((direct, Estimate { value: t + tail.value, ..tail }))
}

/// `δ(t) = E(X | X > t)`.
pub fn mean_residual_value<L: Lifetime + ?Sized>(d: &L, t: f64) -> Result<Estimate> {
    Ok(mean_residual_value_forms(d, t)?.0)
}

/// Mean past lifetime `μ(t) = E(X | X <= t)` by the direct moment and by
/// `t - (1/F(t)) ∫_0^t F`.
pub fn mean_past_lifetime_forms<L: Lifetime + ?Sized>(d: &L, t: f64) -> Result<(Estimate, Estimate)> {
    let c = check_past(d, t)?;
    let lo = d.support().0;
    let direct = quad(d, |x| x * d.density(x) / c, lo, t)?;
    let head = quad(d, |y| d.cdf(y) / c, lo, t)?;
    Ok((direct, Estimate { value: t - head.value, ..head }))
}

/// `μ(t) = E(X | X <= t)`.
pub fn mean_past_lifetime<L: Lifetime + ?Sized>(d: &L, t: f64) -> Result<Estimate> {
    Ok(mean_past_lifetime_forms(d, t)?.0)
}

/// Length-biased distribution function `F*(t) = (1/E X) ∫_0^t x f`.
pub fn length_biased_cdf<L: Lifetime + ?Sized>(d: &L, t: f64) -> Result<Estimate> {
    let (lo, hi) = d.support();
    if t <= lo {
        return Ok(Estimate::exact(0.0));
    }
    if t >= hi {
        return Ok(Estimate::exact(1.0));
    }
    let m = d.mean();
    let r = head_first_moment(d, t)?;
    Ok(Estimate { value: (r.value / m).clamp(0.0, 1.0), error: r.error / m, converged: r.converged })
}

/// `F̄*(t) = 1 - F*(t)`.
pub fn length_biased_survival<L: Lifetime + ?Sized>(d: &L, t: f64) -> Result<Estimate> {
    let r = length_biased_cdf(d, t)?;
    Ok(Estimate { value: 1.0 - r.value, ..r })
}

/// Weighted entropy of an independent pair, `E(Y) H^w_X + E(X) H^w_Y`.
pub fn joint_weighted_entropy_independent<L1, L2>(dx: &L1, dy: &L2) -> Result<Estimate>
where
    L1: Lifetime + ?Sized,
    L2: Lifetime + ?Sized,
{
    let hx = weighted_entropy(dx)?;
    let hy = weighted_entropy(dy)?;
    let (mx, my) = (dx.mean(), dy.mean());
    Ok(Estimate {
        value: my * hx.value + mx * hy.value,
        error: my.abs() * hx.error + mx.abs() * hy.error,
        converged: hx.converged && hy.converged,
    })
}

/// `-∬ x y f_X f_Y log(f_X f_Y)` by iterated quadrature; independent check of
/// [`joint_weighted_entropy_independent`].
pub fn joint_weighted_entropy_quadrature<L1, L2>(dx: &L1, dy: &L2) -> Result<Estimate>
where
    L1: Lifetime + ?Sized,
    L2: Lifetime + ?Sized,
{
    let (ylo, yhi) = dy.support();
    let inner = |x: f64| -> f64 {
        let lx = dx.ln_density(x);
        if lx == f64::NEG_INFINITY {
            return 0.0;
        }
        match quad(dy, |y| y * p_log_p_from_ln(lx + dy.ln_density(y)), ylo, yhi) {
            Ok(r) if r.converged => r.value,
            _ => f64::NAN,
        }
    };
    let (xlo, xhi) = dx.support();
    let r = quad(dx, |x| x * inner(x), xlo, xhi)?;
    Ok(Estimate { value: -r.value, ..r })
}

/// The measures a curve or a CLI query can ask for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeasureKind {
    #[serde(rename = "differential")]
    DifferentialEntropy,
    #[serde(rename = "weighted")]
    WeightedEntropy,
    #[serde(rename = "residual")]
    ResidualEntropy,
    #[serde(rename = "past")]
    PastEntropy,
    #[serde(rename = "weighted-residual")]
    WeightedResidualEntropy,
    #[serde(rename = "weighted-past")]
    WeightedPastEntropy,
    #[serde(rename = "mean-residual")]
    MeanResidualValue,
    #[serde(rename = "mean-past")]
    MeanPastLifetime,
    #[serde(rename = "length-biased-cdf")]
    LengthBiasedCdf,
    #[serde(rename = "length-biased-survival")]
    LengthBiasedSurvival,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 10] = [
        MeasureKind::DifferentialEntropy,
        MeasureKind::WeightedEntropy,
        MeasureKind::ResidualEntropy,
        MeasureKind::PastEntropy,
        MeasureKind::WeightedResidualEntropy,
        MeasureKind::WeightedPastEntropy,
        MeasureKind::MeanResidualValue,
        MeasureKind::MeanPastLifetime,
        MeasureKind::LengthBiasedCdf,
        MeasureKind::LengthBiasedSurvival,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::DifferentialEntropy => "differential",
            MeasureKind::WeightedEntropy => "weighted",
            MeasureKind::ResidualEntropy => "residual",
            MeasureKind::PastEntropy => "past",
            MeasureKind::WeightedResidualEntropy => "weighted-residual",
            MeasureKind::WeightedPastEntropy => "weighted-past",
            MeasureKind::MeanResidualValue => "mean-residual",
            MeasureKind::MeanPastLifetime => "mean-past",
            MeasureKind::LengthBiasedCdf => "length-biased-cdf",
            MeasureKind::LengthBiasedSurvival => "length-biased-survival",
        }
    }

    /// Whether the measure takes a time argument.
    pub fn is_dynamic(self) -> bool {
        !matches!(self, MeasureKind::DifferentialEntropy | MeasureKind::WeightedEntropy)
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MeasureKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown measure `{s}`")))
    }
}

/// Evaluate any measure; dynamic kinds require `t`.
pub fn evaluate<L: Lifetime + ?Sized>(d: &L, kind: MeasureKind, t: Option<f64>) -> Result<Estimate> {
    let need_t = || t.ok_or_else(|| Error::Invalid(format!("measure `{kind}` needs a time argument")));
    match kind {
        MeasureKind::DifferentialEntropy => differential_entropy(d),
        MeasureKind::WeightedEntropy => weighted_entropy(d),
        MeasureKind::ResidualEntropy => residual_entropy(d, need_t()?),
        MeasureKind::PastEntropy => past_entropy(d, need_t()?),
        MeasureKind::WeightedResidualEntropy => weighted_residual_entropy(d, need_t()?),
        MeasureKind::WeightedPastEntropy => weighted_past_entropy(d, need_t()?),
        MeasureKind::MeanResidualValue => mean_residual_value(d, need_t()?),
        MeasureKind::MeanPastLifetime => mean_past_lifetime(d, need_t()?),
        MeasureKind::LengthBiasedCdf => length_biased_cdf(d, need_t()?),
        MeasureKind::LengthBiasedSurvival => length_biased_survival(d, need_t()?),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub t: f64,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub value: f64,
    pub converged: bool,
}

/// A dynamic measure sampled on an increasing grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyCurve {
    pub kind: MeasureKind,
    pub dist: String,
    pub grid: Vec<CurvePoint>,
}

impl EntropyCurve {
    /// CSV with header `t,value,converged`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,value,converged\n");
        for p in &self.grid {
            out.push_str(&format!("{},{},{}\n", fmt17(p.t), fmt17(p.value), p.converged));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("curve serializes")
    }

    pub fn values(&self) -> Vec<f64> {
        self.grid.iter().map(|p| p.value).collect()
    }
}

/// `n` evenly spaced points on `[a, b]`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 }).collect(),
    }
}

/// Default grid: 512 points on `[q(1e-3), q(1 - 1e-3)]`, capped at `ν`.
pub fn default_grid<L: Lifetime + ?Sized>(d: &L) -> Result<Vec<f64>> {
    default_grid_with(d, 512)
}

pub fn default_grid_with<L: Lifetime + ?Sized>(d: &L, n: usize) -> Result<Vec<f64>> {
    let (lo, hi) = d.support();
    let a = d.quantile(1e-3)?.max(lo);
    let b = d.quantile(1.0 - 1e-3)?.min(hi);
    Ok(linspace(a, b, n))
}

/// Evaluate a dynamic measure on `grid`. Points are computed in parallel and
/// assembled in grid order; a failing point is recorded as `NaN` with
/// `converged = false`.
pub fn entropy_curve<L: Lifetime + ?Sized>(d: &L, kind: MeasureKind, grid: &[f64]) -> Result<EntropyCurve> {
    if !kind.is_dynamic() {
        return Err(Error::Invalid(format!("`{kind}` is a static measure; curves need a dynamic one")));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Invalid("curve grid must be strictly increasing".into()));
    }
    let (lo, hi) = d.support();
    if let Some(&t) = grid.iter().find(|&&t| !(t >= lo && t <= hi)) {
        return Err(Error::OutsideSupport { t, lo, hi });
    }
    let points = grid
        .par_iter()
        .map(|&t| match evaluate(d, kind, Some(t)) {
            Ok(e) => CurvePoint { t, value: e.value, converged: e.converged },
            Err(_) => CurvePoint { t, value: f64::NAN, converged: false },
        })
        .collect();
    Ok(EntropyCurve { kind, dist: d.label(), grid: points })
}

/// Domain on which a dynamic measure can be differenced: residual measures
/// need `t < ν`, past measures `t > 0`, so the open end is pulled in by a
/// relative `1e-9`.
pub fn measure_domain<L: Lifetime + ?Sized>(d: &L, kind: MeasureKind) -> (f64, f64) {
    let (lo, hi) = d.support();
    let pad = |x: f64| 1e-9 * x.abs().max(1.0);
    match kind {
        MeasureKind::ResidualEntropy | MeasureKind::WeightedResidualEntropy | MeasureKind::MeanResidualValue => {
            (lo, if hi.is_finite() { hi - pad(hi) } else { hi })
        }
        MeasureKind::PastEntropy | MeasureKind::WeightedPastEntropy | MeasureKind::MeanPastLifetime => {
            (lo + pad(lo), hi)
        }
        _ => (lo, hi),
    }
}

/// `d/dt` of a dynamic measure by finite differences of quadrature values.
pub fn measure_derivative<L: Lifetime + ?Sized>(d: &L, kind: MeasureKind, t: f64) -> Result<f64> {
    if !kind.is_dynamic() {
        return Err(Error::Invalid(format!("`{kind}` does not depend on t")));
    }
    let f = |s: f64| evaluate(d, kind, Some(s)).map(|e| e.value).unwrap_or(f64::NAN);
    crate::numerics::differentiate_within(f, t, measure_domain(d, kind))
}

/// Closed forms for the built-in families.
pub mod closed_form {
    use super::*;

    /// Closed-form weighted entropy, or `None` when the family has none.
    pub fn weighted_entropy(d: &Distribution) -> Option<f64> {
        match d.family() {
            Family::Exponential { rate } => Some(exponential_weighted(*rate)),
            Family::Uniform { a, b } => Some(0.5 * (a + b) * (b - a).ln()),
            Family::Gamma { shape, scale } => gamma_weighted(*shape, *scale).ok(),
            Family::Beta { alpha, beta } => beta_weighted(*alpha, *beta).ok(),
            Family::TriangularUp => beta_weighted(2.0, 1.0).ok(),
            Family::TriangularDown => beta_weighted(1.0, 2.0).ok(),
            Family::PiecewiseConstant { weights } => Some(piecewise_weighted(weights)),
        }
    }

    /// `(2 - log λ) / λ`.
    pub fn exponential_weighted(rate: f64) -> f64 {
        (2.0 - rate.ln()) / rate
    }

    /// `αβ log[β^α Γ(α)] - α(α-1)β{log β + ψ₀(α+1)} + α(α+1)β`.
    pub fn gamma_weighted(alpha: f64, beta: f64) -> Result<f64> {
        let log_norm = alpha * beta.ln() + log_gamma(alpha)?;
        Ok(alpha * beta * log_norm - alpha * (alpha - 1.0) * beta * (beta.ln() + digamma(alpha + 1.0)?)
            + alpha * (alpha + 1.0) * beta)
    }

    /// Weighted entropy of Beta(α, β), assembled from gamma and digamma values
    /// term by term.
    pub fn beta_weighted(a: f64, b: f64) -> Result<f64> {
        let lb = crate::numerics::log_beta(a, b)?;
        let bf = lb.exp();
        let lg_ab1 = log_gamma(a + b + 1.0)?;
        // Γ(α+1)Γ(β) / Γ(α+β+1)
        let ratio = (log_gamma(a + 1.0)? + log_gamma(b)? - lg_ab1).exp();
        let psi_ab1 = digamma(a + b + 1.0)?;
        let term1 = lb / bf * ratio;
        let term2 = (a - 1.0) / bf * ratio * (digamma(a + 1.0)? - psi_ab1);
        let gamma_b_over = (log_gamma(b)? - lg_ab1).exp();
        let gamma_a1 = log_gamma(a + 1.0)?.exp();
        let gamma_a = log_gamma(a)?.exp();
        let term3 = (b - 1.0) / bf * gamma_b_over * (digamma(b)? * gamma_a1 - a * gamma_a * psi_ab1);
        Ok(term1 - term2 - term3)
    }

    /// `-Σ k c_k log c_k - H/2` with `H = -Σ c_k log c_k` (unit bins).
    pub fn piecewise_weighted(weights: &[f64]) -> f64 {
        let h = piecewise_entropy(weights);
        -weights.iter().enumerate().map(|(i, c)| (i + 1) as f64 * p_log_p(*c)).sum::<f64>() - 0.5 * h
    }

    pub fn piecewise_entropy(weights: &[f64]) -> f64 {
        -weights.iter().map(|c| p_log_p(*c)).sum::<f64>()
    }

    /// Exponential weighted residual entropy
    /// `t + 2/λ - (t + 1/λ) log λ`.
    pub fn exponential_weighted_residual(rate: f64, t: f64) -> f64 {
        t + 2.0 / rate - (t + 1.0 / rate) * rate.ln()
    }

    /// Exponential weighted past entropy for `t > 0`.
    pub fn exponential_weighted_past(rate: f64, t: f64) -> f64 {
        let e = (-rate * t).exp();
        let big_f = -(-rate * t).exp_m1();
        let bracket = 2.0 / rate - 2.0 / rate * e - 2.0 * t * e - rate * t * t * e
            + (1.0 / rate - e / rate - t * e) * (big_f / rate).ln();
        bracket / big_f
    }

    /// Uniform(0, ν) weighted past entropy `(t/2) log t`.
    pub fn uniform_weighted_past(t: f64) -> f64 {
        0.5 * t * t.ln()
    }

    /// Uniform(0, ν) weighted residual entropy `((t + ν)/2) log(ν - t)`.
    pub fn uniform_weighted_residual(nu: f64, t: f64) -> f64 {
        0.5 * (t + nu) * (nu - t).ln()
    }
}
