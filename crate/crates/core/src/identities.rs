//! Numerical checks of the identities linking the static, residual and past
//! weighted entropies.
//!
//! Every check returns an [`IdentityReport`] with both sides at each point.
//! The three printed derivative/integral claims that do not survive numerical
//! evaluation are kept apart in [`audit_printed_claims`]: they are evaluated
//! exactly as stated and reported, never asserted. Their corrected forms are
//! in [`check_corrected_derivatives`].

use serde::{Deserialize, Serialize};

use crate::distributions::{hazard, reversed_hazard, Lifetime};
use crate::entropies::{
    differential_entropy, head_cdf_integral, head_first_moment, joint_weighted_entropy_independent,
    joint_weighted_entropy_quadrature, length_biased_cdf, mean_past_lifetime, mean_residual_value, measure_derivative,
    past_entropy, quad, residual_entropy, tail_first_moment, tail_survival_integral, weighted_entropy,
    weighted_past_entropy, weighted_residual_entropy, MeasureKind,
};
use crate::error::Result;
use crate::format::{de_f64, de_opt_f64, ser_f64, ser_opt_f64};
use crate::transforms::{ImageDistribution, MonotoneTransform};

/// Tolerance for identities between integrals.
pub const INTEGRAL_TOL: f64 = 1e-7;
/// Tolerance for the conditional-mean integral identities.
pub const MEAN_TOL: f64 = 1e-8;
/// Tolerance for identities involving a numerical derivative.
pub const DERIVATIVE_TOL: f64 = 1e-5;
/// Tolerance for the decomposition of `H^w` into residual and past parts.
pub const DECOMPOSITION_TOL: f64 = 1e-6;
/// Tolerance for the independent-pair law against 2-D quadrature.
pub const PAIR_TOL: f64 = 1e-6;
/// Tolerance for `H^w = E(X) H` on uniform laws.
pub const PRODUCT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityId {
    /// `∫_t x f = t F̄(t) + ∫_t F̄`.
    TailMean,
    /// Printed claim `H^w(t) = t H(t) + ∫_t H(y) dy`.
    ClaimedTailEntropyIntegral,
    /// Printed claim `dH^w/dt = t dH/dt`.
    ClaimedResidualDerivative,
    /// `∫_0^t x f = t F(t) - ∫_0^t F`.
    HeadMean,
    /// Printed claim `H̄^w(t) = t H̄(t) - ∫_0^t H̄(y) dy`.
    ClaimedPastEntropyIntegral,
    /// `H^w` split into the residual and past parts at `t`.
    Decomposition,
    /// `H^w_{aX+b} = a[H^w + E(X) log a] + b(H + log a)`.
    AffineLaw,
    /// `H^w_{(X,Y)} = E(Y) H^w_X + E(X) H^w_Y` for independent `X`, `Y`.
    IndependentPair,
    /// `H^w = E(X) H` for uniform laws.
    UniformProduct,
    CorrectedResidualDerivative,
    CorrectedPastDerivative,
    CorrectedTailEntropyIntegral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Diverges,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualPoint {
    /// `None` for identities without a time argument.
    #[serde(serialize_with = "ser_opt_f64", deserialize_with = "de_opt_f64")]
    pub t: Option<f64>,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub lhs: f64,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub rhs: f64,
}

impl ResidualPoint {
    fn at(t: f64, lhs: f64, rhs: f64) -> Self {
        Self { t: Some(t), lhs, rhs }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity_id: IdentityId,
    pub dist: String,
    pub residuals: Vec<ResidualPoint>,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub max_abs_residual: f64,
    pub verdict: Verdict,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl IdentityReport {
    /// Verdict is `diverges` if any side is non-finite, otherwise `holds` iff
    /// the largest `|lhs - rhs|` is within `tolerance`.
    pub fn new(identity_id: IdentityId, dist: String, residuals: Vec<ResidualPoint>, tolerance: f64) -> Self {
        let finite = residuals.iter().all(|p| p.lhs.is_finite() && p.rhs.is_finite());
        let max_abs_residual =
            if finite { residuals.iter().map(|p| (p.lhs - p.rhs).abs()).fold(0.0, f64::max) } else { f64::INFINITY };
        let verdict = if !finite {
            Verdict::Diverges
        } else if max_abs_residual <= tolerance {
            Verdict::Holds
        } else {
            Verdict::Fails
        };
        Self { identity_id, dist, residuals, max_abs_residual, verdict, tolerance, note: None }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

// A failing component makes the point non-finite, which reads as `diverges`.
fn or_nan(r: Result<f64>) -> f64 {
    r.unwrap_or(f64::NAN)
}

/// `H^w = E(X){-F*(t) log F(t) - F̄*(t) log F̄(t)} + F(t) H̄^w(t) + F̄(t) H^w(t)`.
pub fn check_decomposition<L: Lifetime + ?Sized>(d: &L, grid: &[f64]) -> Result<IdentityReport> {
    let hw = weighted_entropy(d)?.value;
    let points = grid
        .iter()
        .map(|&t| {
            let rhs = or_nan((|| {
                let (big_f, big_s) = (d.cdf(t), d.survival(t));
                let fs = length_biased_cdf(d, t)?.value;
                let mixing = d.mean() * (-fs * big_f.ln() - (1.0 - fs) * big_s.ln());
                Ok(mixing + big_f * weighted_past_entropy(d, t)?.value + big_s * weighted_residual_entropy(d, t)?.value)
            })());
            ResidualPoint::at(t, hw, rhs)
        })
        .collect();
    Ok(IdentityReport::new(IdentityId::Decomposition, d.label(), points, DECOMPOSITION_TOL))
}

/// `∫_t^ν x f = t F̄(t) + ∫_t^ν F̄`.
pub fn check_tail_mean_identity<L: Lifetime + ?Sized>(d: &L, grid: &[f64]) -> Result<IdentityReport> {
    let mut points = Vec::with_capacity(grid.len());
    for &t in grid {
        let lhs = tail_first_moment(d, t)?.value;
        let rhs = t * d.survival(t) + tail_survival_integral(d, t)?.value;
        points.push(ResidualPoint::at(t, lhs, rhs));
    }
    Ok(IdentityReport::new(IdentityId::TailMean, d.label(), points, MEAN_TOL))
}

/// `∫_0^t x f = t F(t) - ∫_0^t F`.
pub fn check_head_mean_identity<L: Lifetime + ?Sized>(d: &L, grid: &[f64]) -> Result<IdentityReport> {
    let mut points = Vec::with_capacity(grid.len());
    for &t in grid {
        let lhs = head_first_moment(d, t)?.value;
        let rhs = t * d.cdf(t) - head_cdf_integral(d, t)?.value;
        points.push(ResidualPoint::at(t, lhs, rhs));
    }
    Ok(IdentityReport::new(IdentityId::HeadMean, d.label(), points, MEAN_TOL))
}

/// `∫_t^ν H(y) dy`, or `±inf` when `H` does not vanish far in an unbounded
/// tail.
fn residual_entropy_integral<L: Lifetime + ?Sized>(d: &L, t: f64) -> f64 {
    let hi = d.support().1;
    if !hi.is_finite() {
        let far = d.quantile(1.0 - 1e-9).and_then(|y| residual_entropy(d, y));
        match far {
            Ok(h) if h.value.abs() > 1e-6 => return h.value.signum() * f64::INFINITY,
            Err(_) => return f64::NAN,
            _ => {}
        }
    }
    let cut = if hi.is_finite() { hi } else { d.quantile(1.0 - 1e-12).unwrap_or(hi) };
    or_nan(quad(d, |y| or_nan(residual_entropy(d, y).map(|e| e.value)), t, cut).map(|e| e.value))
}

/// Evaluate the three printed claims exactly as stated:
///
/// - `H^w(t) = t H(t) + ∫_t^ν H(y) dy`
/// - `dH^w/dt = t dH/dt`
/// - `H̄^w(t) = t H̄(t) - ∫_0^t H̄(y) dy`
///
/// Nothing is asserted; a divergent side is reported as `diverges`.
pub fn audit_printed_claims<L: Lifetime + ?Sized>(d: &L, grid: &[f64]) -> Vec<IdentityReport> {
    let lo = d.support().0;
    let tail: Vec<ResidualPoint> = grid
        .iter()
        .map(|&t| {
            let lhs = or_nan(weighted_residual_entropy(d, t).map(|e| e.value));
            let h = or_nan(residual_entropy(d, t).map(|e| e.value));
            ResidualPoint::at(t, lhs, t * h + residual_entropy_integral(d, t))
        })
        .collect();
    let derivative: Vec<ResidualPoint> = grid
        .iter()
        .map(|&t| {
            let lhs = or_nan(measure_derivative(d, MeasureKind::WeightedResidualEntropy, t));
            let rhs = t * or_nan(measure_derivative(d, MeasureKind::ResidualEntropy, t));
            ResidualPoint::at(t, lhs, rhs)
        })
        .collect();
    let past: Vec<ResidualPoint> = grid
        .iter()
        .map(|&t| {
            let lhs = or_nan(weighted_past_entropy(d, t).map(|e| e.value));
            let h = or_nan(past_entropy(d, t).map(|e| e.value));
            let integral = or_nan(quad(d, |y| or_nan(past_entropy(d, y).map(|e| e.value)), lo, t).map(|e| e.value));
            ResidualPoint::at(t, lhs, t * h - integral)
        })
        .collect();
    let note = "printed claim evaluated as stated; reported, not asserted";
    vec![
        IdentityReport::new(IdentityId::ClaimedTailEntropyIntegral, d.label(), tail, INTEGRAL_TOL).with_note(note),
        IdentityReport::new(IdentityId::ClaimedResidualDerivative, d.label(), derivative, DERIVATIVE_TOL)
            .with_note(note),
        IdentityReport::new(IdentityId::ClaimedPastEntropyIntegral, d.label(), past, INTEGRAL_TOL).with_note(note),
    ]
}

/// The corrected derivative and integral identities:
///
/// - `dH^w/dt = λ(t) [t log λ(t) + H^w(t) - δ(t)]`
/// - `dH̄^w/dt = τ(t) [μ(t) - H̄^w(t) - t log τ(t)]`
/// - `H^w(t) = t H(t) + ∫_t^ν (F̄(y)/F̄(t)) [H(y) - log(F̄(y)/F̄(t))] dy`
pub fn check_corrected_derivatives<L: Lifetime + ?Sized>(d: &L, grid: &[f64]) -> Vec<IdentityReport> {
    let residual: Vec<ResidualPoint> = grid
        .iter()
        .map(|&t| {
            let lhs = or_nan(measure_derivative(d, MeasureKind::WeightedResidualEntropy, t));
            let rhs = or_nan((|| {
                let lam = hazard(d, t)?;
                let hw = weighted_residual_entropy(d, t)?.value;
                Ok(lam * (t * lam.ln() + hw - mean_residual_value(d, t)?.value))
            })());
            ResidualPoint::at(t, lhs, rhs)
        })
        .collect();
    let past: Vec<ResidualPoint> = grid
        .iter()
        .map(|&t| {
            let lhs = or_nan(measure_derivative(d, MeasureKind::WeightedPastEntropy, t));
            let rhs = or_nan((|| {
                let tau = reversed_hazard(d, t)?;
                let hw = weighted_past_entropy(d, t)?.value;
                Ok(tau * (mean_past_lifetime(d, t)?.value - hw - t * tau.ln()))
            })());
            ResidualPoint::at(t, lhs, rhs)
        })
        .collect();
    let integral: Vec<ResidualPoint> = grid
        .iter()
        .map(|&t| {
            let lhs = or_nan(weighted_residual_entropy(d, t).map(|e| e.value));
            let rhs = or_nan((|| {
                let st = d.survival(t);
                let ht = residual_entropy(d, t)?.value;
                let tail = quad(
                    d,
                    |y| {
                        let ratio = d.survival(y) / st;
                        if ratio < 1e-250 {
                            return 0.0;
                        }
                        ratio * (or_nan(residual_entropy(d, y).map(|e| e.value)) - ratio.ln())
                    },
                    t,
                    d.support().1,
                )?;
                Ok(t * ht + tail.value)
            })());
            ResidualPoint::at(t, lhs, rhs)
        })
        .collect();
    vec![
        IdentityReport::new(IdentityId::CorrectedResidualDerivative, d.label(), residual, DERIVATIVE_TOL),
        IdentityReport::new(IdentityId::CorrectedPastDerivative, d.label(), past, DERIVATIVE_TOL),
        IdentityReport::new(IdentityId::CorrectedTailEntropyIntegral, d.label(), integral, INTEGRAL_TOL),
    ]
}

/// Static affine law for `aX + b` against direct quadrature on the image
/// law, the independent-pair law against 2-D quadrature, and `H^w = E(X) H`
/// whenever an input is uniform.
pub fn check_affine_and_product<L1, L2>(dx: &L1, dy: &L2, a: f64, b: f64) -> Result<Vec<IdentityReport>>
where
    L1: Lifetime + ?Sized,
    L2: Lifetime + ?Sized,
{
    let phi = MonotoneTransform::affine(a, b)?;
    let image = ImageDistribution::new(dx, &phi)?;
    let hw = weighted_entropy(dx)?.value;
    let h = differential_entropy(dx)?.value;
    let law = a * (hw + dx.mean() * a.ln()) + b * (h + a.ln());
    let direct = weighted_entropy(&image)?.value;
    let mut out = vec![IdentityReport::new(
        IdentityId::AffineLaw,
        image.label(),
        vec![ResidualPoint { t: None, lhs: direct, rhs: law }],
        INTEGRAL_TOL,
    )];

    let joint = joint_weighted_entropy_quadrature(dx, dy)?.value;
    let pair = joint_weighted_entropy_independent(dx, dy)?.value;
    out.push(IdentityReport::new(
        IdentityId::IndependentPair,
        format!("{} x {}", dx.label(), dy.label()),
        vec![ResidualPoint { t: None, lhs: joint, rhs: pair }],
        PAIR_TOL,
    ));

    if dx.label().starts_with("uniform:") {
        out.push(check_uniform_product(dx)?);
    }
    if dy.label().starts_with("uniform:") {
        out.push(check_uniform_product(dy)?);
    }
    Ok(out)
}

/// `H^w = E(X) H` for a uniform law. The note records whether `H^w >= H`,
/// which fails once `H < 0` even with `E(X) >= 1`.
pub fn check_uniform_product<L: Lifetime + ?Sized>(d: &L) -> Result<IdentityReport> {
    let hw = weighted_entropy(d)?.value;
    let h = differential_entropy(d)?.value;
    let m = d.mean();
    let note = format!("E(X) = {m}, H = {h}, H^w >= H: {}", hw >= h);
    Ok(IdentityReport::new(
        IdentityId::UniformProduct,
        d.label(),
        vec![ResidualPoint { t: None, lhs: hw, rhs: m * h }],
        PRODUCT_TOL,
    )
    .with_note(note))
}

/// Values of `H^w(t)` and `H̄^w(t)` at the two ends of a grid, compared with
/// the static `H^w`. Conditioning is vacuous as `t -> 0+` for the residual and
/// as `t -> ν-` for the past measure; the opposite pairing does not converge
/// in general.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitAudit {
    pub dist: String,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub static_value: f64,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub t_low: f64,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub t_high: f64,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub residual_at_low: f64,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub residual_at_high: f64,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub past_at_low: f64,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub past_at_high: f64,
}

pub fn audit_limits<L: Lifetime + ?Sized>(d: &L, t_low: f64, t_high: f64) -> Result<LimitAudit> {
    Ok(LimitAudit {
        dist: d.label(),
        static_value: weighted_entropy(d)?.value,
        t_low,
        t_high,
        residual_at_low: or_nan(weighted_residual_entropy(d, t_low).map(|e| e.value)),
        residual_at_high: or_nan(weighted_residual_entropy(d, t_high).map(|e| e.value)),
        past_at_low: or_nan(weighted_past_entropy(d, t_low).map(|e| e.value)),
        past_at_high: or_nan(weighted_past_entropy(d, t_high).map(|e| e.value)),
    })
}

/// Observed signs of `dH/dt` and `dH^w/dt` side by side; reported only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityPair {
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub t: f64,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub d_residual: f64,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub d_weighted_residual: f64,
}

pub fn monotonicity_pairs<L: Lifetime + ?Sized>(d: &L, grid: &[f64]) -> Vec<MonotonicityPair> {
    grid.iter()
        .map(|&t| MonotonicityPair {
            t,
            d_residual: or_nan(measure_derivative(d, MeasureKind::ResidualEntropy, t)),
            d_weighted_residual: or_nan(measure_derivative(d, MeasureKind::WeightedResidualEntropy, t)),
        })
        .collect()
}
