//! Upper and lower bounds on the static, residual and past weighted
//! entropies, and the monotonicity classes of `H^w(t)` and `H̄^w(t)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{hazard, reversed_hazard, Lifetime};
use crate::entropies::{
    default_grid_with, mean_past_lifetime, mean_residual_value, measure_derivative, quad, weighted_entropy,
    weighted_past_entropy, weighted_residual_entropy, MeasureKind,
};
use crate::error::{Error, Result};
use crate::format::{de_f64, de_opt_f64, ser_f64, ser_opt_f64};

/// A bound holds when its smallest slack is at least `-SLACK_TOL`.
pub const SLACK_TOL: f64 = 1e-7;
/// Points used to decide whether a hazard function is monotone.
pub const MONOTONE_GRID: usize = 64;
/// Relative tolerance of the pairwise monotonicity comparison.
pub const MONOTONE_RTOL: f64 = 1e-9;
/// Interior points used by [`classify`].
pub const CLASSIFY_POINTS: usize = 128;
/// Fewest valid derivative samples [`classify`] accepts.
pub const CLASSIFY_MIN_POINTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundId {
    /// `H^w <= μ log(ν² / 2μ)` on `[0, ν]`.
    GlobalUpper,
    /// `H^w(t) >= -δ(t) log λ(t)` under a decreasing hazard.
    ResidualLower,
    /// `H̄^w(t) <= μ(t) log(t² / 2μ(t))`.
    PastUpper,
    /// `H̄^w(t) <= ∫_0^t x τ(x) dx - μ(t)[1 + log τ(t)]` under a decreasing
    /// reversed hazard.
    PastHazardUpper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundVerdict {
    Holds,
    Fails,
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundPoint {
    #[serde(serialize_with = "ser_opt_f64", deserialize_with = "de_opt_f64")]
    pub t: Option<f64>,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub lhs: f64,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub rhs: f64,
    /// `rhs - lhs` for upper bounds, `lhs - rhs` for lower bounds.
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub slack: f64,
}

/// The maximum over `μ` of `b(μ) = μ log(ν² / 2μ)` for `μ` in `(0, ν]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub mu_max: f64,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub bound_at_max: f64,
}

impl Envelope {
    pub fn for_support_end(nu: f64) -> Self {
        let two_e = 2.0 * std::f64::consts::E;
        if nu < two_e {
            let m = nu * nu / two_e;
            Self { mu_max: m, bound_at_max: m }
        } else {
            Self { mu_max: nu, bound_at_max: nu * (nu / 2.0).ln() }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound_id: BoundId,
    pub dist: String,
    pub precondition_met: bool,
    pub points: Vec<BoundPoint>,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub min_slack: f64,
    pub verdict: BoundVerdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub envelope: Option<Envelope>,
}

impl BoundReport {
    fn new(bound_id: BoundId, dist: String, precondition_met: bool, points: Vec<BoundPoint>) -> Self {
        let min_slack =
            points.iter().map(|p| p.slack).fold(f64::INFINITY, |a, b| if b.is_nan() { f64::NAN } else { a.min(b) });
        let verdict = if !precondition_met {
            BoundVerdict::NotApplicable
        } else if min_slack >= -SLACK_TOL {
            BoundVerdict::Holds
        } else {
            BoundVerdict::Fails
        };
        Self { bound_id, dist, precondition_met, points, min_slack, verdict, envelope: None }
    }

    pub fn holds(&self) -> bool {
        self.verdict == BoundVerdict::Holds
    }
}

fn upper(t: f64, lhs: f64, rhs: f64) -> BoundPoint {
    BoundPoint { t: Some(t), lhs, rhs, slack: rhs - lhs }
}

/// Geometric grid between the `1e-3` and `1 - 1e-3` quantiles.
fn monotone_grid<L: Lifetime + ?Sized>(d: &L) -> Result<Vec<f64>> {
    let (lo, hi) = d.support();
    let a = d.quantile(1e-3)?.max(lo);
    let b = d.quantile(1.0 - 1e-3)?.min(hi);
    if a > 0.0 {
        let r = (b / a).ln();
        Ok((0..MONOTONE_GRID).map(|i| a * (r * i as f64 / (MONOTONE_GRID - 1) as f64).exp()).collect())
    } else {
        Ok(crate::entropies::linspace(a, b, MONOTONE_GRID))
    }
}

/// Whether `rate` is non-increasing on the monotonicity grid, each step
/// allowed to rise by a relative `1e-9`.
fn is_non_increasing<L, F>(d: &L, rate: F) -> Result<bool>
where
    L: Lifetime + ?Sized,
    F: Fn(f64) -> Result<f64>,
{
    let values = monotone_grid(d)?.into_iter().map(rate).collect::<Result<Vec<_>>>()?;
    Ok(values.windows(2).all(|w| w[1] <= w[0] + MONOTONE_RTOL * w[0].abs().max(w[1].abs())))
}

/// `H^w <= μ log(ν²/(2μ))` with `μ = E(X)`, for laws on `[0, ν]`. The report
/// also carries the envelope maximizer.
pub fn bound_global<L: Lifetime + ?Sized>(d: &L) -> Result<BoundReport> {
    let (lo, nu) = d.support();
    if !(nu.is_finite() && lo >= 0.0) {
        return Ok(BoundReport::new(BoundId::GlobalUpper, d.label(), false, Vec::new()));
    }
    let m = d.mean();
    let lhs = weighted_entropy(d)?.value;
    let rhs = m * (nu * nu / (2.0 * m)).ln();
    let mut r = BoundReport::new(
        BoundId::GlobalUpper,
        d.label(),
        true,
        vec![BoundPoint { t: None, lhs, rhs, slack: rhs - lhs }],
    );
    r.envelope = Some(Envelope::for_support_end(nu));
    Ok(r)
}

/// `H^w(t) >= -δ(t) log λ(t)` when the hazard rate is decreasing.
pub fn bound_residual_lower<L: Lifetime + ?Sized>(d: &L, grid: &[f64]) -> Result<BoundReport> {
    if !is_non_increasing(d, |x| hazard(d, x))? {
        return Ok(BoundReport::new(BoundId::ResidualLower, d.label(), false, Vec::new()));
    }
    let mut points = Vec::with_capacity(grid.len());
    for &t in grid {
        let lhs = weighted_residual_entropy(d, t)?.value;
        let rhs = -mean_residual_value(d, t)?.value * hazard(d, t)?.ln();
        points.push(BoundPoint { t: Some(t), lhs, rhs, slack: lhs - rhs });
    }
    Ok(BoundReport::new(BoundId::ResidualLower, d.label(), true, points))
}

/// The two past-entropy upper bounds: `μ(t) log(t²/(2μ(t)))` for laws on
/// `[0, ∞)`, and `∫_0^t x τ - μ(t)[1 + log τ(t)]` when the reversed hazard
/// is decreasing.
pub fn bound_past_upper<L: Lifetime + ?Sized>(d: &L, grid: &[f64]) -> Result<(BoundReport, BoundReport)> {
    let lo = d.support().0;
    let nonnegative = lo >= 0.0;
    let mut plain = Vec::new();
    if nonnegative {
        for &t in grid {
            let lhs = weighted_past_entropy(d, t)?.value;
            let mu = mean_past_lifetime(d, t)?.value;
            plain.push(upper(t, lhs, mu * (t * t / (2.0 * mu)).ln()));
        }
    }
    let first = BoundReport::new(BoundId::PastUpper, d.label(), nonnegative, plain);

    let decreasing = nonnegative && is_non_increasing(d, |x| reversed_hazard(d, x))?;
    let mut hazard_points = Vec::new();
    if decreasing {
        for &t in grid {
            let lhs = weighted_past_entropy(d, t)?.value;
            let mu = mean_past_lifetime(d, t)?.value;
            let tau = reversed_hazard(d, t)?;
            let x_tau = quad(
                d,
                |x| {
                    let c = d.cdf(x);
                    if c > 0.0 {
                        x * d.density(x) / c
                    } else {
                        0.0
                    }
                },
                lo,
                t,
            )?
            .value;
            hazard_points.push(upper(t, lhs, x_tau - mu * (1.0 + tau.ln())));
        }
    }
    let second = BoundReport::new(BoundId::PastHazardUpper, d.label(), decreasing, hazard_points);
    Ok((first, second))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassKind {
    /// Monotonicity of the weighted residual entropy.
    #[serde(rename = "WURL")]
    Wurl,
    /// Monotonicity of the weighted past entropy.
    #[serde(rename = "WUPL")]
    Wupl,
}

impl std::str::FromStr for ClassKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "wurl" => Ok(Self::Wurl),
            "wupl" => Ok(Self::Wupl),
            other => Err(Error::Invalid(format!("unknown class `{other}`, expected wurl or wupl"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassVerdict {
    Decreasing,
    Increasing,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativeSample {
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub t: f64,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub derivative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    /// `Decreasing` when both senses are compatible (a flat curve).
    pub verdict: ClassVerdict,
    pub class_kind: ClassKind,
    pub dist: String,
    pub decreasing: bool,
    pub increasing: bool,
    pub derivative_samples: Vec<DerivativeSample>,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub zero_tolerance: f64,
}

/// Classification grid: 128 points on the central quantile range with 1% of
/// its span trimmed at each end.
pub fn classification_grid<L: Lifetime + ?Sized>(d: &L) -> Result<Vec<f64>> {
    let full = default_grid_with(d, 2)?;
    let (a, b) = (full[0], full[1]);
    let margin = 0.01 * (b - a);
    Ok(crate::entropies::linspace(a + margin, b - margin, CLASSIFY_POINTS))
}

/// Sign scan of `dH^w/dt` (WURL) or `dH̄^w/dt` (WUPL) on
/// [`classification_grid`]. Derivatives within
/// `1e-7 (1 + max |curve value|)` of zero count as both signs.
pub fn classify<L: Lifetime + ?Sized>(d: &L, kind: ClassKind) -> Result<ClassificationReport> {
    let measure = match kind {
        ClassKind::Wurl => MeasureKind::WeightedResidualEntropy,
        ClassKind::Wupl => MeasureKind::WeightedPastEntropy,
    };
    let grid = classification_grid(d)?;
    let evaluated: Vec<Option<(f64, f64, f64)>> = grid
        .par_iter()
        .map(|&t| {
            let v = crate::entropies::evaluate(d, measure, Some(t)).ok()?;
            let dv = measure_derivative(d, measure, t).ok()?;
            (v.value.is_finite() && dv.is_finite()).then_some((t, v.value, dv))
        })
        .collect();
    let valid: Vec<(f64, f64, f64)> = evaluated.into_iter().flatten().collect();
    if valid.len() < CLASSIFY_MIN_POINTS {
        return Err(Error::TooFewPoints { valid: valid.len(), needed: CLASSIFY_MIN_POINTS });
    }
    let max_value = valid.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
    let zero_tolerance = 1e-7 * (1.0 + max_value);
    let decreasing = valid.iter().all(|p| p.2 <= zero_tolerance);
    let increasing = valid.iter().all(|p| p.2 >= -zero_tolerance);
    let verdict = if decreasing {
        ClassVerdict::Decreasing
    } else if increasing {
        ClassVerdict::Increasing
    } else {
        ClassVerdict::Neither
    };
    Ok(ClassificationReport {
        class_kind: kind,
        dist: d.label(),
        verdict,
        decreasing,
        increasing,
        derivative_samples: valid.iter().map(|&(t, _, dv)| DerivativeSample { t, derivative: dv }).collect(),
        zero_tolerance,
    })
}
