//! Recovering the hazard rate, and from it the survival function, from the
//! weighted residual entropy curve.
//!
//! Differentiating `H^w(t)` gives `H^w'(t) = λ [t log λ + H^w(t) - δ(t)]`, so
//! at each `t` the hazard solves `x (t log x + c) = H^w'(t)` with
//! `c = H^w(t) - δ(t)`. [`g_printed`] keeps the auxiliary function in the form
//! it is usually quoted, for comparison; its root is not the hazard.

use serde::{Deserialize, Serialize};

use crate::distributions::{hazard, Lifetime};
use crate::entropies::{
    linspace, mean_residual_value_forms, measure_derivative, weighted_residual_entropy, MeasureKind,
};
use crate::error::{Error, Result};
use crate::format::{de_f64, de_vec_f64, ser_f64, ser_vec_f64};
use crate::numerics::find_root;

/// Maximum number of outward bracket expansions.
pub const MAX_EXPANSIONS: u32 = 40;
/// Points placed on `[lo, t_0)` ahead of a reconstruction grid.
pub const LEAD_IN_POINTS: usize = 16;
/// Largest share of points whose root choice may stay ambiguous.
pub const MAX_AMBIGUOUS_SHARE: f64 = 0.1;

/// Measured quantities at one `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionInput {
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub t: f64,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub hw_value: f64,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub hw_derivative: f64,
    /// `δ(t) = E(X | X > t)`.
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub delta_value: f64,
    /// `∫_t F̄(y) dy / F̄(t)`, equal to `δ(t) - t`.
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub tail_integral: f64,
    /// `dH/dt`, used only by [`g_printed`].
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub h_derivative: f64,
}

impl ReconstructionInput {
    pub fn validate(&self) -> Result<()> {
        let scale = 1.0 + self.delta_value.abs();
        if !(self.delta_value >= self.t - 1e-12 * scale) {
            return Err(Error::Reconstruction {
                t: self.t, reason: format!("δ(t) = {} is below t", self.delta_value)
            });
        }
        if !((self.tail_integral - (self.delta_value - self.t)).abs() <= 1e-9 * scale) {
            return Err(Error::Reconstruction {
                t: self.t,
                reason: format!(
                    "tail integral {} disagrees with δ(t) - t = {}",
                    self.tail_integral,
                    self.delta_value - self.t
                ),
            });
        }
        Ok(())
    }

    /// Inputs measured from a distribution by quadrature and differencing.
    pub fn measure<L: Lifetime + ?Sized>(d: &L, t: f64) -> Result<Self> {
        let hw = weighted_residual_entropy(d, t)?.value;
        let (_, delta) = mean_residual_value_forms(d, t)?;
        Ok(Self {
            t,
            hw_value: hw,
            hw_derivative: measure_derivative(d, MeasureKind::WeightedResidualEntropy, t)?,
            delta_value: delta.value,
            tail_integral: delta.value - t,
            h_derivative: measure_derivative(d, MeasureKind::ResidualEntropy, t)?,
        })
    }

    /// Exact inputs for an exponential law with rate `rate`.
    pub fn exponential(rate: f64, t: f64) -> Self {
        Self {
            t,
            hw_value: crate::entropies::closed_form::exponential_weighted_residual(rate, t),
            hw_derivative: 1.0 - rate.ln(),
            delta_value: t + 1.0 / rate,
            tail_integral: 1.0 / rate,
            h_derivative: 0.0,
        }
    }
}

/// `g(x) = x [t (1 - log x) - H^w(t) + ∫_t F̄/F̄(t)] + t dH/dt`, as usually
/// printed.
pub fn g_printed(x: f64, input: &ReconstructionInput) -> f64 {
    x * (input.t * (1.0 - x.ln()) - input.hw_value + input.tail_integral) + input.t * input.h_derivative
}

/// Stationary point of [`g_printed`]: `exp{-(H^w(t) - ∫_t F̄/F̄(t)) / t}`.
pub fn g_printed_stationary_point(input: &ReconstructionInput) -> f64 {
    (-(input.hw_value - input.tail_integral) / input.t).exp()
}

/// [`g_printed`] at the true hazard, next to its stationary point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GPrintedAudit {
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub t: f64,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub lambda_true: f64,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub residual: f64,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub stationary_point: f64,
}

pub fn audit_g_printed<L: Lifetime + ?Sized>(d: &L, input: &ReconstructionInput) -> Result<GPrintedAudit> {
    let lambda_true = hazard(d, input.t)?;
    Ok(GPrintedAudit {
        t: input.t,
        lambda_true,
        residual: g_printed(lambda_true, input),
        stationary_point: g_printed_stationary_point(input),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Multiplicity {
    Unique,
    /// Two positive roots; the caller picks one.
    Two,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HazardSolution {
    /// Increasing. With [`Multiplicity::Two`] the upper root is omitted when
    /// it exceeds the `f64` range.
    pub roots: Vec<f64>,
    pub multiplicity: Multiplicity,
}

/// Solve `x (t log x + c) = H^w'(t)` for `x > 0`, `c = H^w(t) - δ(t)`.
///
/// For `t > 0` the left side has a single minimum `-t x₀` at
/// `x₀ = exp{-(t + c)/t}`: a positive target has one root above `x₀`, a
/// target in `(-t x₀, 0)` one root on each side. At `t = 0` the equation is
/// linear.
pub fn reconstruct_hazard(input: &ReconstructionInput) -> Result<HazardSolution> {
    input.validate()?;
    let t = input.t;
    let c = input.hw_value - input.delta_value;
    let target = input.hw_derivative;
    let fail = |reason: String| Error::Reconstruction { t, reason };

    if t == 0.0 {
        let x = target / c;
        if !(x > 0.0 && x.is_finite()) {
            return Err(fail(format!("linear equation {c} x = {target} has no positive root")));
        }
        return Ok(HazardSolution { roots: vec![x], multiplicity: Multiplicity::Unique });
    }
    if !(t > 0.0) {
        return Err(fail("negative time".into()));
    }

    // In u = log x: e^u (t u + c) = target; minimum at u0.
    let u0 = -(t + c) / t;
    let g = |u: f64| u.exp() * (t * u + c) - target;
    let min_value = -t * u0.exp();
    let zero_band = 1e-12 * (1.0 + c.abs() + t);
    if target.abs() <= zero_band {
        return Ok(HazardSolution { roots: vec![(-c / t).exp()], multiplicity: Multiplicity::Unique });
    }
    if target < min_value {
        return Err(fail(format!("target {target} is below the minimum {min_value} at x = {}", u0.exp())));
    }

    // The bracket [x₀/8, 8x₀] widens by doubling its width in log x.
    let bracket = |upward: bool| -> Result<f64> {
        let mut width = 8f64.ln();
        for _ in 0..=MAX_EXPANSIONS {
            let far = if upward { u0 + width } else { u0 - width };
            let near = u0.min(700.0);
            if g(far).signum() != g(near).signum() || g(far) == 0.0 {
                let (a, b) = if upward { (near, far) } else { (far, near) };
                return find_root(g, a, b);
            }
            width *= 2.0;
        }
        Err(fail(format!("no root within {MAX_EXPANSIONS} expansions; minimum {min_value} at x = {}", u0.exp())))
    };

    if target > 0.0 {
        let u = bracket(true)?;
        return Ok(HazardSolution { roots: vec![u.exp()], multiplicity: Multiplicity::Unique });
    }
    let mut roots = vec![bracket(false)?.exp()];
    if u0 < 700.0 {
        roots.push(bracket(true)?.exp());
    }
    Ok(HazardSolution { roots, multiplicity: Multiplicity::Two })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointFlag {
    Unique,
    /// Two roots; the one nearest the previous estimate was kept.
    Selected,
    /// Two roots with no clear nearest candidate.
    Ambiguous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionPoint {
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub t: f64,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub lambda_hat: f64,
    #[serde(serialize_with = "ser_vec_f64", deserialize_with = "de_vec_f64")]
    pub candidates: Vec<f64>,
    pub flag: PointFlag,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub survival_hat: f64,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub survival_true: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivalReconstruction {
    pub dist: String,
    pub points: Vec<ReconstructionPoint>,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub max_survival_error: f64,
}

impl SurvivalReconstruction {
    pub fn to_csv(&self) -> String {
        use crate::format::fmt17;
        let mut out = String::from("t,lambda_hat,survival_hat,survival_true,flag\n");
        for p in &self.points {
            let flag = serde_json::to_value(p.flag).expect("flag serializes");
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt17(p.t),
                fmt17(p.lambda_hat),
                fmt17(p.survival_hat),
                fmt17(p.survival_true),
                flag.as_str().unwrap_or_default()
            ));
        }
        out
    }
}

/// Reconstruct `λ̂` on `grid` from inputs measured on `d`, then
/// `F̄̂(t) = exp{-∫ λ̂}` by the trapezoid rule.
///
/// Two phases: the pointwise inputs and roots are computed independently
/// (in parallel), then a sequential sweep picks among double roots the one
/// nearest the previous estimate. The sweep starts from the lower support end,
/// where the equation is linear, through [`LEAD_IN_POINTS`] points before the
/// first grid point; those points are used for the integral but not reported.
pub fn reconstruct_survival_curve<L: Lifetime + ?Sized>(d: &L, grid: &[f64]) -> Result<SurvivalReconstruction> {
    use rayon::prelude::*;

    let (lo, hi) = d.support();
    if grid.is_empty() || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Invalid("reconstruction grid must be non-empty and strictly increasing".into()));
    }
    if !(grid[0] > lo && grid[grid.len() - 1] < hi) {
        return Err(Error::OutsideSupport { t: grid[0], lo, hi });
    }
    if lo != 0.0 {
        return Err(Error::Invalid("reconstruction starts from a support beginning at 0".into()));
    }
    let lead = linspace(lo, grid[0], LEAD_IN_POINTS + 1);
    let mut times: Vec<f64> = lead[..LEAD_IN_POINTS].to_vec();
    times.extend_from_slice(grid);

    let solutions: Vec<HazardSolution> = times
        .par_iter()
        .map(|&t| ReconstructionInput::measure(d, t).and_then(|i| reconstruct_hazard(&i)))
        .collect::<Result<_>>()?;

    let mut lambdas = Vec::with_capacity(times.len());
    let mut flags = Vec::with_capacity(times.len());
    let mut previous: Option<f64> = None;
    for sol in &solutions {
        let (pick, flag) = match (sol.multiplicity, previous) {
            (Multiplicity::Unique, _) => (sol.roots[0], PointFlag::Unique),
            (Multiplicity::Two, Some(p)) => {
                let mut by_distance: Vec<f64> = sol.roots.clone();
                by_distance.sort_by(|a, b| (a - p).abs().total_cmp(&(b - p).abs()));
                let clear = by_distance.len() == 1 || (by_distance[0] - p).abs() < 0.5 * (by_distance[1] - p).abs();
                (by_distance[0], if clear { PointFlag::Selected } else { PointFlag::Ambiguous })
            }
            (Multiplicity::Two, None) => (sol.roots[0], PointFlag::Ambiguous),
        };
        previous = Some(pick);
        lambdas.push(pick);
        flags.push(flag);
    }

    let ambiguous = flags.iter().filter(|f| **f == PointFlag::Ambiguous).count();
    if ambiguous as f64 > MAX_AMBIGUOUS_SHARE * times.len() as f64 {
        return Err(Error::Reconstruction {
            t: grid[0],
            reason: format!("{ambiguous} of {} points have an unresolved double root", times.len()),
        });
    }

    let mut cumulative = 0.0;
    let mut points = Vec::with_capacity(grid.len());
    let mut max_err: f64 = 0.0;
    for (k, &t) in times.iter().enumerate() {
        if k > 0 {
            cumulative += 0.5 * (lambdas[k] + lambdas[k - 1]) * (t - times[k - 1]);
        }
        if k >= LEAD_IN_POINTS {
            let survival_hat = (-cumulative).exp();
            let survival_true = d.survival(t);
            max_err = max_err.max((survival_hat - survival_true).abs());
            points.push(ReconstructionPoint {
                t,
                lambda_hat: lambdas[k],
                candidates: solutions[k].roots.clone(),
                flag: flags[k],
                survival_hat,
                survival_true,
            });
        }
    }
    Ok(SurvivalReconstruction { dist: d.label(), points, max_survival_error: max_err })
}
