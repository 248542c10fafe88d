//! Globally adaptive Gauss-Kronrod (10, 21) quadrature.
//!
//! The rule is open: no node sits on an interval endpoint, so integrable
//! endpoint singularities such as `x^(a-1)` with `a > 0` or `x log x` are
//! handled by bisection alone. A semi-infinite range `[a, +inf)` is mapped to
//! `[0, 1)` with `x = a + u / (1 - u)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances and refinement limits for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of bisections applied to any single subinterval.
    pub max_depth: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-8, max_depth: 60 }
    }
}

impl QuadratureConfig {
    /// Tighter tolerances used by the entropy measures, whose curves are
    /// later differenced numerically.
    pub fn fine() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-11, max_depth: 60 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.max_depth >= 1) {
            return Err(Error::Invalid(format!("invalid quadrature config {self:?}")));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub converged: bool,
    pub evaluations: usize,
}

// Hard cap on the number of live subintervals, independent of `max_depth`.
const MAX_INTERVALS: usize = 20_000;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = err.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

fn checked<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteIntegrand { x, value: v })
    }
}

// Nodes of tiny intervals can round onto an endpoint; keep the rule open.
#[inline]
fn inside(x: f64, a: f64, b: f64) -> f64 {
    if x <= a {
        a.next_up()
    } else if x >= b {
        b.next_down()
    } else {
        x
    }
}

fn kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = checked(f, center)?;
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = checked(f, inside(center - dx, a, b))?;
        let f2 = checked(f, inside(center + dx, a, b))?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let err = (res_k - res_g) * half;
    let h = half.abs();
    Ok((res_k * half, rescale_error(err, res_abs * h, res_asc * h)))
}

/// Integrate `f` over `[a, b]`; `b` may be `f64::INFINITY`.
///
/// Non-convergence is not an error: the best estimate comes back with
/// `converged == false`. A non-finite integrand value is an error naming the
/// abscissa (in the original variable).
pub fn integrate<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    cfg.validate()?;
    if !a.is_finite() || b.is_nan() || a >= b || b == f64::NEG_INFINITY {
        return Err(Error::InvalidInterval { a, b });
    }
    if b.is_infinite() {
        let g = |u: f64| {
            let w = 1.0 - u;
            let x = a + u / w;
            f(x) / (w * w)
        };
        return adapt(&g, 0.0, 1.0, cfg).map_err(|e| match e {
            Error::NonFiniteIntegrand { x: u, value } => Error::NonFiniteIntegrand { x: a + u / (1.0 - u), value },
            other => other,
        });
    }
    adapt(&f, a, b, cfg)
}

/// Integrate over consecutive pieces `[p0, p1], [p1, p2], ...`, summing values,
/// error estimates and evaluation counts. Used to avoid integrating across
/// known density discontinuities.
pub fn integrate_pieces<F>(f: F, points: &[f64], cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    let mut total = QuadratureResult { value: 0.0, error_estimate: 0.0, converged: true, evaluations: 0 };
    for w in points.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let r = integrate(&f, w[0], w[1], cfg)?;
        total.value += r.value;
        total.error_estimate += r.error_estimate;
        total.converged &= r.converged;
        total.evaluations += r.evaluations;
    }
    Ok(total)
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
    let (v0, e0) = kronrod21(f, a, b)?;
    let mut evaluations = 21;
    let mut heap = BinaryHeap::new();
    let mut frozen_value = 0.0;
    let mut frozen_error = 0.0;
    let mut total_value = v0;
    let mut total_error = e0;
    heap.push(Segment { a, b, value: v0, error: e0, depth: 0 });

    loop {
        if total_error <= cfg.target(total_value) {
            return Ok(QuadratureResult {
                value: total_value,
                error_estimate: total_error,
                converged: true,
                evaluations,
            });
        }
        let Some(seg) = heap.pop() else { break };
        let mid = 0.5 * (seg.a + seg.b);
        let splittable = seg.depth < cfg.max_depth && mid > seg.a && mid < seg.b;
        if !splittable || heap.len() + 2 > MAX_INTERVALS {
            frozen_value += seg.value;
            frozen_error += seg.error;
            continue;
        }
        let (vl, el) = kronrod21(f, seg.a, mid)?;
        let (vr, er) = kronrod21(f, mid, seg.b)?;
        evaluations += 42;
        total_value += vl + vr - seg.value;
        total_error += el + er - seg.error;
        heap.push(Segment { a: seg.a, b: mid, value: vl, error: el, depth: seg.depth + 1 });
        heap.push(Segment { a: mid, b: seg.b, value: vr, error: er, depth: seg.depth + 1 });
    }

    // Resum to shed the drift accumulated by the running totals.
    let value = frozen_value + heap.iter().map(|s| s.value).sum::<f64>();
    let error = frozen_error + heap.iter().map(|s| s.error).sum::<f64>();
    let converged = error <= cfg.target(value);
    Ok(QuadratureResult { value, error_estimate: error, converged, evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn polynomial() {
        let r = integrate(|x| x, 0.0, 1.0, &cfg()).unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.value, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn unit_exponential_on_half_line() {
        let r = integrate(|x: f64| (-x).exp(), 0.0, f64::INFINITY, &cfg()).unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn log_endpoint_singularity() {
        let r = integrate(|x: f64| x.ln(), 0.0, 1.0, &cfg()).unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.value, -1.0, epsilon = 1e-9);
    }

    #[test]
    fn inverse_sqrt_singularity() {
        let r = integrate(|x: f64| 0.5 / x.sqrt(), 0.0, 1.0, &cfg()).unwrap();
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn gamma_moments() {
        for (k, fact) in [(0, 1.0), (1, 1.0), (2, 2.0)] {
            let r = integrate(|x: f64| x.powi(k) * (-x).exp(), 0.0, f64::INFINITY, &cfg()).unwrap();
            assert_abs_diff_eq!(r.value, fact, epsilon = 1e-8);
        }
    }

    #[test]
    fn nan_names_the_abscissa() {
        let err = integrate(|x: f64| if x > 0.5 { f64::NAN } else { 1.0 }, 0.0, 1.0, &cfg()).unwrap_err();
        match err {
            Error::NonFiniteIntegrand { x, .. } => assert!(x > 0.5 && x < 1.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn mapped_nan_reports_original_variable() {
        let err =
            integrate(|x: f64| if x > 3.0 { f64::NAN } else { (-x).exp() }, 0.0, f64::INFINITY, &cfg()).unwrap_err();
        match err {
            Error::NonFiniteIntegrand { x, .. } => assert!(x > 3.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_convergence_is_flagged() {
        let tight = QuadratureConfig { abs_tol: 1e-15, rel_tol: 1e-15, max_depth: 2 };
        let r = integrate(|x: f64| x.sqrt().recip(), 0.0, 1.0, &tight).unwrap();
        assert!(!r.converged);
        assert!(r.value > 1.0 && r.value < 2.1);
    }

    #[test]
    fn converged_respects_tolerance() {
        let c = cfg();
        let r = integrate(|x: f64| x.sin(), 0.0, 3.0, &c).unwrap();
        assert!(r.converged);
        assert!(r.error_estimate <= c.abs_tol.max(c.rel_tol * r.value.abs()));
    }

    #[test]
    fn rejects_bad_interval_and_config() {
        assert!(integrate(|x| x, 1.0, 0.0, &cfg()).is_err());
        let bad = QuadratureConfig { abs_tol: 0.0, ..cfg() };
        assert!(integrate(|x| x, 0.0, 1.0, &bad).is_err());
    }

    #[test]
    fn pieces_split_at_jumps() {
        let step = |x: f64| if x < 1.0 { 0.25 } else { 0.75 };
        let r = integrate_pieces(step, &[0.0, 1.0, 2.0], &cfg()).unwrap();
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-15);
    }
}
