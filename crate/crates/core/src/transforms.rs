//! Weighted residual and past entropies of `Y = φ(X)` for a strictly
//! monotone, differentiable `φ`.
//!
//! Three routes to the same number are provided: the `φ`-weighted measures of
//! `X` plus a `log|φ'|` correction, the scale/shift rules for affine maps, and
//! direct quadrature on the law of `φ(X)` through [`ImageDistribution`].

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::distributions::{Lifetime, NORMALIZER_FLOOR};
use crate::entropies::{
    mean_past_lifetime, mean_residual_value, past_entropy, quad, residual_entropy, weighted_past_entropy,
    weighted_residual_entropy, Estimate,
};
use crate::error::{Error, Result, Tail};
use crate::numerics::p_log_p_from_ln;

type Map = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Number of `φ'` samples used to screen a transform for monotonicity.
pub const SCREEN_POINTS: usize = 257;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// `φ` together with its derivative and inverse.
#[derive(Clone)]
pub struct MonotoneTransform {
    forward: Map,
    derivative: Map,
    inverse: Map,
    label: String,
}

impl fmt::Debug for MonotoneTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MonotoneTransform").field("label", &self.label).finish_non_exhaustive()
    }
}

impl MonotoneTransform {
    pub fn custom<F, D, I>(label: impl Into<String>, forward: F, derivative: D, inverse: I) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
        I: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            forward: Arc::new(forward),
            derivative: Arc::new(derivative),
            inverse: Arc::new(inverse),
            label: label.into(),
        }
    }

    pub fn identity() -> Self {
        Self::custom("x", |x| x, |_| 1.0, |y| y)
    }

    /// `x -> a x + b`, `a != 0`.
    pub fn affine(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a != 0.0) {
            return Err(Error::InvalidParameters(format!("affine map needs finite a != 0, got a = {a}, b = {b}")));
        }
        Ok(Self::custom(format!("{a}*x+{b}"), move |x| a * x + b, move |_| a, move |y| (y - b) / a))
    }

    /// `x -> c - x`.
    pub fn reflect(c: f64) -> Self {
        Self::custom(format!("{c}-x"), move |x| c - x, |_| -1.0, move |y| c - y)
    }

    pub fn apply(&self, x: f64) -> f64 {
        (self.forward)(x)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        (self.derivative)(x)
    }

    pub fn inverse(&self, y: f64) -> f64 {
        (self.inverse)(y)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Sample `φ'` at [`SCREEN_POINTS`] interior points of `domain` and check
    /// that its sign never changes and that `φ⁻¹(φ(x)) = x` to `1e-9`.
    pub fn direction_on(&self, domain: (f64, f64)) -> Result<Direction> {
        let (lo, hi) = domain;
        let points: Vec<f64> = (1..=SCREEN_POINTS)
            .map(|i| {
                let u = i as f64 / (SCREEN_POINTS + 1) as f64;
                if hi.is_finite() {
                    lo + (hi - lo) * u
                } else {
                    lo + u / (1.0 - u)
                }
            })
            .collect();
        let mut sign = 0.0f64;
        for &x in &points {
            let dphi = self.derivative(x);
            if !(dphi.is_finite() && dphi != 0.0) || (sign != 0.0 && dphi.signum() != sign) {
                return Err(Error::NotMonotone { x });
            }
            sign = dphi.signum();
        }
        for &x in &points {
            let back = self.inverse(self.apply(x));
            if !((back - x).abs() <= 1e-9 * x.abs().max(1.0)) {
                return Err(Error::Invalid(format!("inverse of `{}` is inconsistent at x = {x}", self.label)));
            }
        }
        Ok(if sign > 0.0 { Direction::Increasing } else { Direction::Decreasing })
    }
}

/// The law of `φ(X)`, with density `f_X(φ⁻¹(y)) |dφ⁻¹/dy|`.
pub struct ImageDistribution<'a, L: Lifetime + ?Sized> {
    base: &'a L,
    phi: &'a MonotoneTransform,
    direction: Direction,
    support: (f64, f64),
    mean: f64,
}

impl<'a, L: Lifetime + ?Sized> ImageDistribution<'a, L> {
    pub fn new(base: &'a L, phi: &'a MonotoneTransform) -> Result<Self> {
        let (lo, hi) = base.support();
        let direction = phi.direction_on((lo, hi))?;
        let (a, b) = (phi.apply(lo), phi.apply(hi));
        let support = match direction {
            Direction::Increasing => (a, b),
            Direction::Decreasing => (b, a),
        };
        if !support.0.is_finite() {
            return Err(Error::Invalid(format!("image of the support under `{}` is unbounded below", phi.label())));
        }
        let m = quad(base, |x| phi.apply(x) * base.density(x), lo, hi)?;
        Ok(Self { base, phi, direction, support, mean: m.value })
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }
}

impl<L: Lifetime + ?Sized> Lifetime for ImageDistribution<'_, L> {
    fn support(&self) -> (f64, f64) {
        self.support
    }

    fn density(&self, y: f64) -> f64 {
        self.ln_density(y).exp()
    }

    fn ln_density(&self, y: f64) -> f64 {
        if !(y > self.support.0 && y < self.support.1) {
            return f64::NEG_INFINITY;
        }
        let x = self.phi.inverse(y);
        self.base.ln_density(x) - self.phi.derivative(x).abs().ln()
    }

    fn cdf(&self, y: f64) -> f64 {
        if y <= self.support.0 {
            return 0.0;
        }
        if y >= self.support.1 {
            return 1.0;
        }
        let x = self.phi.inverse(y);
        match self.direction {
            Direction::Increasing => self.base.cdf(x),
            Direction::Decreasing => self.base.survival(x),
        }
    }

    fn survival(&self, y: f64) -> f64 {
        if y <= self.support.0 {
            return 1.0;
        }
        if y >= self.support.1 {
            return 0.0;
        }
        let x = self.phi.inverse(y);
        match self.direction {
            Direction::Increasing => self.base.survival(x),
            Direction::Decreasing => self.base.cdf(x),
        }
    }

    fn mean(&self) -> f64 {
        self.mean
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.base.breakpoints().into_iter().map(|x| self.phi.apply(x)).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    fn label(&self) -> String {
        format!("{} of {}", self.phi.label(), self.base.label())
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        match self.direction {
            Direction::Increasing => Ok(self.phi.apply(self.base.quantile(p)?)),
            Direction::Decreasing => Ok(self.phi.apply(self.base.quantile(1.0 - p)?)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhiKind {
    ResidualPhi,
    PastPhi,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiEntropy {
    pub kind: PhiKind,
    pub value: f64,
}

fn normalizer<L: Lifetime + ?Sized>(d: &L, side: PhiKind, s: f64) -> Result<f64> {
    let (n, tail) = match side {
        PhiKind::ResidualPhi => (d.survival(s), Tail::Right),
        PhiKind::PastPhi => (d.cdf(s), Tail::Left),
    };
    if !(n > NORMALIZER_FLOOR) {
        return Err(Error::DegenerateTail { tail, t: s, normalizer: n });
    }
    Ok(n)
}

fn side_range<L: Lifetime + ?Sized>(d: &L, side: PhiKind, s: f64) -> (f64, f64) {
    let (lo, hi) = d.support();
    match side {
        PhiKind::ResidualPhi => (s, hi),
        PhiKind::PastPhi => (lo, s),
    }
}

/// `φ`-weighted residual (`-∫_t^ν φ (f/F̄) log(f/F̄)`) or past
/// (`-∫_0^t φ (f/F) log(f/F)`) entropy of `X`.
pub fn phi_entropy<L: Lifetime + ?Sized>(d: &L, phi: &MonotoneTransform, kind: PhiKind, t: f64) -> Result<PhiEntropy> {
    let (lo, hi) = d.support();
    if !(t >= lo && t <= hi) {
        return Err(Error::OutsideSupport { t, lo, hi });
    }
    let ln_n = normalizer(d, kind, t)?.ln();
    let (a, b) = side_range(d, kind, t);
    let r = quad(
        d,
        |x| {
            let lf = d.ln_density(x);
            if lf == f64::NEG_INFINITY {
                0.0
            } else {
                phi.apply(x) * p_log_p_from_ln(lf - ln_n)
            }
        },
        a,
        b,
    )?;
    Ok(PhiEntropy { kind, value: -r.value })
}

// E{φ(X) log|φ'(X)| | X on `side` of s}
fn log_jacobian_term<L: Lifetime + ?Sized>(d: &L, phi: &MonotoneTransform, side: PhiKind, s: f64) -> Result<Estimate> {
    let n = normalizer(d, side, s)?;
    let (a, b) = side_range(d, side, s);
    quad(d, |x| phi.apply(x) * d.density(x) / n * phi.derivative(x).abs().ln(), a, b)
}

fn transformed<L: Lifetime + ?Sized>(d: &L, phi: &MonotoneTransform, t: f64, residual: bool) -> Result<f64> {
    let image = ImageDistribution::new(d, phi)?;
    let (lo, hi) = image.support();
    if !(t >= lo && t <= hi) {
        return Err(Error::OutsideSupport { t, lo, hi });
    }
    let s = phi.inverse(t);
    // Conditioning on Y > t is X > s for increasing φ and X <= s for decreasing.
    let side = match (image.direction(), residual) {
        (Direction::Increasing, true) | (Direction::Decreasing, false) => PhiKind::ResidualPhi,
        _ => PhiKind::PastPhi,
    };
    let h = phi_entropy(d, phi, side, s)?;
    Ok(h.value + log_jacobian_term(d, phi, side, s)?.value)
}

/// Weighted residual entropy of `φ(X)` at `t` through the `φ`-weighted
/// measures of `X`.
pub fn transformed_weighted_residual<L: Lifetime + ?Sized>(d: &L, phi: &MonotoneTransform, t: f64) -> Result<f64> {
    transformed(d, phi, t, true)
}

/// Weighted past entropy of `φ(X)` at `t`.
pub fn transformed_weighted_past<L: Lifetime + ?Sized>(d: &L, phi: &MonotoneTransform, t: f64) -> Result<f64> {
    transformed(d, phi, t, false)
}

fn check_affine(a: f64, b: f64) -> Result<()> {
    if !(a > 0.0 && a.is_finite() && b >= 0.0 && b.is_finite()) {
        return Err(Error::InvalidParameters(format!("affine rules need a > 0 and b >= 0, got a = {a}, b = {b}")));
    }
    Ok(())
}

/// `H^w` of `aX + b` at `t`: scale by `a`, then shift by `b`.
///
/// `H^w_{aX}(u) = a H^w(u/a) + δ(u/a) a log a`, `H_{aX}(u) = H(u/a) + log a`,
/// `H^w_{Z+b}(t) = H^w_Z(t-b) + b H_Z(t-b)`.
pub fn affine_residual<L: Lifetime + ?Sized>(d: &L, a: f64, b: f64, t: f64) -> Result<f64> {
    check_affine(a, b)?;
    let s = (t - b) / a;
    let hw = weighted_residual_entropy(d, s)?.value;
    let delta = mean_residual_value(d, s)?.value;
    let mut v = a * hw + delta * a * a.ln();
    if b != 0.0 {
        v += b * (residual_entropy(d, s)?.value + a.ln());
    }
    Ok(v)
}

/// `H̄^w` of `aX + b` at `t`, with `μ` and `H̄` in place of `δ` and `H`.
pub fn affine_past<L: Lifetime + ?Sized>(d: &L, a: f64, b: f64, t: f64) -> Result<f64> {
    check_affine(a, b)?;
    let s = (t - b) / a;
    let hw = weighted_past_entropy(d, s)?.value;
    let mu = mean_past_lifetime(d, s)?.value;
    let mut v = a * hw + mu * a * a.ln();
    if b != 0.0 {
        v += b * (past_entropy(d, s)?.value + a.ln());
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::Distribution;
    use crate::entropies::{weighted_entropy, weighted_past_entropy, weighted_residual_entropy};
    use approx::assert_abs_diff_eq;

    fn expo() -> Distribution {
        Distribution::exponential(1.0).unwrap()
    }
    fn unit() -> Distribution {
        Distribution::uniform(0.0, 1.0).unwrap()
    }

    #[test]
    fn phi_entropy_examples() {
        let id = MonotoneTransform::identity();
        assert_abs_diff_eq!(phi_entropy(&expo(), &id, PhiKind::ResidualPhi, 1.0).unwrap().value, 3.0, epsilon = 1e-10);
        let twice = MonotoneTransform::affine(2.0, 0.0).unwrap();
        assert_abs_diff_eq!(
            phi_entropy(&unit(), &twice, PhiKind::ResidualPhi, 0.0).unwrap().value,
            0.0,
            epsilon = 1e-14
        );
        let sq = MonotoneTransform::custom("x^2", |x| x * x, |x| 2.0 * x, f64::sqrt);
        assert_abs_diff_eq!(phi_entropy(&expo(), &sq, PhiKind::ResidualPhi, 0.0).unwrap().value, 6.0, epsilon = 1e-9);
    }

    #[test]
    fn identity_reduces_to_plain_measures() {
        let id = MonotoneTransform::identity();
        let g = Distribution::gamma(2.0, 1.0).unwrap();
        for t in [0.5, 1.0, 3.0] {
            let r = weighted_residual_entropy(&g, t).unwrap().value;
            let p = weighted_past_entropy(&g, t).unwrap().value;
            assert_abs_diff_eq!(phi_entropy(&g, &id, PhiKind::ResidualPhi, t).unwrap().value, r, epsilon = 1e-12);
            assert_abs_diff_eq!(phi_entropy(&g, &id, PhiKind::PastPhi, t).unwrap().value, p, epsilon = 1e-12);
            assert_abs_diff_eq!(transformed_weighted_residual(&g, &id, t).unwrap(), r, epsilon = 1e-12);
            assert_abs_diff_eq!(transformed_weighted_past(&g, &id, t).unwrap(), p, epsilon = 1e-12);
        }
    }

    #[test]
    fn three_paths_agree_for_affine_map() {
        let e = expo();
        let phi = MonotoneTransform::affine(2.0, 1.0).unwrap();
        let image = ImageDistribution::new(&e, &phi).unwrap();
        for t in [1.0, 1.5, 3.0, 5.0, 8.0] {
            let direct = weighted_residual_entropy(&image, t).unwrap().value;
            let branch = transformed_weighted_residual(&e, &phi, t).unwrap();
            let rule = affine_residual(&e, 2.0, 1.0, t).unwrap();
            assert_abs_diff_eq!(branch, direct, epsilon = 1e-8);
            assert_abs_diff_eq!(rule, direct, epsilon = 1e-8);
            if t == 1.0 {
                continue;
            }
            let direct = weighted_past_entropy(&image, t).unwrap().value;
            assert_abs_diff_eq!(transformed_weighted_past(&e, &phi, t).unwrap(), direct, epsilon = 1e-8);
            assert_abs_diff_eq!(affine_past(&e, 2.0, 1.0, t).unwrap(), direct, epsilon = 1e-8);
        }
    }

    #[test]
    fn affine_rule_examples() {
        let e = expo();
        assert_abs_diff_eq!(affine_residual(&e, 1.0, 1.0, 2.0).unwrap(), 4.0, epsilon = 1e-9);
        assert_abs_diff_eq!(affine_residual(&e, 2.0, 0.0, 2.0).unwrap(), 6.0 + 4.0 * 2f64.ln(), epsilon = 1e-9);
        let u = unit();
        for t in [0.1, 0.5, 0.9] {
            assert_abs_diff_eq!(
                affine_residual(&u, 1.0, 0.0, t).unwrap(),
                weighted_residual_entropy(&u, t).unwrap().value,
                epsilon = 1e-15
            );
        }
        assert!(affine_residual(&e, -1.0, 0.0, 1.0).is_err());
        assert!(affine_residual(&e, 1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn decreasing_map_matches_direct_quadrature() {
        let u = unit();
        let phi = MonotoneTransform::custom(
            "1/(x+1)",
            |x| 1.0 / (x + 1.0),
            |x| -1.0 / ((x + 1.0) * (x + 1.0)),
            |y| 1.0 / y - 1.0,
        );
        let image = ImageDistribution::new(&u, &phi).unwrap();
        assert_eq!(image.direction(), Direction::Decreasing);
        for t in [0.5, 0.6, 0.75, 0.9] {
            let direct = weighted_residual_entropy(&image, t).unwrap().value;
            assert_abs_diff_eq!(transformed_weighted_residual(&u, &phi, t).unwrap(), direct, epsilon = 1e-8);
        }
        for t in [0.6, 0.75, 1.0] {
            let direct = weighted_past_entropy(&image, t).unwrap().value;
            assert_abs_diff_eq!(transformed_weighted_past(&u, &phi, t).unwrap(), direct, epsilon = 1e-8);
        }
    }

    #[test]
    fn reflection_of_uniform_is_self_similar() {
        let c = 2.0;
        let u = Distribution::uniform(0.0, c).unwrap();
        let phi = MonotoneTransform::reflect(c);
        for t in [0.2, 1.0, 1.7] {
            let v = transformed_weighted_residual(&u, &phi, t).unwrap();
            assert_abs_diff_eq!(v, weighted_residual_entropy(&u, t).unwrap().value, epsilon = 1e-10);
            let v = transformed_weighted_past(&u, &phi, t).unwrap();
            assert_abs_diff_eq!(v, weighted_past_entropy(&u, t).unwrap().value, epsilon = 1e-10);
        }
    }

    #[test]
    fn lower_extreme_approaches_static_affine_value() {
        let e = expo();
        let (a, b) = (2.0f64, 1.0);
        let hw = weighted_entropy(&e).unwrap().value;
        let static_value = a * (hw + 1.0 * a.ln()) + b * (1.0 + a.ln());
        assert_abs_diff_eq!(
            transformed_weighted_residual(&e, &MonotoneTransform::affine(a, b).unwrap(), b).unwrap(),
            static_value,
            epsilon = 1e-9
        );
    }

    #[test]
    fn screening_rejects_non_monotone_maps() {
        let bump =
            MonotoneTransform::custom("(x-0.5)^2", |x| (x - 0.5) * (x - 0.5), |x| 2.0 * (x - 0.5), |y| y.sqrt() + 0.5);
        assert!(matches!(bump.direction_on((0.0, 1.0)), Err(Error::NotMonotone { .. })));
        let bad_inverse = MonotoneTransform::custom("2x", |x| 2.0 * x, |_| 2.0, |y| y);
        assert!(bad_inverse.direction_on((0.0, 1.0)).is_err());
        assert!(MonotoneTransform::affine(0.0, 1.0).is_err());
    }

    #[test]
    fn image_distribution_is_a_law() {
        let g = Distribution::gamma(2.0, 1.0).unwrap();
        let phi = MonotoneTransform::affine(0.5, 3.0).unwrap();
        let y = ImageDistribution::new(&g, &phi).unwrap();
        let (lo, hi) = y.support();
        assert_abs_diff_eq!(quad(&y, |v| y.density(v), lo, hi).unwrap().value, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(y.mean(), 4.0, epsilon = 1e-10);
        assert_abs_diff_eq!(y.cdf(y.quantile(0.3).unwrap()), 0.3, epsilon = 1e-10);
    }
}
