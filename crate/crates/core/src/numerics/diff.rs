//! Finite-difference derivatives.

use crate::error::{Error, Result};

/// Step used by [`differentiate`]: `cbrt(eps) * max(1, |t|)`.
pub fn default_step(t: f64) -> f64 {
    f64::EPSILON.cbrt() * t.abs().max(1.0)
}

/// Central difference `(f(t+h) - f(t-h)) / 2h` on an unrestricted domain.
pub fn differentiate<F: Fn(f64) -> f64>(f: F, t: f64) -> Result<f64> {
    differentiate_within(f, t, (f64::NEG_INFINITY, f64::INFINITY))
}

/// Derivative of `f` at `t` where `f` may only be evaluated on the closed
/// interval `domain`.
///
/// Uses the central stencil when both `t +- h` fit. Otherwise falls back to the
/// second-order one-sided stencil `(-3f(t) + 4f(t+h) - f(t+2h)) / 2h` (or its
/// mirror), shrinking `h` when even `t + 2h` does not fit.
pub fn differentiate_within<F: Fn(f64) -> f64>(f: F, t: f64, domain: (f64, f64)) -> Result<f64> {
    let (lo, hi) = domain;
    if !(t >= lo && t <= hi) {
        return Err(Error::StencilDomain { t });
    }
    let h = default_step(t);
    let left = t - lo;
    let right = hi - t;
    let value = if left >= h && right >= h {
        (f(t + h) - f(t - h)) / (2.0 * h)
    } else {
        let forward = right >= left;
        let room = if forward { right } else { left };
        let step = h.min(0.5 * room);
        // Below this the stencil is all rounding noise.
        if step < 1e-3 * h || t + step == t {
            return Err(Error::StencilDomain { t });
        }
        let s = if forward { step } else { -step };
        (-3.0 * f(t) + 4.0 * f(t + s) - f(t + 2.0 * s)) / (2.0 * s)
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFiniteIntegrand { x: t, value })
    }
}
