use crate::error::{Error, Result};

const MAX_ITER: usize = 300;

/// Root of `g` in `[lo, hi]` by bisection with secant (regula falsi) steps.
///
/// Requires `g(lo) * g(hi) <= 0`. Stops once the bracket is narrower than
/// `1e-12 * max(1, |x|)` or an exact zero is hit, returning the bracket end
/// with the smaller `|g|`.
pub fn find_root<G: Fn(f64) -> f64>(g: G, lo: f64, hi: f64) -> Result<f64> {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = g(a);
    let mut fb = g(b);
    if fa.is_nan() || fb.is_nan() || fa * fb > 0.0 {
        return Err(Error::NoSignChange { lo: a, hi: b, g_lo: fa, g_hi: fb });
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    let mut last_width = b - a;
    for i in 0..MAX_ITER {
        let width = b - a;
        let x_ref = if fa.abs() < fb.abs() { a } else { b };
        if width <= 1e-12 * x_ref.abs().max(1.0) {
            break;
        }
        // Alternate in bisection whenever the secant steps stall.
        let secant = b - fb * (b - a) / (fb - fa);
        let use_bisect = i % 3 == 2 && width > 0.5 * last_width;
        let x = if !use_bisect && secant > a && secant < b { secant } else { 0.5 * (a + b) };
        if i % 3 == 2 {
            last_width = width;
        }
        let fx = g(x);
        if fx.is_nan() {
            return Err(Error::NonFiniteIntegrand { x, value: fx });
        }
        if fx == 0.0 {
            return Ok(x);
        }
        if (fx < 0.0) == (fa < 0.0) {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        if a == b || (x == a && x == b) {
            break;
        }
    }
    Ok(if fa.abs() <= fb.abs() { a } else { b })
}
