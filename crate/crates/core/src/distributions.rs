//! Absolutely continuous lifetime laws on a support `(lo, hi)`, `hi <= +inf`.
//!
//! Every measure in the crate is written against the [`Lifetime`] trait so the
//! same code evaluates the built-in families and derived laws such as the
//! image of a distribution under a monotone map.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result, Tail};
use crate::numerics::{self, find_root, log_beta, log_gamma};

/// Smallest normalizer accepted for hazard-type ratios and conditional laws.
pub const NORMALIZER_FLOOR: f64 = 1e-300;

/// A continuous law on `(lo, hi)` with density, distribution and survival
/// functions.
pub trait Lifetime: Sync {
    /// Effective support `(lo, hi)`; `hi` may be `+inf`.
    fn support(&self) -> (f64, f64);

    fn density(&self, x: f64) -> f64;

    /// `log f(x)`; `-inf` outside the support.
    fn ln_density(&self, x: f64) -> f64 {
        self.density(x).ln()
    }

    fn cdf(&self, x: f64) -> f64;

    fn survival(&self, x: f64) -> f64 {
        1.0 - self.cdf(x)
    }

    /// `E(X)`.
    fn mean(&self) -> f64;

    /// Interior points where the density jumps or kinks. Quadrature splits
    /// there.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    /// Text form used in reports.
    fn label(&self) -> String;

    fn quantile(&self, p: f64) -> Result<f64> {
        quantile_by_root(self, p)
    }
}

/// Generic quantile: bracketed root of `cdf(x) - p` (or of the survival
/// function for upper probabilities).
pub fn quantile_by_root<L: Lifetime + ?Sized>(d: &L, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain { function: "quantile", detail: format!("p = {p} not in (0, 1)") });
    }
    let (lo, hi) = d.support();
    let upper = if hi.is_finite() {
        hi
    } else {
        let mut h = lo + d.mean().abs().max(1.0);
        let mut n = 0;
        while d.survival(h) > 1.0 - p && n < 200 {
            h = lo + 2.0 * (h - lo);
            n += 1;
        }
        h
    };
    if p <= 0.5 {
        find_root(|x| d.cdf(x) - p, lo, upper)
    } else {
        find_root(|x| d.survival(x) - (1.0 - p), lo, upper)
    }
}

/// Hazard rate `λ(x) = f(x) / F̄(x)`.
pub fn hazard<L: Lifetime + ?Sized>(d: &L, x: f64) -> Result<f64> {
    let s = d.survival(x);
    if !(s > NORMALIZER_FLOOR) {
        return Err(Error::DegenerateTail { tail: Tail::Right, t: x, normalizer: s });
    }
    Ok(d.density(x) / s)
}

/// Reversed hazard rate `τ(x) = f(x) / F(x)`.
pub fn reversed_hazard<L: Lifetime + ?Sized>(d: &L, x: f64) -> Result<f64> {
    let c = d.cdf(x);
    if !(c > NORMALIZER_FLOOR) {
        return Err(Error::DegenerateTail { tail: Tail::Left, t: x, normalizer: c });
    }
    Ok(d.density(x) / c)
}

/// Parametric families.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Exponential {
        rate: f64,
    },
    Uniform {
        a: f64,
        b: f64,
    },
    /// Shape `alpha`, scale `beta`.
    Gamma {
        shape: f64,
        scale: f64,
    },
    Beta {
        alpha: f64,
        beta: f64,
    },
    /// Density `2t` on `(0, 1)`.
    TriangularUp,
    /// Density `2(1 - t)` on `(0, 1)`.
    TriangularDown,
    /// Density `c_k` on the unit bin `[k-1, k)`.
    PiecewiseConstant {
        weights: Vec<f64>,
    },
}

/// Mean and outer quantiles, computed once at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentCache {
    pub mean: f64,
    /// `q(1e-3)`.
    pub q_low: f64,
    /// `q(1 - 1e-3)`.
    pub q_high: f64,
}

/// A validated member of one of the built-in [`Family`] variants.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    family: Family,
    // Only derived data for the `Gamma`/`Beta` normalizing constants.
    log_norm: f64,
    cache: MomentCache,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameters(format!("{name} = {v} must be positive and finite")))
    }
}

impl Distribution {
    pub fn new(family: Family) -> Result<Self> {
        let mut log_norm = 0.0;
        match &family {
            Family::Exponential { rate } => positive("lambda", *rate)?,
            Family::Uniform { a, b } => {
                if !(a.is_finite() && b.is_finite() && *a >= 0.0 && b > a) {
                    return Err(Error::InvalidParameters(format!("uniform needs 0 <= a < b, got a = {a}, b = {b}")));
                }
            }
            Family::Gamma { shape, scale } => {
                positive("alpha", *shape)?;
                positive("beta", *scale)?;
                log_norm = shape * scale.ln() + log_gamma(*shape)?;
            }
            Family::Beta { alpha, beta } => {
                positive("alpha", *alpha)?;
                positive("beta", *beta)?;
                log_norm = log_beta(*alpha, *beta)?;
            }
            Family::TriangularUp | Family::TriangularDown => {}
            Family::PiecewiseConstant { weights } => {
                if weights.is_empty() {
                    return Err(Error::InvalidParameters("piecewise-constant needs at least one weight".into()));
                }
                if weights.iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
                    return Err(Error::InvalidParameters(format!("weights must be >= 0, got {weights:?}")));
                }
                let total: f64 = weights.iter().sum();
                if (total - 1.0).abs() > 1e-9 {
                    return Err(Error::InvalidParameters(format!("weights sum to {total}, expected 1")));
                }
            }
        }
        let mut d = Self { family, log_norm, cache: MomentCache { mean: 0.0, q_low: 0.0, q_high: 0.0 } };
        d.cache.mean = d.closed_form_mean();
        d.cache.q_low = d.quantile(1e-3)?;
        d.cache.q_high = d.quantile(1.0 - 1e-3)?;
        Ok(d)
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        Self::new(Family::Exponential { rate })
    }

    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        Self::new(Family::Uniform { a, b })
    }

    pub fn gamma(shape: f64, scale: f64) -> Result<Self> {
        Self::new(Family::Gamma { shape, scale })
    }

    pub fn beta(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(Family::Beta { alpha, beta })
    }

    pub fn triangular_up() -> Self {
        Self::new(Family::TriangularUp).expect("parameter-free")
    }

    pub fn triangular_down() -> Self {
        Self::new(Family::TriangularDown).expect("parameter-free")
    }

    pub fn piecewise_constant(weights: Vec<f64>) -> Result<Self> {
        Self::new(Family::PiecewiseConstant { weights })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn moments(&self) -> &MomentCache {
        &self.cache
    }

    /// Right end `ν` of the support.
    pub fn support_end(&self) -> f64 {
        self.support().1
    }

    fn closed_form_mean(&self) -> f64 {
        match &self.family {
            Family::Exponential { rate } => 1.0 / rate,
            Family::Uniform { a, b } => 0.5 * (a + b),
            Family::Gamma { shape, scale } => shape * scale,
            Family::Beta { alpha, beta } => alpha / (alpha + beta),
            Family::TriangularUp => 2.0 / 3.0,
            Family::TriangularDown => 1.0 / 3.0,
            Family::PiecewiseConstant { weights } => {
                weights.iter().enumerate().map(|(i, c)| c * (2.0 * (i + 1) as f64 - 1.0) / 2.0).sum()
            }
        }
    }

    fn pwc_bin(weights: &[f64], x: f64) -> usize {
        (x.floor() as usize).min(weights.len() - 1)
    }
}

impl Lifetime for Distribution {
    fn support(&self) -> (f64, f64) {
        match &self.family {
            Family::Exponential { .. } | Family::Gamma { .. } => (0.0, f64::INFINITY),
            Family::Uniform { a, b } => (*a, *b),
            Family::Beta { .. } | Family::TriangularUp | Family::TriangularDown => (0.0, 1.0),
            Family::PiecewiseConstant { weights } => (0.0, weights.len() as f64),
        }
    }

    fn density(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x < lo || x > hi || x.is_nan() {
            return 0.0;
        }
        match &self.family {
            Family::Uniform { a, b } => 1.0 / (b - a),
            Family::TriangularUp => 2.0 * x,
            Family::TriangularDown => 2.0 * (1.0 - x),
            Family::PiecewiseConstant { weights } => {
                if x >= hi {
                    0.0
                } else {
                    weights[Self::pwc_bin(weights, x)]
                }
            }
            _ => self.ln_density(x).exp(),
        }
    }

    fn ln_density(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x < lo || x > hi || x.is_nan() {
            return f64::NEG_INFINITY;
        }
        match &self.family {
            Family::Exponential { rate } => rate.ln() - rate * x,
            Family::Gamma { shape, scale } => {
                let power = if *shape == 1.0 { 0.0 } else { (shape - 1.0) * x.ln() };
                power - x / scale - self.log_norm
            }
            Family::Beta { alpha, beta } => {
                let left = if *alpha == 1.0 { 0.0 } else { (alpha - 1.0) * x.ln() };
                let right = if *beta == 1.0 { 0.0 } else { (beta - 1.0) * (1.0 - x).ln() };
                left + right - self.log_norm
            }
            _ => self.density(x).ln(),
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x <= lo || x.is_nan() {
            return 0.0;
        }
        if x >= hi {
            return 1.0;
        }
        match &self.family {
            Family::Exponential { rate } => -(-rate * x).exp_m1(),
            Family::Uniform { a, b } => (x - a) / (b - a),
            Family::Gamma { shape, scale } => numerics::reg_inc_gamma(*shape, x / scale).unwrap_or(f64::NAN),
            Family::Beta { alpha, beta } => numerics::reg_inc_beta(*alpha, *beta, x).unwrap_or(f64::NAN),
            Family::TriangularUp => x * x,
            Family::TriangularDown => x * (2.0 - x),
            Family::PiecewiseConstant { weights } => {
                let k = Self::pwc_bin(weights, x);
                weights[..k].iter().sum::<f64>() + weights[k] * (x - k as f64)
            }
        }
    }

    fn survival(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x <= lo || x.is_nan() {
            return 1.0;
        }
        if x >= hi {
            return 0.0;
        }
        match &self.family {
            Family::Exponential { rate } => (-rate * x).exp(),
            Family::Uniform { a, b } => (b - x) / (b - a),
            Family::Gamma { shape, scale } => numerics::reg_inc_gamma_upper(*shape, x / scale).unwrap_or(f64::NAN),
            Family::Beta { alpha, beta } => numerics::reg_inc_beta(*beta, *alpha, 1.0 - x).unwrap_or(f64::NAN),
            Family::TriangularUp => (1.0 - x) * (1.0 + x),
            Family::TriangularDown => (1.0 - x) * (1.0 - x),
            Family::PiecewiseConstant { weights } => {
                let k = Self::pwc_bin(weights, x);
                weights[k] * ((k + 1) as f64 - x) + weights[k + 1..].iter().sum::<f64>()
            }
        }
    }

    fn mean(&self) -> f64 {
        self.cache.mean
    }

    fn breakpoints(&self) -> Vec<f64> {
        match &self.family {
            Family::PiecewiseConstant { weights } => (1..weights.len()).map(|k| k as f64).collect(),
            _ => Vec::new(),
        }
    }

    fn label(&self) -> String {
        self.to_string()
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Domain { function: "quantile", detail: format!("p = {p} not in (0, 1)") });
        }
        Ok(match &self.family {
            Family::Exponential { rate } => -(-p).ln_1p() / rate,
            Family::Uniform { a, b } => a + p * (b - a),
            Family::TriangularUp => p.sqrt(),
            Family::TriangularDown => 1.0 - (1.0 - p).sqrt(),
            Family::PiecewiseConstant { weights } => {
                let mut acc = 0.0;
                let mut q = weights.len() as f64;
                for (k, c) in weights.iter().enumerate() {
                    if *c > 0.0 && acc + c >= p {
                        q = k as f64 + (p - acc) / c;
                        break;
                    }
                    acc += c;
                }
                q
            }
            Family::Gamma { .. } | Family::Beta { .. } => quantile_by_root(self, p)?,
        })
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Exponential { rate } => write!(f, "exponential:lambda={rate}"),
            Family::Uniform { a, b } => write!(f, "uniform:a={a},b={b}"),
            Family::Gamma { shape, scale } => write!(f, "gamma:alpha={shape},beta={scale}"),
            Family::Beta { alpha, beta } => write!(f, "beta:alpha={alpha},beta={beta}"),
            Family::TriangularUp => f.write_str("triangular-up"),
            Family::TriangularDown => f.write_str("triangular-down"),
            Family::PiecewiseConstant { weights } => {
                f.write_str("pwc:c=")?;
                for (i, c) in weights.iter().enumerate() {
                    if i > 0 {
                        f.write_str("|")?;
                    }
                    write!(f, "{c}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for Distribution {
    type Err = Error;

    /// Parses `family:key=value,key=value`, e.g. `exponential:lambda=1`,
    /// `uniform:a=0,b=2`, `pwc:c=0.2|0.5|0.3`, `triangular-up`.
    fn from_str(spec: &str) -> Result<Self> {
        let fail = |reason: String| Error::Parse { spec: spec.to_string(), reason };
        let (name, rest) = match spec.split_once(':') {
            Some((n, r)) => (n.trim(), r.trim()),
            None => (spec.trim(), ""),
        };
        let mut pairs: Vec<(&str, &str)> = Vec::new();
        if !rest.is_empty() {
            for item in rest.split(',') {
                let (k, v) = item.split_once('=').ok_or_else(|| fail(format!("expected key=value, got `{item}`")))?;
                let k = k.trim();
                if pairs.iter().any(|(seen, _)| *seen == k) {
                    return Err(fail(format!("duplicate key `{k}`")));
                }
                pairs.push((k, v.trim()));
            }
        }
        let allowed: &[&str] = match name {
            "exponential" => &["lambda"],
            "uniform" => &["a", "b"],
            "gamma" | "beta" => &["alpha", "beta"],
            "triangular-up" | "triangular-down" => &[],
            "pwc" => &["c"],
            other => return Err(fail(format!("unknown family `{other}`"))),
        };
        if let Some((k, _)) = pairs.iter().find(|(k, _)| !allowed.contains(k)) {
            return Err(fail(format!("unknown key `{k}` for family `{name}`")));
        }
        let raw = |key: &str| -> Result<&str> {
            pairs.iter().find(|(k, _)| *k == key).map(|(_, v)| *v).ok_or_else(|| fail(format!("missing key `{key}`")))
        };
        let num = |key: &str| -> Result<f64> {
            let v = raw(key)?;
            v.parse::<f64>().map_err(|_| fail(format!("`{key}={v}` is not a number")))
        };
        let family = match name {
            "exponential" => Family::Exponential { rate: num("lambda")? },
            "uniform" => Family::Uniform { a: num("a")?, b: num("b")? },
            "gamma" => Family::Gamma { shape: num("alpha")?, scale: num("beta")? },
            "beta" => Family::Beta { alpha: num("alpha")?, beta: num("beta")? },
            "triangular-up" => Family::TriangularUp,
            "triangular-down" => Family::TriangularDown,
            "pwc" => {
                let weights = raw("c")?
                    .split('|')
                    .map(|w| w.trim().parse::<f64>().map_err(|_| fail(format!("weight `{w}` is not a number"))))
                    .collect::<Result<Vec<_>>>()?;
                Family::PiecewiseConstant { weights }
            }
            _ => unreachable!(),
        };
        Distribution::new(family).map_err(|e| fail(e.to_string()))
    }
}

impl Serialize for Distribution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Distribution {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
