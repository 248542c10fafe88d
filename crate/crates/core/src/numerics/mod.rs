//! Quadrature, finite differences, bracketed roots and special functions.

mod diff;
mod quadrature;
mod root;
mod special;

pub use diff::{default_step, differentiate, differentiate_within};
pub use quadrature::{integrate, integrate_pieces, QuadratureConfig, QuadratureResult};
pub use root::find_root;
pub use special::{digamma, log_beta, log_gamma, reg_inc_beta, reg_inc_gamma, reg_inc_gamma_upper};

/// `p log p` with the continuous extension `0` for `p < 1e-300`.
#[inline]
pub fn p_log_p(p: f64) -> f64 {
    if p < 1e-300 {
        0.0
    } else {
        p * p.ln()
    }
}

/// `p log p` given `log p` directly; avoids forming `log` of an underflowed
/// density.
#[inline]
pub fn p_log_p_from_ln(ln_p: f64) -> f64 {
    let p = ln_p.exp();
    if p < 1e-300 {
        0.0
    } else {
        p * ln_p
    }
}
