//! Checks the integral identities, evaluates the printed claims that fail,
//! and shows their corrected forms holding.

use wentropy::distributions::{Distribution, Lifetime};
use wentropy::entropies::linspace;
use wentropy::identities::{
    audit_printed_claims, check_corrected_derivatives, check_decomposition, check_tail_mean_identity, IdentityReport,
};

fn show(r: &IdentityReport) {
    println!(
        "  {:<36} {:<9} max |lhs - rhs| = {:.3e}",
        format!("{:?}", r.identity_id),
        format!("{:?}", r.verdict),
        r.max_abs_residual
    );
}

fn main() -> wentropy::error::Result<()> {
    for d in [Distribution::exponential(1.0)?, Distribution::uniform(0.0, 1.0)?, Distribution::gamma(2.0, 1.0)?] {
        let grid = linspace(d.quantile(0.1)?, d.quantile(0.8)?, 6);
        println!("{d}");
        show(&check_decomposition(&d, &grid)?);
        show(&check_tail_mean_identity(&d, &grid)?);
        audit_printed_claims(&d, &grid).iter().for_each(show);
        check_corrected_derivatives(&d, &grid).iter().for_each(show);
    }
    Ok(())
}
