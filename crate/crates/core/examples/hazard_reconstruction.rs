//! Recovers the hazard rate and survival function from the weighted residual
//! entropy curve.

use wentropy::characterization::{
    audit_g_printed, reconstruct_hazard, reconstruct_survival_curve, ReconstructionInput,
};
use wentropy::distributions::Distribution;
use wentropy::entropies::linspace;

fn main() -> wentropy::error::Result<()> {
    let s = reconstruct_hazard(&ReconstructionInput::exponential(2.0, 1.0))?;
    println!("exponential(2) at t = 1: roots {:?} ({:?})", s.roots, s.multiplicity);

    let e = Distribution::exponential(1.0)?;
    let a = audit_g_printed(&e, &ReconstructionInput::exponential(1.0, 1.0))?;
    println!("printed g at the true hazard: {} (stationary point {:.6})", a.residual, a.stationary_point);

    for (d, grid) in [
        (Distribution::exponential(1.0)?, linspace(0.1, 3.0, 64)),
        (Distribution::uniform(0.0, 1.0)?, linspace(0.05, 0.9, 64)),
        (Distribution::gamma(2.0, 1.0)?, linspace(0.2, 4.0, 64)),
    ] {
        let r = reconstruct_survival_curve(&d, &grid)?;
        let mid = &r.points[grid.len() / 2];
        println!(
            "{d}: max survival error {:.2e}; at t = {:.3} hazard {:.5} ({:?})",
            r.max_survival_error, mid.t, mid.lambda_hat, mid.flag
        );
    }
    Ok(())
}
