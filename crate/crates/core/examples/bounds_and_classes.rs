//! Entropy bounds and the monotonicity classes of the weighted residual and
//! past entropies.

use wentropy::bounds::{bound_global, bound_past_upper, bound_residual_lower, classify, ClassKind, Envelope};
use wentropy::distributions::Distribution;
use wentropy::entropies::linspace;

fn main() -> wentropy::error::Result<()> {
    for d in [Distribution::uniform(0.0, 2.0)?, Distribution::triangular_up(), Distribution::beta(2.0, 3.0)?] {
        let g = bound_global(&d)?;
        println!("{d}: global upper bound slack {:.3e} ({:?})", g.min_slack, g.verdict);
    }
    let e = Envelope::for_support_end(1.0);
    println!("envelope for support end 1: maximizer {:.5}, bound {:.5}", e.mu_max, e.bound_at_max);

    let grid = linspace(0.1, 4.0, 5);
    for d in [Distribution::exponential(1.0)?, Distribution::gamma(0.5, 1.0)?, Distribution::gamma(2.0, 1.0)?] {
        let r = bound_residual_lower(&d, &grid)?;
        println!("{d}: residual lower bound {:?}, min slack {:.4}", r.verdict, r.min_slack);
    }
    let (past, hazard) = bound_past_upper(&Distribution::triangular_up(), &linspace(0.1, 0.9, 5))?;
    println!("triangular-up: past bounds {:?} / {:?}", past.verdict, hazard.verdict);

    for (d, kind) in [
        (Distribution::exponential(3.0)?, ClassKind::Wurl),
        (Distribution::exponential(2.0)?, ClassKind::Wurl),
        (Distribution::uniform(0.0, 2.5)?, ClassKind::Wurl),
        (Distribution::uniform(0.0, 3.0)?, ClassKind::Wurl),
        (Distribution::uniform(0.0, 0.3)?, ClassKind::Wupl),
        (Distribution::uniform(0.0, 1.0)?, ClassKind::Wupl),
    ] {
        println!("{d} {kind:?}: {:?}", classify(&d, kind)?.verdict);
    }
    Ok(())
}
