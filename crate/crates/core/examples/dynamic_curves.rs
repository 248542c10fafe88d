//! Weighted residual and past entropy curves, printed as CSV.

use wentropy::distributions::Distribution;
use wentropy::entropies::{closed_form, default_grid_with, entropy_curve, MeasureKind};

fn main() -> wentropy::error::Result<()> {
    let d = Distribution::exponential(2.0)?;
    let grid = default_grid_with(&d, 12)?;
    let residual = entropy_curve(&d, MeasureKind::WeightedResidualEntropy, &grid)?;
    let past = entropy_curve(&d, MeasureKind::WeightedPastEntropy, &grid)?;

    println!("t,residual,residual_exact,past,past_exact");
    for (r, p) in residual.grid.iter().zip(&past.grid) {
        println!(
            "{:.6},{:.9},{:.9},{:.9},{:.9}",
            r.t,
            r.value,
            closed_form::exponential_weighted_residual(2.0, r.t),
            p.value,
            closed_form::exponential_weighted_past(2.0, p.t)
        );
    }

    let u = Distribution::uniform(0.0, 1.0)?;
    let curve = entropy_curve(&u, MeasureKind::MeanResidualValue, &[0.2, 0.5, 0.8])?;
    print!("\n{}", curve.to_csv());
    Ok(())
}
