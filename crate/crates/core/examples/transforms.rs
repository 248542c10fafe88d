//! Weighted residual entropy of Y = φ(X) three ways: the affine rule, the
//! φ-weighted measures of X, and direct quadrature on the law of Y.

use wentropy::distributions::Distribution;
use wentropy::entropies::weighted_residual_entropy;
use wentropy::transforms::{affine_residual, transformed_weighted_residual, ImageDistribution, MonotoneTransform};

fn main() -> wentropy::error::Result<()> {
    let x = Distribution::exponential(1.0)?;
    let phi = MonotoneTransform::affine(2.0, 1.0)?;
    let y = ImageDistribution::new(&x, &phi)?;
    println!("t,affine_rule,phi_weighted,direct");
    for t in [1.5, 2.0, 3.0, 5.0, 8.0] {
        println!(
            "{t},{:.10},{:.10},{:.10}",
            affine_residual(&x, 2.0, 1.0, t)?,
            transformed_weighted_residual(&x, &phi, t)?,
            weighted_residual_entropy(&y, t)?.value
        );
    }

    // A decreasing map: 1/(1+X) on Uniform(0,1) lives on (1/2, 1).
    let u = Distribution::uniform(0.0, 1.0)?;
    let inv = MonotoneTransform::custom(
        "1/(1+x)",
        |x| 1.0 / (1.0 + x),
        |x| -1.0 / ((1.0 + x) * (1.0 + x)),
        |y| 1.0 / y - 1.0,
    );
    let img = ImageDistribution::new(&u, &inv)?;
    for t in [0.6, 0.75, 0.9] {
        println!(
            "1/(1+X) at {t}: {:.10} vs {:.10}",
            transformed_weighted_residual(&u, &inv, t)?,
            weighted_residual_entropy(&img, t)?.value
        );
    }
    Ok(())
}
