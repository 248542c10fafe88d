//! Differential and weighted entropy of the built-in families, by quadrature
//! and, where one exists, in closed form.

use wentropy::distributions::Distribution;
use wentropy::entropies::{closed_form, differential_entropy, weighted_entropy};

fn main() -> wentropy::error::Result<()> {
    let laws = [
        Distribution::exponential(1.0)?,
        Distribution::uniform(0.0, 2.0)?,
        Distribution::gamma(2.0, 1.5)?,
        Distribution::beta(2.0, 3.0)?,
        Distribution::triangular_up(),
        Distribution::triangular_down(),
        Distribution::piecewise_constant(vec![0.2, 0.5, 0.3])?,
    ];
    println!("{:<28} {:>12} {:>12} {:>12}", "law", "H", "H^w", "closed form");
    for d in &laws {
        let h = differential_entropy(d)?.value;
        let hw = weighted_entropy(d)?.value;
        let cf = closed_form::weighted_entropy(d).map_or("-".to_string(), |v| format!("{v:.9}"));
        println!("{:<28} {h:>12.9} {hw:>12.9} {cf:>12}", d.to_string());
    }

    // Same H, different H^w: the weight sees where the mass sits.
    let up = Distribution::triangular_up();
    let down = Distribution::triangular_down();
    println!(
        "\ntriangular laws: H {:.6} vs {:.6}, H^w {:.6} vs {:.6}",
        differential_entropy(&up)?.value,
        differential_entropy(&down)?.value,
        weighted_entropy(&up)?.value,
        weighted_entropy(&down)?.value
    );
    Ok(())
}
