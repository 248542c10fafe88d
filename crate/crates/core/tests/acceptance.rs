//! Acceptance suite. Runs every criterion at its stated tolerance, prints one
//! line per criterion and exits non-zero if any fails.
//!
//! Run with `cargo test --test acceptance`.

use std::f64::consts::{E, LN_2};
use std::process::{Command, ExitCode};

use statrs::function::beta::ln_beta;
use statrs::function::gamma::{digamma, ln_gamma};
use wentropy::bounds::{bound_global, bound_past_upper, bound_residual_lower, classify, ClassKind, ClassVerdict};
use wentropy::characterization::{
    audit_g_printed, reconstruct_hazard, reconstruct_survival_curve, ReconstructionInput,
};
use wentropy::distributions::Distribution;
use wentropy::entropies::closed_form;
use wentropy::entropies::{
    joint_weighted_entropy_quadrature, linspace, weighted_entropy, weighted_past_entropy, weighted_residual_entropy,
};
use wentropy::identities::{
    audit_printed_claims, check_affine_and_product, check_corrected_derivatives, check_decomposition, IdentityId,
    IdentityReport, Verdict,
};
use wentropy::transforms::{affine_residual, transformed_weighted_residual, ImageDistribution, MonotoneTransform};

#[derive(Default)]
struct Checks {
    failures: Vec<String>,
    count: usize,
}

impl Checks {
    fn close(&mut self, label: &str, got: f64, want: f64, tol: f64) {
        self.that(label, (got - want).abs() <= tol, format!("got {got:.12e}, want {want:.12e}, tol {tol:e}"));
    }

    fn that(&mut self, label: &str, ok: bool, detail: impl Into<String>) {
        self.count += 1;
        if !ok {
            self.failures.push(format!("{label}: {}", detail.into()));
        }
    }

    fn ok<T>(&mut self, label: &str, r: wentropy::error::Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.that(label, false, e.to_string());
                None
            }
        }
    }
}

fn expo(rate: f64) -> Distribution {
    Distribution::exponential(rate).unwrap()
}

fn unif(a: f64, b: f64) -> Distribution {
    Distribution::uniform(a, b).unwrap()
}

fn hw(d: &Distribution) -> f64 {
    weighted_entropy(d).unwrap().value
}

fn static_values(c: &mut Checks) {
    let tol = 1e-7;
    c.close("exponential(1)", hw(&expo(1.0)), 2.0, tol);
    c.close("uniform(0,2)", hw(&unif(0.0, 2.0)), LN_2, tol);
    c.close("uniform(0,1)", hw(&unif(0.0, 1.0)), 0.0, tol);
    c.close("triangular-up", hw(&Distribution::triangular_up()), 2.0 / 9.0 - 2.0 / 3.0 * LN_2, tol);
    // Printed value; the density 2(1-x) actually gives 5/18 - (1/3) log 2.
    c.close("triangular-down", hw(&Distribution::triangular_down()), 1.0 / 9.0, tol);
}

fn coincidence_pairs(c: &mut Checks) {
    c.close("uniform(0,1)", hw(&unif(0.0, 1.0)), 0.0, 1e-7);
    c.close("exponential(e^2)", hw(&expo(E * E)), 0.0, 1e-7);
    c.close("uniform(0,2)", hw(&unif(0.0, 2.0)), LN_2, 1e-4);
    c.close("exponential(1.93389)", hw(&expo(1.93389)), LN_2, 1e-4);
}

// -E[X log f(X)] from E[X log X] = αβ(ψ(α+1) + log β) and E[X²] = α(α+1)β².
fn gamma_oracle(a: f64, scale: f64) -> f64 {
    let m = a * scale;
    -((a - 1.0) * m * (digamma(a + 1.0) + scale.ln()) - a * (a + 1.0) * scale - m * (a * scale.ln() + ln_gamma(a)))
}

// -E[X log f(X)] from E[X log X] = m(ψ(a+1) - ψ(a+b+1)), E[X log(1-X)] = m(ψ(b) - ψ(a+b+1)).
fn beta_oracle(a: f64, b: f64) -> f64 {
    let m = a / (a + b);
    let s = digamma(a + b + 1.0);
    m * (ln_beta(a, b) - (a - 1.0) * (digamma(a + 1.0) - s) - (b - 1.0) * (digamma(b) - s))
}

fn closed_form_oracles(c: &mut Checks) {
    let params = [0.5, 1.0, 2.0];
    for &a in &params {
        for &b in &params {
            let g = Distribution::gamma(a, b).unwrap();
            let lib = closed_form::gamma_weighted(a, b).unwrap();
            c.close(&format!("gamma({a},{b}) oracle"), lib, gamma_oracle(a, b), 1e-12 * (1.0 + lib.abs()));
            c.close(&format!("gamma({a},{b}) quadrature"), hw(&g), lib, 1e-6);
            let bd = Distribution::beta(a, b).unwrap();
            let lib = closed_form::beta_weighted(a, b).unwrap();
            c.close(&format!("beta({a},{b}) oracle"), lib, beta_oracle(a, b), 1e-12 * (1.0 + lib.abs()));
            c.close(&format!("beta({a},{b}) quadrature"), hw(&bd), lib, 1e-6);
        }
    }
    let lib = closed_form::beta_weighted(2.0, 1.0).unwrap();
    c.close("beta(2,1) is triangular-up", lib, 2.0 / 9.0 - 2.0 / 3.0 * LN_2, 1e-6);
    c.close("beta(2,1) quadrature", hw(&Distribution::beta(2.0, 1.0).unwrap()), lib, 1e-6);
}

fn dynamic_values(c: &mut Checks) {
    for rate in [0.5, 1.0, 2.0] {
        let d = expo(rate);
        for t in [0.0, 0.5, 1.0, 2.0] {
            if let Some(q) = c.ok("exponential residual", weighted_residual_entropy(&d, t)) {
                let want = t + 2.0 / rate - (t + 1.0 / rate) * rate.ln();
                c.close(&format!("exponential({rate}) residual t={t}"), q.value, want, 1e-7);
            }
        }
    }
    for nu in [2.0, 4.0] {
        let d = unif(0.0, nu);
        for t in [0.25, 0.5, 1.0, 2.0] {
            if let Some(q) = c.ok("uniform past", weighted_past_entropy(&d, t)) {
                c.close(&format!("uniform(0,{nu}) past t={t}"), q.value, 0.5 * t * t.ln(), 1e-8);
            }
        }
    }
    let d = expo(1.0);
    for t in [0.5, 1.0, 2.0] {
        if let Some(q) = c.ok("exponential past", weighted_past_entropy(&d, t)) {
            c.close(
                &format!("exponential(1) past t={t}"),
                q.value,
                closed_form::exponential_weighted_past(1.0, t),
                1e-7,
            );
        }
    }
}

fn decomposition(c: &mut Checks) {
    let cases = [
        (expo(1.0), linspace(0.1, 6.0, 10)),
        (unif(0.0, 1.0), linspace(0.05, 0.95, 10)),
        (Distribution::gamma(2.0, 1.0).unwrap(), linspace(0.2, 8.0, 10)),
        (Distribution::beta(2.0, 1.0).unwrap(), linspace(0.05, 0.95, 10)),
    ];
    for (d, grid) in &cases {
        if let Some(r) = c.ok("decomposition", check_decomposition(d, grid)) {
            c.that(
                &format!("{d}"),
                r.residuals.len() == 10 && r.max_abs_residual < 1e-6,
                format!("max residual {:e}", r.max_abs_residual),
            );
        }
    }
}

fn bounds(c: &mut Checks) {
    let u = unif(0.0, 2.0);
    if let Some(r) = c.ok("global uniform", bound_global(&u)) {
        c.that(
            "global bound uniform equality",
            r.precondition_met && r.min_slack.abs() <= 1e-8,
            format!("slack {:e}", r.min_slack),
        );
    }
    let others = [
        Distribution::triangular_up(),
        Distribution::triangular_down(),
        Distribution::beta(2.0, 3.0).unwrap(),
        Distribution::piecewise_constant(vec![0.2, 0.5, 0.3]).unwrap(),
    ];
    for d in &others {
        if let Some(r) = c.ok("global", bound_global(d)) {
            c.that(
                &format!("global bound {d}"),
                r.precondition_met && r.min_slack >= -1e-8,
                format!("slack {:e}", r.min_slack),
            );
        }
    }
    for d in [expo(1.0), expo(2.0), Distribution::gamma(0.5, 1.0).unwrap()] {
        let grid = linspace(0.1, 4.0, 5);
        if let Some(r) = c.ok("residual lower", bound_residual_lower(&d, &grid)) {
            c.that(
                &format!("residual lower bound {d}"),
                r.precondition_met && r.points.len() == 5 && r.min_slack >= 0.0,
                format!("precondition {}, slack {:e}", r.precondition_met, r.min_slack),
            );
        }
    }
    let grid = linspace(0.1, 1.9, 7);
    if let Some((past, hazard)) = c.ok("past upper uniform", bound_past_upper(&u, &grid)) {
        let worst = past.points.iter().map(|p| p.slack.abs()).fold(0.0, f64::max);
        c.that("past bound uniform equality", worst <= 1e-8, format!("max |slack| {worst:e}"));
        c.that(
            "past hazard bound uniform",
            hazard.precondition_met && hazard.min_slack >= 0.0,
            format!("slack {:e}", hazard.min_slack),
        );
    }
    let tri = Distribution::triangular_up();
    if let Some((_, hazard)) = c.ok("past upper triangular", bound_past_upper(&tri, &linspace(0.1, 0.9, 5))) {
        c.that(
            "past hazard bound triangular-up",
            hazard.precondition_met && hazard.min_slack >= 0.0,
            format!("slack {:e}", hazard.min_slack),
        );
    }
}

fn classification(c: &mut Checks) {
    let cases = [
        (expo(3.0), ClassKind::Wurl, ClassVerdict::Decreasing),
        (expo(2.0), ClassKind::Wurl, ClassVerdict::Increasing),
        (unif(0.0, 2.5), ClassKind::Wurl, ClassVerdict::Decreasing),
        (unif(0.0, 3.0), ClassKind::Wurl, ClassVerdict::Neither),
        (unif(0.0, 0.3), ClassKind::Wupl, ClassVerdict::Decreasing),
        (unif(0.0, 1.0), ClassKind::Wupl, ClassVerdict::Neither),
    ];
    for (d, kind, want) in cases {
        if let Some(r) = c.ok("classify", classify(&d, kind)) {
            c.that(&format!("{d} {kind:?}"), r.verdict == want, format!("got {:?}, want {want:?}", r.verdict));
        }
    }
}

fn report(rs: &[IdentityReport], id: IdentityId) -> &IdentityReport {
    rs.iter().find(|r| r.identity_id == id).expect("report present")
}

fn transform_consistency(c: &mut Checks) {
    let e = expo(1.0);
    let phi = MonotoneTransform::affine(2.0, 1.0).unwrap();
    let image = ImageDistribution::new(&e, &phi).unwrap();
    for t in [1.5, 2.0, 3.0, 5.0, 8.0] {
        let (Some(branch), Some(rule), Some(direct)) = (
            c.ok("branch", transformed_weighted_residual(&e, &phi, t)),
            c.ok("composition", affine_residual(&e, 2.0, 1.0, t)),
            c.ok("direct", weighted_residual_entropy(&image, t).map(|q| q.value)),
        ) else {
            continue;
        };
        c.close(&format!("branch vs composition t={t}"), branch, rule, 1e-6);
        c.close(&format!("branch vs direct t={t}"), branch, direct, 1e-6);
        c.close(&format!("composition vs direct t={t}"), rule, direct, 1e-6);
    }
    let u = unif(0.0, 1.0);
    if let Some(rs) = c.ok("affine and product", check_affine_and_product(&e, &u, 2.0, 1.0)) {
        let affine = report(&rs, IdentityId::AffineLaw);
        c.that("static affine law", affine.max_abs_residual <= 1e-7, format!("residual {:e}", affine.max_abs_residual));
    }
    if let Some(q) = c.ok("joint", joint_weighted_entropy_quadrature(&e, &u)) {
        c.close("joint exponential(1) x uniform(0,1)", q.value, 1.0, 1e-6);
    }
}

fn audit(c: &mut Checks) {
    let e = expo(1.0);
    let rs = audit_printed_claims(&e, &[1.0, 2.0]);
    let d = report(&rs, IdentityId::ClaimedResidualDerivative);
    for p in &d.residuals {
        c.close("claimed derivative lhs", p.lhs, 1.0, 1e-5);
        c.close("claimed derivative rhs", p.rhs, 0.0, 1e-5);
    }
    c.that("claimed derivative fails", d.verdict == Verdict::Fails, format!("{:?}", d.verdict));
    let tail = report(&rs, IdentityId::ClaimedTailEntropyIntegral);
    c.that("claimed tail integral diverges", tail.verdict == Verdict::Diverges, format!("{:?}", tail.verdict));

    let u = unif(0.0, 1.0);
    let rs = audit_printed_claims(&u, &[0.5]);
    let p = report(&rs, IdentityId::ClaimedPastEntropyIntegral);
    c.close("claimed past integral lhs", p.residuals[0].lhs, 0.25 * 0.5f64.ln(), 1e-8);
    c.close("claimed past integral rhs", p.residuals[0].rhs, 0.5, 1e-7);
    c.that("claimed past integral fails", p.verdict == Verdict::Fails, format!("{:?}", p.verdict));

    let cases = [
        (expo(1.0), linspace(0.2, 5.0, 12)),
        (unif(0.0, 1.0), linspace(0.05, 0.95, 12)),
        (Distribution::gamma(2.0, 1.0).unwrap(), linspace(0.3, 6.0, 12)),
    ];
    for (d, grid) in &cases {
        // interior: drop the outermost two points on each side
        let interior = &grid[2..grid.len() - 2];
        let rs = check_corrected_derivatives(d, interior);
        for id in [
            IdentityId::CorrectedResidualDerivative,
            IdentityId::CorrectedPastDerivative,
            IdentityId::CorrectedTailEntropyIntegral,
        ] {
            let r = report(&rs, id);
            c.that(&format!("{d} {id:?}"), r.max_abs_residual <= 1e-5, format!("residual {:e}", r.max_abs_residual));
        }
    }
}

fn reconstruction(c: &mut Checks) {
    for rate in [0.5, 1.0, 2.0, E, 4.0] {
        for t in [0.25, 0.5, 1.0, 2.0, 3.0] {
            let input = ReconstructionInput::exponential(rate, t);
            if let Some(s) = c.ok("hazard", reconstruct_hazard(&input)) {
                let best = s.roots.iter().map(|r| (r - rate).abs()).fold(f64::INFINITY, f64::min);
                c.that(
                    &format!("exponential({rate}) hazard t={t}"),
                    best <= 1e-9,
                    format!("nearest root off by {best:e}"),
                );
            }
        }
    }
    let cases = [
        (expo(1.0), linspace(0.1, 3.0, 64)),
        (unif(0.0, 1.0), linspace(0.05, 0.9, 64)),
        (Distribution::gamma(2.0, 1.0).unwrap(), linspace(0.2, 4.0, 64)),
    ];
    for (d, grid) in &cases {
        if let Some(r) = c.ok("survival", reconstruct_survival_curve(d, grid)) {
            c.that(
                &format!("{d} survival"),
                r.max_survival_error < 1e-3,
                format!("max error {:e}", r.max_survival_error),
            );
        }
    }
    let e = expo(1.0);
    if let Some(a) = c.ok("g audit", audit_g_printed(&e, &ReconstructionInput::exponential(1.0, 1.0))) {
        c.close("printed g at true hazard", a.residual, -1.0, 1e-9);
    }
}

fn determinism(c: &mut Checks) {
    let bin = env!("CARGO_BIN_EXE_wentropy");
    let runs: [&[&str]; 5] = [
        &["entropy", "--dist", "exponential:lambda=1", "--measure", "weighted"],
        &["curve", "--dist", "gamma:alpha=2,beta=1", "--measure", "weighted-residual", "--steps", "64"],
        &["curve", "--dist", "uniform:a=0,b=1", "--measure", "weighted-past", "--format", "csv"],
        &["classify", "--dist", "uniform:a=0,b=2.5", "--kind", "wurl"],
        &["reconstruct", "--dist", "exponential:lambda=1", "--steps", "32", "--format", "csv"],
    ];
    for args in runs {
        let run = || Command::new(bin).args(args).output().expect("binary runs");
        let (a, b) = (run(), run());
        c.that(
            &args.join(" "),
            a.status.success() && a.stdout == b.stdout,
            format!("status {:?}/{:?}, equal {}", a.status, b.status, a.stdout == b.stdout),
        );
    }
    let first = Command::new(bin).args(runs[0]).output().unwrap();
    c.that("entropy prints 2.0", first.stdout == b"2.0\n", String::from_utf8_lossy(&first.stdout).into_owned());
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn(&mut Checks));
    let criteria: [Criterion; 11] = [
        ("static_values", static_values),
        ("coincidence_pairs", coincidence_pairs),
        ("closed_form_oracles", closed_form_oracles),
        ("dynamic_values", dynamic_values),
        ("decomposition", decomposition),
        ("bounds", bounds),
        ("classification_boundaries", classification),
        ("transform_consistency", transform_consistency),
        ("audit_reproduces_discrepancies", audit),
        ("reconstruction", reconstruction),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let started = std::time::Instant::now();
        let mut c = Checks::default();
        run(&mut c);
        let secs = started.elapsed().as_secs_f64();
        if c.failures.is_empty() {
            println!("PASS {name} ({} checks, {secs:.2}s)", c.count);
        } else {
            failed += 1;
            println!("FAIL {name} ({}/{} checks failed, {secs:.2}s)", c.failures.len(), c.count);
            for f in &c.failures {
                println!("    {f}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
