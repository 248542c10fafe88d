use std::process::{Command, Output};

use wentropy::bounds::{BoundReport, ClassificationReport};
use wentropy::characterization::SurvivalReconstruction;
use wentropy::entropies::EntropyCurve;

fn wentropy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wentropy")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn weighted_entropy_of_unit_exponential() {
    let o = wentropy(&["entropy", "--dist", "exponential:lambda=1", "--measure", "weighted"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "2.0\n");
}

#[test]
fn dynamic_entropy_needs_t() {
    let o = wentropy(&["entropy", "--dist", "uniform:a=0,b=1", "--measure", "weighted-past", "--t", "0.5"]);
    assert!(o.status.success());
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 0.25 * 0.5f64.ln()).abs() < 1e-10);
    let o = wentropy(&["entropy", "--dist", "uniform:a=0,b=1", "--measure", "weighted-past"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn degenerate_grid_exits_two() {
    let o = wentropy(&[
        "curve",
        "--dist",
        "uniform:a=0,b=1",
        "--measure",
        "weighted-past",
        "--start",
        "0.25",
        "--end",
        "0.25",
        "--steps",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["error"]["kind"], "invalid_input");
    assert!(!o.stderr.is_empty());
}

#[test]
fn bad_distribution_exits_two() {
    for spec in ["weibull:k=2", "exponential:rate=1", "uniform:a=2,b=1", "pwc:c=0.5|0.6"] {
        let o = wentropy(&["entropy", "--dist", spec]);
        assert_eq!(o.status.code(), Some(2), "{spec}");
    }
    assert_eq!(wentropy(&["curve", "--dist", "exponential:lambda=1"]).status.code(), Some(2));
}

#[test]
fn curve_outside_support_exits_two() {
    let o = wentropy(&[
        "curve",
        "--dist",
        "uniform:a=0,b=1",
        "--measure",
        "weighted-residual",
        "--start",
        "0.5",
        "--end",
        "2",
        "--steps",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn curve_json_schema() {
    let o = wentropy(&["curve", "--dist", "exponential:lambda=2", "--measure", "weighted-residual", "--steps", "32"]);
    assert!(o.status.success());
    let c: EntropyCurve = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(c.grid.len(), 32);
    for p in &c.grid {
        let want = p.t + 1.0 - (p.t + 0.5) * 2f64.ln();
        assert!((p.value - want).abs() < 1e-7);
    }
    let default = wentropy(&["curve", "--dist", "exponential:lambda=2", "--measure", "weighted-residual"]);
    let c: EntropyCurve = serde_json::from_str(&stdout(&default)).unwrap();
    assert_eq!(c.grid.len(), 512);
}

#[test]
fn csv_has_header_and_rows() {
    let o = wentropy(&[
        "curve",
        "--dist",
        "uniform:a=0,b=2",
        "--measure",
        "weighted-past",
        "--start",
        "0.5",
        "--end",
        "1.5",
        "--steps",
        "5",
        "--format",
        "csv",
    ]);
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "t,value,converged");
    assert_eq!(lines.len(), 6);
    let row: Vec<&str> = lines[3].split(',').collect();
    assert_eq!(row[0], "1.0");
    assert_eq!(row[1].parse::<f64>().unwrap(), 0.0);
    assert_eq!(row[2], "true");
}

#[test]
fn classify_report() {
    let o = wentropy(&["classify", "--dist", "uniform:a=0,b=2.5", "--kind", "wurl", "--format", "json"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("{\"verdict\":\"Decreasing\","), "{s}");
    let r: ClassificationReport = serde_json::from_str(&s).unwrap();
    assert_eq!(r.derivative_samples.len(), 128);
    let o = wentropy(&["classify", "--dist", "uniform:a=0,b=1", "--kind", "wupl"]);
    let r: ClassificationReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(serde_json::to_value(r.verdict).unwrap(), "Neither");
}

#[test]
fn bounds_and_audit_parse() {
    let o = wentropy(&["bounds", "--dist", "triangular-up"]);
    assert!(o.status.success());
    let rs: Vec<BoundReport> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rs.len(), 4);
    assert!(rs.iter().all(|r| r.holds() || !r.precondition_met));

    let o = wentropy(&["audit", "--dist", "exponential:lambda=1", "--steps", "4"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let verdicts: Vec<(&str, &str)> = v["identities"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["identity_id"].as_str().unwrap(), r["verdict"].as_str().unwrap()))
        .collect();
    assert!(verdicts.contains(&("claimed_residual_derivative", "fails")));
    assert!(verdicts.contains(&("claimed_tail_entropy_integral", "diverges")));
    assert!(verdicts.contains(&("corrected_residual_derivative", "holds")));
}

#[test]
fn transform_and_reconstruct() {
    let o = wentropy(&[
        "transform",
        "--dist",
        "exponential:lambda=1",
        "--affine",
        "2,1",
        "--start",
        "2",
        "--end",
        "4",
        "--steps",
        "3",
    ]);
    assert!(o.status.success());
    let c: EntropyCurve = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(c.grid.iter().all(|p| p.converged));

    let o =
        wentropy(&["reconstruct", "--dist", "exponential:lambda=1", "--start", "0.1", "--end", "3", "--steps", "64"]);
    assert!(o.status.success());
    let r: SurvivalReconstruction = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r.max_survival_error < 1e-4);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["curve", "--dist", "beta:alpha=2,beta=3", "--measure", "weighted-past", "--steps", "128"];
    let a = wentropy(&args);
    let b = wentropy(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
