//! Command-line front end.
//!
//! Every invocation is one [`JobSpec`]. Output goes to a single stream as JSON
//! (default) or CSV; numbers always carry 17 significant digits, so repeated
//! runs are byte-identical.
//!
//! Exit codes: `0` success, `2` invalid arguments, `3` numerical failure. In
//! JSON mode a failure also writes `{"error":{"kind":..,"message":..}}`.

use std::ffi::OsString;
use std::io::{self, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{bound_global, bound_past_upper, bound_residual_lower, classify, BoundReport, ClassKind};
use crate::characterization::reconstruct_survival_curve;
use crate::distributions::{Distribution, Lifetime};
use crate::entropies::{default_grid_with, entropy_curve, evaluate, linspace, CurvePoint, EntropyCurve, MeasureKind};
use crate::error::{Error, Result};
use crate::format::fmt17;
use crate::identities::{
    audit_limits, audit_printed_claims, check_corrected_derivatives, check_decomposition, check_head_mean_identity,
    check_tail_mean_identity, monotonicity_pairs, IdentityReport, LimitAudit, MonotonicityPair,
};
use crate::transforms::{affine_past, affine_residual};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Default number of curve points.
pub const CURVE_POINTS: usize = 512;
/// Default number of points for reports that evaluate nested integrals.
pub const REPORT_POINTS: usize = 8;
/// Default number of reconstruction points.
pub const RECONSTRUCT_POINTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Entropy,
    Curve,
    Classify,
    Bounds,
    Audit,
    Transform,
    Reconstruct,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub start: f64,
    pub end: f64,
    pub steps: usize,
}

/// A fully parsed invocation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JobSpec {
    pub command: CommandKind,
    pub dist: Distribution,
    pub measure: Option<MeasureKind>,
    pub t: Option<f64>,
    /// Explicit grid; `None` falls back to the command's default.
    pub grid: Option<GridSpec>,
    /// Point count for the default grid.
    pub steps: Option<usize>,
    pub format: OutputFormat,
    pub affine: Option<(f64, f64)>,
    pub kind: Option<ClassKind>,
}

#[derive(Parser, Debug)]
#[command(name = "wentropy", version, about = "Weighted residual and past entropies of lifetime distributions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Distribution, e.g. `exponential:lambda=1`, `uniform:a=0,b=2`,
    /// `gamma:alpha=2,beta=1`, `beta:alpha=2,beta=3`, `triangular-up`,
    /// `pwc:c=0.2|0.5|0.3`.
    #[arg(long)]
    dist: String,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
}

#[derive(Args, Debug)]
struct Grid {
    #[arg(long, allow_negative_numbers = true)]
    start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    end: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// One value of a measure.
    Entropy {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "weighted")]
        measure: String,
        #[arg(long, allow_negative_numbers = true)]
        t: Option<f64>,
    },
    /// A dynamic measure on a grid.
    Curve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        measure: String,
        #[command(flatten)]
        grid: Grid,
    },
    /// Monotonicity class of the weighted residual (wurl) or past (wupl) entropy.
    Classify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        kind: String,
    },
    /// The four entropy bounds.
    Bounds {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: Grid,
    },
    /// Identity checks, including the printed claims that fail.
    Audit {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: Grid,
    },
    /// Weighted residual or past entropy of `aX + b`.
    Transform {
        #[command(flatten)]
        common: Common,
        /// `a,b` with `a > 0`, `b >= 0`.
        #[arg(long, allow_hyphen_values = true)]
        affine: String,
        #[arg(long, default_value = "weighted-residual")]
        measure: String,
        #[command(flatten)]
        grid: Grid,
    },
    /// Hazard and survival recovered from the weighted residual entropy curve.
    Reconstruct {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: Grid,
    },
}

fn parse_affine(s: &str) -> Result<(f64, f64)> {
    let bad = || Error::Parse { spec: s.to_string(), reason: "expected `a,b`".into() };
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    if !(a > 0.0 && a.is_finite() && b >= 0.0 && b.is_finite()) {
        return Err(Error::InvalidParameters(format!("affine map needs a > 0 and b >= 0, got {a},{b}")));
    }
    Ok((a, b))
}

fn grid_spec(g: &Grid) -> Result<(Option<GridSpec>, Option<usize>)> {
    if let Some(steps) = g.steps {
        if steps < 2 {
            return Err(Error::Invalid(format!("--steps must be at least 2, got {steps}")));
        }
    }
    match (g.start, g.end) {
        (None, None) => Ok((None, g.steps)),
        (Some(start), Some(end)) => {
            if !(start < end) {
                return Err(Error::Invalid(format!("--start ({start}) must be below --end ({end})")));
            }
            let steps = g.steps.ok_or_else(|| Error::Invalid("--steps is required with --start/--end".into()))?;
            Ok((Some(GridSpec { start, end, steps }), None))
        }
        _ => Err(Error::Invalid("--start and --end go together".into())),
    }
}

impl JobSpec {
    /// Parse command-line arguments (program name first).
    pub fn from_args<I, T>(args: I) -> std::result::Result<Self, CliError>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let cli = Cli::try_parse_from(args).map_err(CliError::Clap)?;
        Self::from_cli(cli).map_err(CliError::Job)
    }

    fn from_cli(cli: Cli) -> Result<Self> {
        let base = |command, common: &Common| -> Result<JobSpec> {
            Ok(JobSpec {
                command,
                dist: common.dist.parse()?,
                measure: None,
                t: None,
                grid: None,
                steps: None,
                format: common.format,
                affine: None,
                kind: None,
            })
        };
        let job = match cli.command {
            Command::Entropy { common, measure, t } => {
                let measure: MeasureKind = measure.parse()?;
                if measure.is_dynamic() && t.is_none() {
                    return Err(Error::Invalid(format!("measure `{measure}` needs --t")));
                }
                JobSpec { measure: Some(measure), t, ..base(CommandKind::Entropy, &common)? }
            }
            Command::Curve { common, measure, grid } => {
                let measure: MeasureKind = measure.parse()?;
                if !measure.is_dynamic() {
                    return Err(Error::Invalid(format!("`{measure}` is static; curves need a dynamic measure")));
                }
                let (grid, steps) = grid_spec(&grid)?;
                JobSpec { measure: Some(measure), grid, steps, ..base(CommandKind::Curve, &common)? }
            }
            Command::Classify { common, kind } => {
                JobSpec { kind: Some(kind.parse()?), ..base(CommandKind::Classify, &common)? }
            }
            Command::Bounds { common, grid } => {
                let (grid, steps) = grid_spec(&grid)?;
                JobSpec { grid, steps, ..base(CommandKind::Bounds, &common)? }
            }
            Command::Audit { common, grid } => {
                let (grid, steps) = grid_spec(&grid)?;
                JobSpec { grid, steps, ..base(CommandKind::Audit, &common)? }
            }
            Command::Transform { common, affine, measure, grid } => {
                let measure: MeasureKind = measure.parse()?;
                if !matches!(measure, MeasureKind::WeightedResidualEntropy | MeasureKind::WeightedPastEntropy) {
                    return Err(Error::Invalid("transform supports weighted-residual and weighted-past".into()));
                }
                let (grid, steps) = grid_spec(&grid)?;
                JobSpec {
                    measure: Some(measure),
                    affine: Some(parse_affine(&affine)?),
                    grid,
                    steps,
                    ..base(CommandKind::Transform, &common)?
                }
            }
            Command::Reconstruct { common, grid } => {
                let (grid, steps) = grid_spec(&grid)?;
                JobSpec { grid, steps, ..base(CommandKind::Reconstruct, &common)? }
            }
        };
        Ok(job)
    }

    fn grid_or_default(&self, default_points: usize) -> Result<Vec<f64>> {
        match self.grid {
            Some(g) => Ok(linspace(g.start, g.end, g.steps)),
            None => default_grid_with(&self.dist, self.steps.unwrap_or(default_points)),
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Clap(clap::Error),
    Job(Error),
}

/// `2` for malformed or out-of-range input, `3` for numerical failure.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::InvalidParameters(_)
        | Error::Invalid(_)
        | Error::InvalidInterval { .. }
        | Error::OutsideSupport { .. } => EXIT_USAGE,
        _ => EXIT_NUMERICAL,
    }
}

fn error_kind(code: i32) -> &'static str {
    if code == EXIT_USAGE {
        "invalid_input"
    } else {
        "numerical"
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
}

#[derive(Serialize)]
struct ErrorObject<'a> {
    error: ErrorBody<'a>,
}

fn write_error(format: OutputFormat, e: &Error, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let code = exit_code(e);
    let _ = writeln!(err, "error: {e}");
    if format == OutputFormat::Json {
        let obj = ErrorObject { error: ErrorBody { kind: error_kind(code), message: e.to_string() } };
        let _ = writeln!(out, "{}", serde_json::to_string(&obj).expect("error object serializes"));
    }
    code
}

#[derive(Serialize)]
struct AuditOutput {
    identities: Vec<IdentityReport>,
    limits: LimitAudit,
    monotonicity: Vec<MonotonicityPair>,
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("report serializes")
}

fn render(job: &JobSpec) -> Result<String> {
    let d = &job.dist;
    let csv = job.format == OutputFormat::Csv;
    let out = match job.command {
        CommandKind::Entropy => {
            let measure = job.measure.unwrap_or(MeasureKind::WeightedEntropy);
            let e = evaluate(d, measure, job.t)?;
            if !e.converged {
                return Err(Error::Domain {
                    function: "entropy",
                    detail: format!("quadrature did not converge (error estimate {:e})", e.error),
                });
            }
            if csv {
                format!("value\n{}\n", fmt17(e.value))
            } else {
                format!("{}\n", fmt17(e.value))
            }
        }
        CommandKind::Curve => {
            let grid = job.grid_or_default(CURVE_POINTS)?;
            let c = entropy_curve(d, job.measure.expect("curve has a measure"), &grid)?;
            if csv {
                c.to_csv()
            } else {
                format!("{}\n", c.to_json())
            }
        }
        CommandKind::Classify => {
            let r = classify(d, job.kind.expect("classify has a kind"))?;
            if csv {
                let mut s = String::from("t,derivative\n");
                for p in &r.derivative_samples {
                    s.push_str(&format!("{},{}\n", fmt17(p.t), fmt17(p.derivative)));
                }
                s
            } else {
                format!("{}\n", to_json(&r))
            }
        }
        CommandKind::Bounds => {
            let grid = job.grid_or_default(REPORT_POINTS)?;
            let (past, past_hazard) = bound_past_upper(d, &grid)?;
            let reports = vec![bound_global(d)?, bound_residual_lower(d, &grid)?, past, past_hazard];
            if csv {
                bounds_csv(&reports)
            } else {
                format!("{}\n", to_json(&reports))
            }
        }
        CommandKind::Audit => {
            let grid = job.grid_or_default(REPORT_POINTS)?;
            let mut identities = vec![
                check_decomposition(d, &grid)?,
                check_tail_mean_identity(d, &grid)?,
                check_head_mean_identity(d, &grid)?,
            ];
            identities.extend(audit_printed_claims(d, &grid));
            identities.extend(check_corrected_derivatives(d, &grid));
            if csv {
                identities_csv(&identities)
            } else {
                let limits = audit_limits(d, grid[0], grid[grid.len() - 1])?;
                let monotonicity = monotonicity_pairs(d, &grid);
                format!("{}\n", to_json(&AuditOutput { identities, limits, monotonicity }))
            }
        }
        CommandKind::Transform => {
            let (a, b) = job.affine.expect("transform has an affine map");
            let measure = job.measure.expect("transform has a measure");
            let grid = match job.grid {
                Some(g) => linspace(g.start, g.end, g.steps),
                None => job.grid_or_default(CURVE_POINTS)?.into_iter().map(|x| a * x + b).collect(),
            };
            let curve = affine_curve(d, a, b, measure, &grid);
            if csv {
                curve.to_csv()
            } else {
                format!("{}\n", curve.to_json())
            }
        }
        CommandKind::Reconstruct => {
            let grid = job.grid_or_default(RECONSTRUCT_POINTS)?;
            let r = reconstruct_survival_curve(d, &grid)?;
            if csv {
                r.to_csv()
            } else {
                format!("{}\n", to_json(&r))
            }
        }
    };
    Ok(out)
}

fn affine_curve(d: &Distribution, a: f64, b: f64, measure: MeasureKind, grid: &[f64]) -> EntropyCurve {
    use rayon::prelude::*;
    let points = grid
        .par_iter()
        .map(|&t| {
            let v = match measure {
                MeasureKind::WeightedPastEntropy => affine_past(d, a, b, t),
                _ => affine_residual(d, a, b, t),
            };
            match v {
                Ok(value) => CurvePoint { t, value, converged: true },
                Err(_) => CurvePoint { t, value: f64::NAN, converged: false },
            }
        })
        .collect();
    EntropyCurve { kind: measure, dist: format!("{a}*x+{b} of {}", d.label()), grid: points }
}

fn bounds_csv(reports: &[BoundReport]) -> String {
    let mut s = String::from("bound,t,lhs,rhs,slack,verdict\n");
    for r in reports {
        let id = serde_json::to_value(r.bound_id).expect("id serializes");
        let verdict = serde_json::to_value(r.verdict).expect("verdict serializes");
        if r.points.is_empty() {
            s.push_str(&format!("{},,,,,{}\n", id.as_str().unwrap_or_default(), verdict.as_str().unwrap_or_default()));
        }
        for p in &r.points {
            s.push_str(&format!(
                "{},{},{},{},{},{}\n",
                id.as_str().unwrap_or_default(),
                p.t.map(fmt17).unwrap_or_default(),
                fmt17(p.lhs),
                fmt17(p.rhs),
                fmt17(p.slack),
                verdict.as_str().unwrap_or_default()
            ));
        }
    }
    s
}

fn identities_csv(reports: &[IdentityReport]) -> String {
    let mut s = String::from("identity,t,lhs,rhs,verdict\n");
    for r in reports {
        let id = serde_json::to_value(r.identity_id).expect("id serializes");
        let verdict = serde_json::to_value(r.verdict).expect("verdict serializes");
        for p in &r.residuals {
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                id.as_str().unwrap_or_default(),
                p.t.map(fmt17).unwrap_or_default(),
                fmt17(p.lhs),
                fmt17(p.rhs),
                verdict.as_str().unwrap_or_default()
            ));
        }
    }
    s
}

/// Execute a parsed job, writing the payload to `out`. Returns the exit code.
pub fn run(job: &JobSpec, out: &mut dyn Write) -> i32 {
    run_with_stderr(job, out, &mut io::sink())
}

fn run_with_stderr(job: &JobSpec, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match render(job) {
        Ok(s) => match out.write_all(s.as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_NUMERICAL
            }
        },
        Err(e) => write_error(job.format, &e, out, err),
    }
}

fn requested_format<T: Into<OsString> + Clone>(args: &[T]) -> OutputFormat {
    let args: Vec<OsString> = args.iter().cloned().map(Into::into).collect();
    let csv = args.windows(2).any(|w| w[0] == "--format" && w[1] == "csv") || args.iter().any(|a| a == "--format=csv");
    if csv {
        OutputFormat::Csv
    } else {
        OutputFormat::Json
    }
}

/// Parse `args` and run. Usage errors from the argument parser go to `err`
/// with exit code 2 (`--help` and `--version` print to `out` and return 0).
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<T> = args.into_iter().collect();
    match JobSpec::from_args(args.clone()) {
        Ok(job) => run_with_stderr(&job, out, err),
        Err(CliError::Clap(e)) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            code
        }
        Err(CliError::Job(e)) => write_error(requested_format(&args), &e, out, err),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["wentropy"];
        full.extend_from_slice(args);
        let code = main_with_args(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn entropy_prints_a_bare_number() {
        let (code, out, _) = run_args(&["entropy", "--dist", "exponential:lambda=1", "--measure", "weighted"]);
        assert_eq!(code, 0);
        assert_eq!(out, "2.0\n");
    }

    #[test]
    fn degenerate_grid_is_rejected() {
        let (code, out, _) = run_args(&[
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
        assert_eq!(code, 2);
        assert!(out.contains("\"invalid_input\""));
    }

    #[test]
    fn classify_json() {
        let (code, out, _) =
            run_args(&["classify", "--dist", "uniform:a=0,b=2.5", "--kind", "wurl", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["verdict"], "Decreasing");
    }

    #[test]
    fn parse_errors_exit_two() {
        assert_eq!(run_args(&["entropy", "--dist", "weibull:k=1"]).0, 2);
        assert_eq!(run_args(&["entropy", "--dist", "exponential:lambda=-1"]).0, 2);
        assert_eq!(run_args(&["entropy", "--dist", "exponential:lambda=1", "--measure", "residual"]).0, 2);
        assert_eq!(run_args(&["frobnicate"]).0, 2);
        assert_eq!(run_args(&["transform", "--dist", "exponential:lambda=1", "--affine", "-1,0"]).0, 2);
        assert_eq!(run_args(&["--help"]).0, 0);
    }

    #[test]
    fn numerical_failure_exits_three() {
        let (code, out, _) = run_args(&[
            "reconstruct",
            "--dist",
            "uniform:a=0,b=1",
            "--start",
            "0.1",
            "--end",
            "0.9999999999999",
            "--steps",
            "3",
        ]);
        assert_eq!(code, 3, "{out}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["error"]["kind"], "numerical");
    }

    #[test]
    fn csv_curve_header() {
        let (code, out, _) = run_args(&[
            "curve",
            "--dist",
            "exponential:lambda=1",
            "--measure",
            "weighted-residual",
            "--start",
            "0",
            "--end",
            "2",
            "--steps",
            "3",
            "--format",
            "csv",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().next(), Some("t,value,converged"));
        assert_eq!(out.lines().nth(2), Some("1.0,3.0,true"));
    }

    #[test]
    fn transform_matches_affine_rule() {
        let (code, out, _) = run_args(&[
            "transform",
            "--dist",
            "exponential:lambda=1",
            "--affine",
            "1,1",
            "--start",
            "2",
            "--end",
            "3",
            "--steps",
            "2",
        ]);
        assert_eq!(code, 0);
        let c: EntropyCurve = serde_json::from_str(&out).unwrap();
        assert!((c.grid[0].value - 4.0).abs() < 1e-9);
    }
}
