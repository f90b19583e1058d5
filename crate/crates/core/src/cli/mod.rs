//! Command-line front end: `volume`, `sweep` and `verify`.

pub mod record;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::dispatch::{evaluate, EvalOptions, Evaluation, Problem};
use crate::error::Error;
use crate::volume::{Method, VolumeResult, DEFAULT_TOL};

use record::{write_records, Format, RunRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "conevol", version, about = "Intersection volumes of cones with cylinders and spheres")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one (k, α) point.
    Volume(VolumeArgs),
    /// Evaluate a k × α grid, k outer.
    Sweep(SweepArgs),
    /// Run the cross-method consistency checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProblemArg {
    ConeCylinder,
    ConeSphere,
}

impl From<ProblemArg> for Problem {
    fn from(p: ProblemArg) -> Self {
        match p {
            ProblemArg::ConeCylinder => Problem::ConeCylinder,
            ProblemArg::ConeSphere => Problem::ConeSphere,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Closed,
    QuadR3,
    QuadReduced,
    Series,
    SemiAnalytic,
    #[value(name = "quad-2d")]
    Quad2d,
    Mc,
    Zeroth,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Closed => Method::ClosedForm,
            MethodArg::QuadR3 => Method::QuadR3,
            MethodArg::QuadReduced => Method::QuadReduced,
            MethodArg::Series => Method::Series,
            MethodArg::SemiAnalytic => Method::SemiAnalytic,
            MethodArg::Quad2d => Method::Quad2d,
            MethodArg::Mc => Method::MonteCarlo,
            MethodArg::Zeroth => Method::ZerothApprox,
        }
    }
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long, value_enum)]
    pub problem: ProblemArg,
    #[arg(long, value_enum)]
    pub method: MethodArg,
    /// Absolute tolerance for quadrature and series truncation.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Maximum number of series terms.
    #[arg(long, default_value_t = 64)]
    pub terms: usize,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 10_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Emit newline-delimited JSON instead of CSV.
    #[arg(long)]
    pub json: bool,
    /// Exit with status 3 on quadrature failure or series truncation.
    #[arg(long)]
    pub strict: bool,
}

impl CommonArgs {
    fn options(&self) -> EvalOptions {
        EvalOptions {
            tol: self.tol,
            terms: self.terms,
            samples: self.samples,
            seed: self.seed,
        }
    }

    fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            Format::Csv
        }
    }
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("angle").required(true).args(["alpha_deg", "alpha_rad"])))]
pub struct VolumeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub k: f64,
    /// Cone half-angle in degrees.
    #[arg(long)]
    pub alpha_deg: Option<f64>,
    /// Cone half-angle in radians.
    #[arg(long)]
    pub alpha_rad: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRange {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridRange {
    pub fn values(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.count)
    }
}

fn parse_grid(s: &str) -> Result<GridRange, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, count] = parts.as_slice() else {
        return Err(format!("expected start:stop:count, got {s:?}"));
    };
    let start: f64 = start.trim().parse().map_err(|e| format!("bad start: {e}"))?;
    let stop: f64 = stop.trim().parse().map_err(|e| format!("bad stop: {e}"))?;
    let count: usize = count.trim().parse().map_err(|e| format!("bad count: {e}"))?;
    if count == 0 {
        return Err("grid count must be at least 1".into());
    }
    Ok(GridRange { start, stop, count })
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Offset grid `start:stop:count`.
    #[arg(long, value_parser = parse_grid)]
    pub k_grid: GridRange,
    /// Angle grid `start:stop:count`, degrees unless `--radians`.
    #[arg(long, value_parser = parse_grid)]
    pub alpha_grid: GridRange,
    #[arg(long)]
    pub radians: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Coarser grids and fewer Monte Carlo samples.
    #[arg(long)]
    pub fast: bool,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

/// `count` evenly spaced values from `start` to `stop` inclusive; the last
/// value is `stop` exactly. A single point is `start`.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count)
            .map(|i| {
                if i + 1 == count {
                    stop
                } else {
                    start + (stop - start) * i as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}

enum PointOutcome {
    Done(Evaluation),
    /// Numerical trouble; the record still carries the best estimate.
    Degraded(Evaluation, String),
    Invalid(String),
}

fn evaluate_point(problem: Problem, method: Method, k: f64, alpha: f64, opts: &EvalOptions) -> PointOutcome {
    match evaluate(problem, method, k, alpha, opts) {
        Ok(ev) if ev.truncated() => {
            let msg = format!(
                "series truncated at {} terms before reaching tolerance (k={k}, alpha={alpha})",
                ev.n_terms.unwrap_or(0)
            );
            PointOutcome::Degraded(ev, msg)
        }
        Ok(ev) => PointOutcome::Done(ev),
        Err(Error::Quadrature {
            value,
            error_estimate,
            evaluations,
            ..
        }) => {
            let ev = Evaluation {
                result: VolumeResult {
                    volume: value,
                    method,
                    error_estimate,
                    evaluations,
                },
                seed: None,
                n_terms: None,
                breakdown: None,
            };
            let msg = format!("quadrature did not converge (k={k}, alpha={alpha})");
            PointOutcome::Degraded(ev, msg)
        }
        Err(e @ Error::Domain(_)) => PointOutcome::Invalid(e.to_string()),
        Err(e) => PointOutcome::Invalid(e.to_string()),
    }
}

fn emit_points<O: Write, E: Write>(
    common: &CommonArgs,
    points: &[(f64, f64)],
    out: &mut O,
    err: &mut E,
) -> i32 {
    let problem: Problem = common.problem.into();
    let method: Method = common.method.into();
    if !problem.supports(method) {
        let _ = writeln!(err, "error: method {method} is not available for {problem}");
        return EXIT_USAGE;
    }
    if !(common.tol > 0.0) {
        let _ = writeln!(err, "error: --tol must be positive");
        return EXIT_USAGE;
    }
    let opts = common.options();
    let outcomes: Vec<PointOutcome> = points
        .par_iter()
        .map(|&(k, a)| evaluate_point(problem, method, k, a, &opts))
        .collect();

    let mut records = Vec::with_capacity(points.len());
    let mut degraded = false;
    for (&(k, a), outcome) in points.iter().zip(outcomes) {
        match outcome {
            PointOutcome::Done(ev) => records.push(RunRecord::new(problem, k, a, &ev)),
            PointOutcome::Degraded(ev, msg) => {
                let _ = writeln!(err, "warning: {msg}");
                degraded = true;
                records.push(RunRecord::new(problem, k, a, &ev));
            }
            PointOutcome::Invalid(msg) => {
                let _ = writeln!(err, "error: {msg}");
                return EXIT_USAGE;
            }
        }
    }
    if let Err(e) = write_records(&mut *out, &records, common.format()) {
        let _ = writeln!(err, "error: {e}");
        return EXIT_USAGE;
    }
    if degraded && common.strict {
        EXIT_NUMERICAL
    } else {
        EXIT_OK
    }
}

fn cmd_volume<O: Write, E: Write>(args: &VolumeArgs, out: &mut O, err: &mut E) -> i32 {
    let alpha = match (args.alpha_deg, args.alpha_rad) {
        (Some(d), None) => d.to_radians(),
        (None, Some(r)) => r,
        _ => unreachable!("clap enforces exactly one angle flag"),
    };
    emit_points(&args.common, &[(args.k, alpha)], out, err)
}

fn cmd_sweep<O: Write, E: Write>(args: &SweepArgs, out: &mut O, err: &mut E) -> i32 {
    let ks = args.k_grid.values();
    let alphas: Vec<f64> = args
        .alpha_grid
        .values()
        .into_iter()
        .map(|a| if args.radians { a } else { a.to_radians() })
        .collect();
    let points: Vec<(f64, f64)> = ks.iter().flat_map(|&k| alphas.iter().map(move |&a| (k, a))).collect();
    emit_points(&args.common, &points, out, err)
}

fn cmd_verify<O: Write>(args: &VerifyArgs, out: &mut O) -> i32 {
    let outcomes = verify::run_checks(&verify::VerifyConfig {
        fast: args.fast,
        seed: args.seed,
    });
    let _ = verify::print_table(&mut *out, &outcomes);
    if outcomes.iter().all(|c| c.passed) {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    }
}

/// Parses `argv` and runs the selected subcommand, returning the exit code.
pub fn run<I, T, O, E>(argv: I, out: &mut O, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    O: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                EXIT_USAGE
            } else {
                let _ = write!(out, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    match &cli.command {
        Command::Volume(a) => cmd_volume(a, out, err),
        Command::Sweep(a) => cmd_sweep(a, out, err),
        Command::Verify(a) => cmd_verify(a, out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("conevol").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(
            parse_grid("0:1:3").unwrap(),
            GridRange {
                start: 0.0,
                stop: 1.0,
                count: 3
            }
        );
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("a:1:2").is_err());
        assert_eq!(linspace(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
        assert_eq!(linspace(2.0, 3.0, 1), vec![2.0]);
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_capture(&["volume", "--problem", "cone-cylinder"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["bogus"]).0, EXIT_USAGE);
        let (code, _, err) = run_capture(&[
            "volume", "--problem", "cone-cylinder", "--method", "series", "--k", "0.5", "--alpha-deg", "45",
        ]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("not available"));
        let (code, _, _) = run_capture(&[
            "volume", "--problem", "cone-sphere", "--method", "series", "--k", "1.5", "--alpha-deg", "45",
        ]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = run_capture(&[
            "volume", "--problem", "cone-sphere", "--method", "series", "--k", "0.5", "--alpha-deg", "45",
            "--alpha-rad", "0.7",
        ]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn strict_truncation_exits_3() {
        let args = [
            "volume", "--problem", "cone-sphere", "--method", "series", "--k", "1", "--alpha-deg", "90", "--terms",
            "4",
        ];
        let (code, out, err) = run_capture(&args);
        assert_eq!(code, EXIT_OK);
        assert!(err.contains("truncated"));
        assert_eq!(out.lines().count(), 2);
        let mut strict = args.to_vec();
        strict.push("--strict");
        assert_eq!(run_capture(&strict).0, EXIT_NUMERICAL);
    }

    #[test]
    fn help_is_not_an_error() {
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("sweep"));
    }
}
