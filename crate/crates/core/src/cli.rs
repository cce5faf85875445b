//! `tempent` command-line front end.
//!
//! Exit codes: 0 on success, 1 when a check fails or misses its tolerance,
//! 2 on usage or validation errors.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::axioms::{self, AxiomReport};
use crate::entropy::{entropy, make_dist, EntropyParams};
use crate::error::Error;
use crate::fracderiv::{self, DEFAULT_QUAD_TOL};
use crate::lesche::{self, Family, StabilityRecord, StructuredPair};

pub const SWEEP_HEADER: &str = "family,n,delta,sigma,lambda,s_p,s_p_prime,ratio";
pub const FRAC_HEADER: &str = "p,sigma,lambda,t,numeric,closed_form,rel_err";
pub const AXIOM_HEADER: &str = "axiom,config,samples,worst_violation,pass";

const DEFAULT_SIGMAS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];
const DEFAULT_LAMBDAS: [f64; 3] = [0.0, 1.0, 5.0];
const CONCAVITY_GRID_POINTS: usize = 199;
const FRAC_TIMES: [f64; 3] = [-1.0, -2.0, 0.5];
const FRAC_ABS_TOL: f64 = 1e-9;
const FRAC_REL_TOL: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(
    name = "tempent",
    version,
    about = "Tempered two-parameter entropy toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the entropy of one distribution.
    Entropy(EntropyArgs),
    /// Run the axiom and inequality checks over seeded samples.
    CheckAxioms(AxiomArgs),
    /// Stability ratio of the structured perturbation families over an n grid.
    Sweep(SweepArgs),
    /// Hill-climbing search for a large stability ratio.
    Search(SearchArgs),
    /// Compare the numerical tempered derivative with its closed form.
    VerifyFrac(FracArgs),
}

#[derive(Debug, Args)]
struct Output {
    /// Write CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EntropyArgs {
    #[arg(long, allow_negative_numbers = true)]
    sigma: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    lambda: f64,
    /// Comma-separated probabilities.
    #[arg(long)]
    dist: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct AxiomArgs {
    /// Single order; defaults to the grid 0.25,0.5,0.75,1.
    #[arg(long, allow_negative_numbers = true)]
    sigma: Option<f64>,
    /// Single tempering; defaults to the grid 0,1,5.
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[arg(long, default_value = "2,5,10")]
    n: String,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Replace every check's pass threshold.
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, default_value = "A,B")]
    family: String,
    #[arg(long, allow_negative_numbers = true)]
    sigma: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    lambda: f64,
    #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
    delta: f64,
    #[arg(long)]
    n: String,
    /// Add Rényi rows of this order as a negative control.
    #[arg(long = "control-renyi")]
    control_renyi: Option<f64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long, allow_negative_numbers = true)]
    sigma: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    lambda: f64,
    #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
    delta: f64,
    #[arg(long)]
    n: usize,
    /// Hill-climbing iterations.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct FracArgs {
    /// Single order in (0, 1); defaults to 0.1,...,0.9.
    #[arg(long, allow_negative_numbers = true)]
    sigma: Option<f64>,
    /// Single tempering; defaults to 0,0.5,1,2.
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// Relative tolerance for the comparison.
    #[arg(long, default_value_t = FRAC_REL_TOL)]
    tol: f64,
    #[command(flatten)]
    output: Output,
}

/// Failure of a subcommand, mapped onto an exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Check(String),
}

impl Failure {
    fn flag(flag: &str, err: impl std::fmt::Display) -> Self {
        Failure::Usage(format!("--{flag}: {err}"))
    }
}

type Outcome = Result<(String, bool), Failure>;

/// Formats a real with eight decimals, switching to scientific notation
/// outside `[1e-3, 1e7)`.
pub fn fmt_real(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-3..1e7).contains(&a) {
        format!("{v:.8}")
    } else {
        format!("{v:.8e}")
    }
}

fn parse_list<T: std::str::FromStr>(flag: &str, raw: &str) -> Result<Vec<T>, Failure>
where
    T::Err: std::fmt::Display,
{
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse::<T>()
                .map_err(|e| Failure::flag(flag, format!("'{s}': {e}")))
        })
        .collect()
}

fn params(sigma: f64, lambda: f64) -> Result<EntropyParams, Failure> {
    EntropyParams::new(sigma, lambda).map_err(|e| {
        let flag = if sigma > 0.0 && sigma <= 1.0 {
            "lambda"
        } else {
            "sigma"
        };
        Failure::flag(flag, e)
    })
}

fn run_entropy(a: &EntropyArgs) -> Outcome {
    let weights: Vec<f64> = parse_list("dist", &a.dist)?;
    let p = make_dist(&weights).map_err(|e| Failure::flag("dist", e))?;
    let pr = params(a.sigma, a.lambda)?;
    Ok((format!("{:.8}\n", entropy(&p, &pr).get()), true))
}

fn axiom_row(out: &mut String, report: &AxiomReport, config: &str) {
    let _ = writeln!(
        out,
        "{},{},{},{},{}",
        report.axiom,
        config,
        report.samples_checked,
        fmt_real(report.worst_violation),
        report.passed()
    );
}

fn run_axioms(a: &AxiomArgs) -> Outcome {
    let ns: Vec<usize> = parse_list("n", &a.n)?;
    if let Some(&bad) = ns.iter().find(|&&n| n < 2) {
        return Err(Failure::flag("n", format!("need n >= 2, got {bad}")));
    }
    if a.samples == 0 {
        return Err(Failure::flag("samples", "must be >= 1"));
    }
    if let Some(t) = a.tol {
        if !t.is_finite() {
            return Err(Failure::flag("tol", "must be finite"));
        }
    }
    let sigmas = a.sigma.map_or(DEFAULT_SIGMAS.to_vec(), |s| vec![s]);
    let lambdas = a.lambda.map_or(DEFAULT_LAMBDAS.to_vec(), |l| vec![l]);

    let mut out = String::from(AXIOM_HEADER);
    out.push('\n');
    let mut all_pass = true;
    for &sigma in &sigmas {
        for &lambda in &lambdas {
            let pr = params(sigma, lambda)?;
            for &n in &ns {
                let config = format!("n={n};sigma={sigma};lambda={lambda}");
                let reports = axioms::axiom_suite(n, &pr, a.samples, a.seed, CONCAVITY_GRID_POINTS)
                    .map_err(|e| Failure::Usage(e.to_string()))?;
                for r in reports {
                    let r = match a.tol {
                        Some(t) => r.with_tolerance(t),
                        None => r,
                    };
                    all_pass &= r.passed();
                    axiom_row(&mut out, &r, &config);
                }
            }
        }
    }
    Ok((out, all_pass))
}

fn sweep_row(out: &mut String, r: &StabilityRecord) {
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},{},{}",
        r.label(),
        r.n,
        fmt_real(r.delta),
        fmt_real(r.sigma),
        fmt_real(r.lambda),
        fmt_real(r.s_p),
        fmt_real(r.s_p_prime),
        fmt_real(r.ratio)
    );
}

fn run_sweep(a: &SweepArgs) -> Outcome {
    let families: Vec<Family> = parse_list("family", &a.family)?;
    if families.contains(&Family::RandomSearch) {
        return Err(Failure::flag("family", "only A and B can be swept"));
    }
    let ns: Vec<usize> = parse_list("n", &a.n)?;
    let pr = params(a.sigma, a.lambda)?;
    let records = lesche::sweep(&families, &ns, a.delta, &pr, a.control_renyi).map_err(|e| {
        let flag = match &e {
            Error::Domain(m) if m.contains("delta") => "delta",
            Error::Domain(m) if m.contains("Renyi") => "control-renyi",
            _ => "n",
        };
        Failure::flag(flag, e)
    })?;
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in &records {
        sweep_row(&mut out, r);
    }
    Ok((out, true))
}

fn run_search(a: &SearchArgs) -> Outcome {
    let pr = params(a.sigma, a.lambda)?;
    let found = lesche::random_pair_search(a.n, a.delta, &pr, a.samples, a.seed).map_err(|e| {
        let flag = match &e {
            Error::TooFewOutcomes(_) => "n",
            Error::Domain(m) if m.contains("iterations") => "samples",
            _ => "delta",
        };
        Failure::flag(flag, e)
    })?;
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    sweep_row(&mut out, &found.record);
    for family in [Family::CertaintyA, Family::UniformB] {
        if let Ok(sp) = StructuredPair::new(family, a.n, a.delta) {
            let r =
                lesche::structured_ratio(&sp, &pr).map_err(|e| Failure::Usage(e.to_string()))?;
            sweep_row(&mut out, &r);
        }
    }
    Ok((out, true))
}

fn run_verify_frac(a: &FracArgs) -> Outcome {
    if let Some(s) = a.sigma {
        if !(s > 0.0 && s < 1.0) {
            return Err(Failure::flag("sigma", format!("{s} must lie in (0, 1)")));
        }
    }
    if let Some(l) = a.lambda {
        if !(l >= 0.0 && l.is_finite()) {
            return Err(Failure::flag(
                "lambda",
                format!("{l} must be finite and >= 0"),
            ));
        }
    }
    if !(a.tol > 0.0) {
        return Err(Failure::flag("tol", "must be > 0"));
    }
    let sigmas = a.sigma.map_or_else(fracderiv::tenths, |s| vec![s]);
    let lambdas = a
        .lambda
        .map_or(fracderiv::LAMBDA_GRID.to_vec(), |l| vec![l]);
    let rows = fracderiv::verify_grid(
        &fracderiv::tenths(),
        &sigmas,
        &lambdas,
        &FRAC_TIMES,
        DEFAULT_QUAD_TOL,
    )
    .map_err(|e| Failure::Check(e.to_string()))?;

    let mut out = String::from(FRAC_HEADER);
    out.push('\n');
    let mut all_pass = true;
    for r in &rows {
        all_pass &= r.within(a.tol, FRAC_ABS_TOL);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt_real(r.p),
            fmt_real(r.sigma),
            fmt_real(r.lambda),
            fmt_real(r.t),
            fmt_real(r.numeric),
            fmt_real(r.closed_form),
            fmt_real(r.rel_err)
        );
    }
    Ok((out, all_pass))
}

fn output_of(cmd: &Command) -> &Output {
    match cmd {
        Command::Entropy(a) => &a.output,
        Command::CheckAxioms(a) => &a.output,
        Command::Sweep(a) => &a.output,
        Command::Search(a) => &a.output,
        Command::VerifyFrac(a) => &a.output,
    }
}

/// Runs the tool on `argv` (including the program name) and returns the
/// process exit code.
pub fn run_with<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    0
                }
                _ => {
                    let msg = e.to_string();
                    let line = msg.lines().next().unwrap_or("usage error");
                    let _ = writeln!(stderr, "{line}");
                    2
                }
            };
        }
    };

    let outcome = match &cli.command {
        Command::Entropy(a) => run_entropy(a),
        Command::CheckAxioms(a) => run_axioms(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Search(a) => run_search(a),
        Command::VerifyFrac(a) => run_verify_frac(a),
    };

    match outcome {
        Ok((text, passed)) => {
            match &output_of(&cli.command).out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text.as_bytes()) {
                        let _ = writeln!(stderr, "error: --out: {}: {e}", path.display());
                        return 2;
                    }
                }
                None => {
                    if stdout.write_all(text.as_bytes()).is_err() {
                        return 2;
                    }
                }
            }
            if passed {
                0
            } else {
                let _ = writeln!(stderr, "check failed");
                1
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(Failure::Check(msg)) => {
            let _ = writeln!(stderr, "check failed: {msg}");
            1
        }
    }
}

/// [`run_with`] on the process's standard streams.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["tempent"];
        argv.extend_from_slice(args);
        let code = run_with(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn entropy_command() {
        let (code, out, _) = call(&[
            "entropy", "--sigma", "0.5", "--lambda", "0", "--dist", "0.5,0.5",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out, "0.83255461\n");
        let (code, out, _) = call(&[
            "entropy", "--sigma", "1", "--lambda", "3", "--dist", "0.5,0.5",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out, "0.69314718\n");
    }

    #[test]
    fn usage_errors_name_the_flag() {
        let (code, _, err) = call(&["entropy", "--sigma", "0.5", "--dist", "0.6,0.6"]);
        assert_eq!(code, 2);
        assert!(err.contains("--dist"), "{err}");
        let (code, _, err) = call(&["entropy", "--sigma", "1.5", "--dist", "0.5,0.5"]);
        assert_eq!(code, 2);
        assert!(err.contains("--sigma"), "{err}");
        let (code, _, err) = call(&[
            "entropy", "--sigma", "0.5", "--lambda", "-1", "--dist", "0.5,0.5",
        ]);
        assert_eq!(code, 2);
        assert!(err.contains("--lambda"), "{err}");
        let (code, _, err) = call(&["sweep", "--sigma", "0.5", "--n", "10,x"]);
        assert_eq!(code, 2);
        assert!(err.contains("--n"), "{err}");
        let (code, _, _) = call(&["frobnicate"]);
        assert_eq!(code, 2);
        let (code, _, err) = call(&["sweep", "--sigma", "0.5", "--n", "10", "--delta", "3"]);
        assert_eq!(code, 2);
        assert!(err.contains("--delta"), "{err}");
        assert_eq!(err.lines().count(), 1);
    }

    #[test]
    fn sweep_csv_shape() {
        let (code, out, _) = call(&[
            "sweep",
            "--family",
            "A",
            "--sigma",
            "0.5",
            "--lambda",
            "1",
            "--delta",
            "1e-3",
            "--n",
            "10,100,1000",
        ]);
        assert_eq!(code, 0);
        let lines: Vec<_> = out.lines().collect();
        assert_eq!(lines[0], SWEEP_HEADER);
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("A,10,"));
        let (_, out, _) = call(&[
            "sweep",
            "--sigma",
            "0.5",
            "--n",
            "10,100",
            "--control-renyi",
            "0.5",
        ]);
        let fams: Vec<_> = out
            .lines()
            .skip(1)
            .map(|l| l.split(',').next().unwrap())
            .collect();
        assert_eq!(
            fams,
            ["A", "A", "A_renyi", "A_renyi", "B", "B", "B_renyi", "B_renyi"]
        );
    }

    #[test]
    fn axioms_pass_and_forced_failure() {
        let base = [
            "check-axioms",
            "--sigma",
            "0.5",
            "--lambda",
            "1",
            "--n",
            "3",
            "--samples",
            "200",
        ];
        let (code, out, _) = call(&base);
        assert_eq!(code, 0, "{out}");
        assert!(out.lines().skip(1).all(|l| l.ends_with(",true")));
        let mut failing = base.to_vec();
        failing.extend(["--tol", "-1"]);
        let (code, out, _) = call(&failing);
        assert_eq!(code, 1);
        assert!(out.lines().skip(1).any(|l| l.ends_with(",false")));
    }

    #[test]
    fn verify_frac_pass_and_forced_failure() {
        let (code, out, _) = call(&["verify-frac", "--sigma", "0.5", "--lambda", "1"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().next().unwrap(), FRAC_HEADER);
        assert_eq!(out.lines().count(), 1 + 9 * FRAC_TIMES.len());
        let (code, _, _) = call(&[
            "verify-frac",
            "--sigma",
            "0.5",
            "--lambda",
            "1",
            "--tol",
            "1e-30",
        ]);
        assert_eq!(code, 1);
        let (code, _, err) = call(&["verify-frac", "--sigma", "1"]);
        assert_eq!(code, 2);
        assert!(err.contains("--sigma"));
    }

    #[test]
    fn search_rows() {
        let (code, out, _) = call(&[
            "search",
            "--n",
            "5",
            "--delta",
            "0.1",
            "--sigma",
            "0.5",
            "--samples",
            "300",
        ]);
        assert_eq!(code, 0);
        let fams: Vec<_> = out
            .lines()
            .skip(1)
            .map(|l| l.split(',').next().unwrap())
            .collect();
        assert_eq!(fams, ["search", "A", "B"]);
    }

    #[test]
    fn number_format() {
        assert_eq!(fmt_real(0.0), "0.00000000");
        assert_eq!(fmt_real(0.5), "0.50000000");
        assert_eq!(fmt_real(1e-4), "1.00000000e-4");
        assert_eq!(fmt_real(-2.5e-13), "-2.50000000e-13");
    }
}
