//! The `guesswork` command line: generate, solve, check and simulate.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::costs::CostFunction;
use crate::ensembles::{
    antiprism_h_bound, constant_overlap_check, is_uniform_prior, recognize_antiprism, Ensemble, EnsembleFamilySpec,
    Family, Lambda,
};
use crate::error::{Error, Result};
use crate::guesswork::{
    best_candidate_report, min_guesswork_general, min_guesswork_qubit, GuessworkReport, Method, SolveMethod,
    SolverConfig,
};
use crate::io::{read_cost_arg, read_ensemble, to_json_string, write_json, EnsembleJson, ReportJson};
use crate::operators::EIGEN_TOL;
use crate::qap::{bloch_gram, conjugate, detect_benevolence, factorial_cap_from_env, is_benevolent, BENEVOLENCE_TOL};
use crate::simulate::simulate;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNVERIFIED: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "guesswork", version, about = "Minimum guesswork of quantum ensembles")]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Tolerance for PSD and spectral checks.
    #[arg(long, global = true, default_value_t = EIGEN_TOL)]
    pub eigen_tol: f64,
    /// Tolerance for the Toeplitz and monotonicity tests.
    #[arg(long, global = true, default_value_t = BENEVOLENCE_TOL)]
    pub benevolence_tol: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write an ensemble file for a named family.
    Generate(GenerateArgs),
    /// Compute the minimum guesswork and an optimal measurement.
    Solve(SolveArgs),
    /// Report prior, overlap and benevolence structure of an ensemble.
    Check(CheckArgs),
    /// Monte Carlo estimate of the optimal strategy's guesswork.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FamilyArg {
    #[value(name = "polygon_antiprism")]
    PolygonAntiprism,
    Sic,
    Mub,
    Random,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MethodArg {
    Auto,
    Brute,
    Benevolent,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, required_unless_present = "spec")]
    pub family: Option<FamilyArg>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    pub h: f64,
    /// `pure` or a number.
    #[arg(long, default_value = "pure")]
    pub lambda: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Family spec JSON file, instead of the flags above.
    #[arg(long, conflicts_with = "family")]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub ensemble: PathBuf,
    /// `identity` or a cost JSON file.
    #[arg(long, default_value = "identity")]
    pub cost: String,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub ensemble: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub ensemble: PathBuf,
    #[arg(long, default_value = "identity")]
    pub cost: String,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Numerical(_) => EXIT_NUMERICAL,
        _ => EXIT_INPUT,
    }
}

/// Parses `args` and runs the command, writing the human-readable output to
/// `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match CliConfig::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_INPUT;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(cli: &CliConfig, out: &mut dyn Write) -> Result<i32> {
    for (name, tol) in [("eigen-tol", cli.eigen_tol), ("benevolence-tol", cli.benevolence_tol)] {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::InvalidArgument(format!("--{name} must be positive, got {tol}")));
        }
    }
    let config = SolverConfig {
        factorial_cap: factorial_cap_from_env(),
        eigen_tol: cli.eigen_tol,
        benevolence_tol: cli.benevolence_tol,
    };
    match &cli.command {
        Command::Generate(a) => cmd_generate(a, &config, out),
        Command::Solve(a) => cmd_solve(a, &config, out),
        Command::Check(a) => cmd_check(a, &config, out),
        Command::Simulate(a) => cmd_simulate(a, &config, out),
    }
}

fn require_file(path: &Path) -> Result<()> {
    if !path.is_file() {
        return Err(Error::InvalidArgument(format!("no such file: {}", path.display())));
    }
    Ok(())
}

fn family_spec(a: &GenerateArgs) -> Result<EnsembleFamilySpec> {
    if let Some(path) = &a.spec {
        require_file(path)?;
        return Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?);
    }
    let family = match a.family.expect("clap requires --family without --spec") {
        FamilyArg::PolygonAntiprism => Family::PolygonAntiprism,
        FamilyArg::Sic => Family::Sic,
        FamilyArg::Mub => Family::Mub,
        FamilyArg::Random => Family::Random,
    };
    let lambda: Lambda = a.lambda.parse()?;
    Ok(EnsembleFamilySpec { family, m: a.m, h: a.h, lambda, seed: a.seed, dim: a.dim })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_generate(a: &GenerateArgs, config: &SolverConfig, out: &mut dyn Write) -> Result<i32> {
    let spec = family_spec(a)?;
    if spec.family == Family::PolygonAntiprism {
        if let Some(m) = spec.m.filter(|m| m % 2 == 1) {
            if spec.h != 0.0 {
                return Err(Error::Family(format!(
                    "h = {} exceeds the h-bound 0 for odd M = {m}; odd polygons must be planar",
                    spec.h
                )));
            }
        }
    }
    let e = spec.generate()?;
    if let Some(path) = &a.out {
        write_json(path, &EnsembleJson::from_ensemble(&e))?;
    }
    writeln!(out, "{:<20}{}", "M", e.len())?;
    writeln!(out, "{:<20}{}", "dim", e.dim())?;
    writeln!(out, "{:<20}{}", "uniform prior", yes_no(is_uniform_prior(&e, config.eigen_tol)))?;
    if spec.family == Family::PolygonAntiprism {
        let bound = antiprism_h_bound(e.len());
        let status = if spec.h <= bound + config.benevolence_tol { "within" } else { "above" };
        writeln!(out, "{:<20}{} ({status} h-bound {bound:.17})", "h", spec.h)?;
    }
    if let Some(path) = &a.out {
        writeln!(out, "{:<20}{}", "written", path.display())?;
    }
    Ok(EXIT_OK)
}

fn load_problem(ensemble: &Path, cost: &str) -> Result<(Ensemble, CostFunction)> {
    require_file(ensemble)?;
    let e = read_ensemble(ensemble)?;
    if cost != "identity" {
        require_file(Path::new(cost))?;
    }
    let c = read_cost_arg(cost, e.len())?;
    if c.len() != e.len() {
        return Err(Error::Size { expected: e.len(), got: c.len() });
    }
    if !c.is_balanced() {
        return Err(Error::NotBalanced);
    }
    Ok((e, c))
}

/// Qubit ensembles with a uniform prior go through the QAP solver; others
/// through the general condition check.
pub fn solve_problem(
    e: &Ensemble,
    c: &CostFunction,
    method: SolveMethod,
    config: &SolverConfig,
) -> Result<(GuessworkReport, bool)> {
    let qubit = e.dim() == 2 && (method != SolveMethod::Auto || is_uniform_prior(e, config.eigen_tol));
    if qubit {
        let r = min_guesswork_qubit(e, c, method, config)?;
        let verified = r.condition_verified || r.method != Method::ConditionCheckOnly;
        return Ok((r, verified));
    }
    if method == SolveMethod::Benevolent {
        return Err(Error::Unavailable(
            "the benevolent fast path needs a qubit ensemble with uniform prior".into(),
        ));
    }
    match min_guesswork_general(e, c, None, config)? {
        Some(r) => Ok((r, true)),
        None => Ok((best_candidate_report(e, c, config)?, false)),
    }
}

fn print_report(out: &mut dyn Write, r: &GuessworkReport, verified: bool) -> Result<()> {
    let label = if verified { "value" } else { "unverified upper bound" };
    writeln!(out, "{label:<24}{:.17}", r.value)?;
    writeln!(out, "{:<24}{:.17}", "mean cost", r.mean_cost)?;
    writeln!(out, "{:<24}{:.17}", "trace-norm term", r.trace_norm_term)?;
    writeln!(out, "{:<24}{}", "numbering", r.optimal_numbering)?;
    writeln!(out, "{:<24}{}", "method", r.method.as_str())?;
    writeln!(out, "{:<24}{}", "condition verified", r.condition_verified)?;
    writeln!(out, "{:<24}{}", "measurement outcomes", r.measurement.len())?;
    Ok(())
}

fn cmd_solve(a: &SolveArgs, config: &SolverConfig, out: &mut dyn Write) -> Result<i32> {
    let (e, c) = load_problem(&a.ensemble, &a.cost)?;
    let method = match a.method {
        MethodArg::Auto => SolveMethod::Auto,
        MethodArg::Brute => SolveMethod::Brute,
        MethodArg::Benevolent => SolveMethod::Benevolent,
    };
    let (report, verified) = solve_problem(&e, &c, method, config)?;
    if let Some(path) = &a.out {
        write_json(path, &ReportJson::from(&report))?;
    }
    print_report(out, &report, verified)?;
    Ok(if verified { EXIT_OK } else { EXIT_UNVERIFIED })
}

fn cmd_check(a: &CheckArgs, config: &SolverConfig, out: &mut dyn Write) -> Result<i32> {
    require_file(&a.ensemble)?;
    let e = read_ensemble(&a.ensemble)?;
    writeln!(out, "{:<24}{}", "M", e.len())?;
    writeln!(out, "{:<24}{}", "dim", e.dim())?;
    writeln!(out, "{:<24}{}", "uniform prior", is_uniform_prior(&e, config.eigen_tol))?;
    if e.dim() != 2 {
        writeln!(out, "Bloch checks skipped: dim = {} (qubit ensembles only)", e.dim())?;
        return Ok(EXIT_OK);
    }
    writeln!(out, "{:<24}{}", "constant overlap", constant_overlap_check(&e, config.benevolence_tol)?)?;
    let neg_gram = -bloch_gram(&e)?;
    let given = detect_benevolence(&neg_gram, config.benevolence_tol, config.factorial_cap);
    // flags refer to the relabeled matrix when a witness exists
    let shown = match &given.witness_permutation {
        Some(w) => is_benevolent(&conjugate(&neg_gram, w), config.benevolence_tol),
        None => given.clone(),
    };
    writeln!(out, "{:<24}{}", "benevolent", given.witness_permutation.is_some())?;
    writeln!(out, "{:<24}{}", "symmetric toeplitz", shown.is_symmetric_toeplitz)?;
    writeln!(out, "{:<24}{}", "property1_ok", shown.property1_ok)?;
    writeln!(out, "{:<24}{}", "property2_ok", shown.property2_ok)?;
    let failing = shown.failing_index.map_or("-".to_string(), |i| i.to_string());
    writeln!(out, "{:<24}{failing}", "failing index")?;
    let witness = given.witness_permutation.as_ref().map_or("-".to_string(), |w| w.to_string());
    writeln!(out, "{:<24}{witness}", "witness")?;
    match recognize_antiprism(&e, config.benevolence_tol) {
        Some(found) => {
            let bound = antiprism_h_bound(found.m);
            let status = if found.h <= bound + config.benevolence_tol { "within" } else { "above" };
            writeln!(out, "{:<24}polygon_antiprism M={} h={:.17}", "family", found.m, found.h)?;
            writeln!(out, "{:<24}{bound:.17} ({status})", "h-bound")?;
        }
        None => writeln!(out, "{:<24}unrecognized", "family")?,
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SimulationJson {
    estimate: f64,
    std_error: Option<f64>,
    samples: u64,
    seed: u64,
    analytic: f64,
    z_score: Option<f64>,
}

fn cmd_simulate(a: &SimulateArgs, config: &SolverConfig, out: &mut dyn Write) -> Result<i32> {
    let (e, c) = load_problem(&a.ensemble, &a.cost)?;
    let (report, verified) = solve_problem(&e, &c, SolveMethod::Auto, config)?;
    let sim = simulate(&e, &c, &report.measurement, a.samples, a.seed)?;
    let z_score = sim.std_error.filter(|s| *s > 0.0).map(|s| (sim.estimate - report.value) / s);
    let result = SimulationJson {
        estimate: sim.estimate,
        std_error: sim.std_error,
        samples: sim.samples,
        seed: a.seed,
        analytic: report.value,
        z_score,
    };
    if let Some(path) = &a.out {
        write_json(path, &result)?;
    }
    let na = || "unavailable".to_string();
    writeln!(out, "{:<16}{:.17}", "estimate", result.estimate)?;
    writeln!(out, "{:<16}{}", "std error", result.std_error.map_or_else(na, |s| format!("{s:.17}")))?;
    writeln!(out, "{:<16}{:.17}", "analytic", result.analytic)?;
    writeln!(out, "{:<16}{}", "z-score", result.z_score.map_or_else(na, |z| format!("{z:.6}")))?;
    writeln!(out, "{:<16}{}", "samples", result.samples)?;
    Ok(if verified { EXIT_OK } else { EXIT_UNVERIFIED })
}

/// Pretty JSON of an ensemble, as written by `generate`.
pub fn ensemble_json(e: &Ensemble) -> Result<String> {
    to_json_string(&EnsembleJson::from_ensemble(e))
}
