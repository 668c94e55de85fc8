//! Command-line front end. [`run`] takes the argument list and two sinks and
//! returns the process exit code, so the binary stays a one-liner and tests
//! can drive every subcommand in-process.
//!
//! Exit codes: 0 success, 1 a verification assertion failed, 2 usage or
//! domain error, 3 numerical failure (quadrature or stiffness).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::ode::{
    blowup_report, classify_initial, integrate, BlowupDirection, CauchyProblem, Direction, IntegratorOptions,
    TerminalStatus, Trajectory,
};
use crate::partial_fractions::KVector;
use crate::verify::{
    cross_route_suite, repetition_consistency_suite, run_blowup_suite, run_inequality_suite, SuiteConfig,
};
use crate::weights::{
    analyze_point, classify_by_gap, lagrange_weights, repetition_gap, repetition_weights, RepetitionSpec, XVector,
};
use crate::{Error, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Environment variable supplying the default seed.
pub const SEED_ENV: &str = "BLOWUPLAB_SEED";

#[derive(Debug, Parser)]
#[command(name = "blowuplab", version, about = "Generalized exponential inequality and logistic blow-up toolkit")]
struct Cli {
    /// JSON file whose fields fill in any flag not given on the command line.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the Lagrange weights a_i and their sum.
    Weights(PointArgs),
    /// Classify a point and print both exponents and the gap.
    Check(CheckArgs),
    /// Closed-form blow-up time, bound, and numerical estimate.
    Blowup(ProblemArgs),
    /// Integrate the Cauchy problem and write the trajectory.
    Simulate(SimulateArgs),
    /// Randomized verification suites.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Debug, Args)]
struct PointArgs {
    /// Comma-separated coordinates, e.g. `1,2,3`.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Comma-separated multiplicities for repeated nodes.
    #[arg(long)]
    r: Option<String>,
}

#[derive(Debug, Args)]
struct ProblemArgs {
    /// Comma-separated carrying capacities, ascending.
    #[arg(long)]
    k: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    y0: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum DirectionArg {
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, value_enum)]
    direction: Option<DirectionArg>,
    /// Length of the time window.
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum VerifyCommand {
    /// The generalized inequality on random points.
    Gen(SuiteArgs),
    /// Blow-up times against bound, quadrature and integration.
    Blowup(SuiteArgs),
    /// Lagrange-weight sum against the divided-difference route.
    Crossroute(SuiteArgs),
    /// Repeated-node weights and gaps.
    Repetition(SuiteArgs),
}

#[derive(Debug, Args)]
struct SuiteArgs {
    /// Dimension range such as `1..6`, or a single dimension.
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    /// Same as `--samples`.
    #[arg(long)]
    cases: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    x_max: Option<f64>,
    /// Add zero-coordinate points and points next to them.
    #[arg(long)]
    equality: bool,
    /// Add mixed-sign points and the known counterexamples.
    #[arg(long)]
    extended: bool,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

/// A list given either as a JSON array or as a comma-separated string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ListValue {
    Numbers(Vec<f64>),
    Text(String),
}

impl ListValue {
    fn into_text(self) -> String {
        match self {
            ListValue::Text(s) => s,
            ListValue::Numbers(v) => v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
        }
    }
}

/// Dimension given as an integer, a `lo..hi` string or a two-element array.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RangeValue {
    Single(usize),
    Pair([usize; 2]),
    Text(String),
}

impl RangeValue {
    fn into_text(self) -> String {
        match self {
            RangeValue::Single(n) => n.to_string(),
            RangeValue::Pair([lo, hi]) => format!("{lo}..{hi}"),
            RangeValue::Text(s) => s,
        }
    }
}

/// Values read from `--config`; flags always win.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    k: Option<ListValue>,
    y0: Option<f64>,
    x: Option<ListValue>,
    r: Option<ListValue>,
    n: Option<RangeValue>,
    samples: Option<usize>,
    cases: Option<usize>,
    seed: Option<u64>,
    x_max: Option<f64>,
    equality: Option<bool>,
    extended: Option<bool>,
    workers: Option<usize>,
    out: Option<PathBuf>,
    format: Option<Format>,
    direction: Option<DirectionArg>,
    horizon: Option<f64>,
}

impl RunConfig {
    fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("invalid config {}: {e}", path.display())))
    }
}

#[derive(Debug)]
struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_USAGE };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::usage(format!("i/o error: {e}"))
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Adds `schema_version` after the fields of any report.
#[derive(Serialize)]
struct Versioned<T: Serialize> {
    #[serde(flatten)]
    inner: T,
    schema_version: u32,
}

fn versioned<T: Serialize>(inner: T) -> Versioned<T> {
    Versioned {
        inner,
        schema_version: SCHEMA_VERSION,
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize to JSON");
    s.push('\n');
    s
}

fn parse_list(text: &str, what: &str) -> CliResult<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::usage(format!("{what}: cannot parse {t:?} as a number")))
        })
        .collect()
}

fn parse_counts(text: &str) -> CliResult<Vec<u32>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| CliError::usage(format!("r: cannot parse {t:?} as a multiplicity")))
        })
        .collect()
}

fn parse_range(text: &str) -> CliResult<(usize, usize)> {
    let bad = || CliError::usage(format!("n: expected `lo..hi` or a single integer, got {text:?}"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    match text.split_once("..") {
        Some((lo, hi)) => Ok((num(lo)?, num(hi.trim_start_matches('='))?)),
        None => {
            let n = num(text)?;
            Ok((n, n))
        }
    }
}

fn required<T>(value: Option<T>, flag: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::usage(format!("missing required value --{flag}")))
}

fn write_output(text: &str, out: Option<&Path>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?;
            writeln!(stderr, "wrote {}", path.display())?;
        }
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// The seed from the flag, the config file, `BLOWUPLAB_SEED`, or zero.
fn resolve_seed(flag: Option<u64>, config: Option<u64>) -> CliResult<u64> {
    if let Some(seed) = flag.or(config) {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("{SEED_ENV}: cannot parse {v:?} as a seed"))),
        Err(_) => Ok(0),
    }
}

/// `t,y` rows with 17 significant digits.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut s = String::from("t,y\n");
    for (t, y) in &traj.samples {
        s.push_str(&format!("{t:.16e},{y:.16e}\n"));
    }
    s
}

fn x_vector(args: &PointArgs, cfg: &mut RunConfig) -> CliResult<Vec<f64>> {
    let text = required(args.x.clone().or_else(|| cfg.x.take().map(ListValue::into_text)), "x")?;
    parse_list(&text, "x")
}

fn problem(args: &ProblemArgs, cfg: &mut RunConfig) -> CliResult<CauchyProblem> {
    let k_text = required(args.k.clone().or_else(|| cfg.k.take().map(ListValue::into_text)), "k")?;
    let k = KVector::new(parse_list(&k_text, "k")?)?;
    let y0 = required(args.y0.or(cfg.y0), "y0")?;
    Ok(CauchyProblem::new(k, y0)?)
}

fn cmd_weights(args: &PointArgs, cfg: &mut RunConfig, stdout: &mut dyn Write) -> CliResult<i32> {
    let x = XVector::new(x_vector(args, cfg)?)?;
    let w = lagrange_weights(&x);
    #[derive(Serialize)]
    struct Out {
        x: Vec<f64>,
        weights: Vec<f64>,
        sum: f64,
    }
    let sum = w.sum();
    let out = Out {
        x: x.into_inner(),
        weights: w.0,
        sum,
    };
    stdout.write_all(to_json(&versioned(out)).as_bytes())?;
    Ok(EXIT_OK)
}

fn cmd_check(args: &CheckArgs, cfg: &mut RunConfig, stdout: &mut dyn Write) -> CliResult<i32> {
    let x = x_vector(&args.point, cfg)?;
    let r_text = args.r.clone().or_else(|| cfg.r.take().map(ListValue::into_text));
    let json = match r_text {
        None => to_json(&versioned(analyze_point(&x))),
        Some(r_text) => {
            let spec = RepetitionSpec::new(x, parse_counts(&r_text)?)?;
            let gap = repetition_gap(&spec)?;
            let nodes = spec.expanded_nodes();
            let rhs_exponent = nodes.iter().product::<f64>() / nodes.len() as f64;
            let lhs_exponent = rhs_exponent - gap;
            #[derive(Serialize)]
            struct Out {
                class: crate::weights::PointClass,
                x: Vec<f64>,
                r: Vec<u32>,
                expanded_nodes: Vec<f64>,
                weights: Vec<Vec<f64>>,
                lhs_exponent: f64,
                rhs_exponent: f64,
                gap: f64,
            }
            to_json(&versioned(Out {
                class: classify_by_gap(gap, lhs_exponent, rhs_exponent),
                x: spec.x().as_slice().to_vec(),
                r: spec.r().to_vec(),
                weights: repetition_weights(&spec),
                expanded_nodes: nodes,
                lhs_exponent,
                rhs_exponent,
                gap,
            }))
        }
    };
    stdout.write_all(json.as_bytes())?;
    Ok(EXIT_OK)
}

fn cmd_blowup(args: &ProblemArgs, cfg: &mut RunConfig, stdout: &mut dyn Write) -> CliResult<i32> {
    let p = problem(args, cfg)?;
    if classify_initial(&p).blowup_direction == BlowupDirection::None {
        return Err(CliError::usage("no blow-up: y0 in [0, k_n]"));
    }
    let report = blowup_report(&p, IntegratorOptions::default())?;
    stdout.write_all(to_json(&versioned(report)).as_bytes())?;
    Ok(EXIT_OK)
}

fn cmd_simulate(
    args: &SimulateArgs,
    cfg: &mut RunConfig,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> CliResult<i32> {
    let p = problem(&args.problem, cfg)?;
    let direction = match args.direction.or(cfg.direction).unwrap_or(DirectionArg::Forward) {
        DirectionArg::Forward => Direction::Forward,
        DirectionArg::Backward => Direction::Backward,
    };
    let horizon = args.horizon.or(cfg.horizon).unwrap_or(10.0);
    let format = args.format.or(cfg.format).unwrap_or(Format::Csv);
    let out = args.out.clone().or_else(|| cfg.out.take());
    let traj = integrate(&p, direction, horizon, IntegratorOptions::default())?;
    let (t_end, y_end) = traj.last();

    #[derive(Serialize)]
    struct Summary {
        terminal_status: TerminalStatus,
        samples: usize,
        t_end: f64,
        y_end: f64,
    }
    let summary = versioned(Summary {
        terminal_status: traj.terminal_status,
        samples: traj.samples.len(),
        t_end,
        y_end,
    });
    match (format, out.as_deref()) {
        (Format::Csv, None) => {
            stdout.write_all(trajectory_csv(&traj).as_bytes())?;
            writeln!(stderr, "terminal_status: {:?}", traj.terminal_status)?;
        }
        (Format::Csv, Some(path)) => {
            write_output(&trajectory_csv(&traj), Some(path), stdout, stderr)?;
            stdout.write_all(to_json(&summary).as_bytes())?;
        }
        (Format::Json, out) => {
            write_output(&to_json(&versioned(&traj)), out, stdout, stderr)?;
            if out.is_some() {
                stdout.write_all(to_json(&summary).as_bytes())?;
            }
        }
    }
    Ok(match traj.terminal_status {
        TerminalStatus::StiffFailure => {
            writeln!(stderr, "error: step size underflow at t = {t_end}, y = {y_end}")?;
            EXIT_NUMERICAL
        }
        _ => EXIT_OK,
    })
}

fn suite_config(args: &SuiteArgs, cfg: &mut RunConfig, default_n: (usize, usize), default_samples: usize) -> CliResult<SuiteConfig> {
    let n_range = match args.n.clone().or_else(|| cfg.n.take().map(RangeValue::into_text)) {
        Some(text) => parse_range(&text)?,
        None => default_n,
    };
    let samples = args
        .samples
        .or(args.cases)
        .or(cfg.samples)
        .or(cfg.cases)
        .unwrap_or(default_samples);
    let suite = SuiteConfig {
        n_range,
        samples,
        seed: resolve_seed(args.seed, cfg.seed)?,
        x_max: args.x_max.or(cfg.x_max).unwrap_or(10.0),
        include_equality_cases: args.equality || cfg.equality.unwrap_or(false),
        include_extended_domain: args.extended || cfg.extended.unwrap_or(false),
        workers: args.workers.or(cfg.workers).unwrap_or(0),
    };
    suite.validate()?;
    Ok(suite)
}

fn cmd_verify(
    command: &VerifyCommand,
    cfg: &mut RunConfig,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> CliResult<i32> {
    let (args, json, passed) = match command {
        VerifyCommand::Gen(args) => {
            let suite = suite_config(args, cfg, (1, 6), 10_000)?;
            let r = run_inequality_suite(&suite)?;
            (args, to_json(&r), r.passed())
        }
        VerifyCommand::Blowup(args) => {
            let suite = suite_config(args, cfg, (1, 4), 100)?;
            let r = run_blowup_suite(&suite)?;
            (args, to_json(&r), r.passed())
        }
        VerifyCommand::Crossroute(args) => {
            let suite = suite_config(args, cfg, (1, 6), 1000)?;
            let r = cross_route_suite(&suite)?;
            (args, to_json(&r), r.passed())
        }
        VerifyCommand::Repetition(args) => {
            let suite = suite_config(args, cfg, (1, 4), 10_000)?;
            let r = repetition_consistency_suite(&suite)?;
            (args, to_json(&r), r.passed())
        }
    };
    let out = args.out.clone().or_else(|| cfg.out.take());
    write_output(&json, out.as_deref(), stdout, stderr)?;
    if passed {
        Ok(EXIT_OK)
    } else {
        writeln!(stderr, "verification failed")?;
        Ok(EXIT_ASSERTION)
    }
}

fn dispatch(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<i32> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    match &cli.command {
        Command::Weights(args) => cmd_weights(args, &mut cfg, stdout),
        Command::Check(args) => cmd_check(args, &mut cfg, stdout),
        Command::Blowup(args) => cmd_blowup(args, &mut cfg, stdout),
        Command::Simulate(args) => cmd_simulate(args, &mut cfg, stdout, stderr),
        Command::Verify(command) => cmd_verify(command, &mut cfg, stdout, stderr),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match dispatch(cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}
