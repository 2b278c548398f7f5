//! Command-line front end.
//!
//! Every command prints a JSON document with a `schema` tag, the crate
//! version and the fully resolved configuration. Exit codes: 0 success,
//! 2 bad input, 3 infeasible or non-convergent, 4 dimension not supported,
//! 5 scenario invariant violated.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::asymptotics::{
    continuity_probe, default_eps_grid, random_continuity_instance, simulate_corollary1_with_samples,
    simulate_corollary2, Cor2Thresholds, LambdaRule, Noise, PerturbationDirections, ScenarioConfig,
};
use crate::dantzig::{
    dantzig_select, polygon_2d, solution_polygon_2d, solution_set_diameter, DantzigProblem, DesignData,
};
use crate::error::Error;
use crate::kkt::dantzig_certificate;
use crate::lasso::{lasso_kkt_check, lasso_solve, KKT_TOL};
use crate::linalg::Matrix;
use crate::uniqueness::{
    is_parallel, lasso_parallelism_check, prop2_experiment_with, DesignGenerator, ParallelismReport,
    ParallelismWitness, DEFAULT_P_CAP, DEFAULT_WITNESS_TOL,
};

pub const SCHEMA: &str = "dantzig-kit/1";

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_DIMENSION: i32 = 4;
pub const EXIT_CONFIG: i32 = 5;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgument(_) => EXIT_INPUT,
            Error::SolverStalled { .. }
            | Error::ConvergenceFailure { .. }
            | Error::Infeasible(_)
            | Error::Unbounded(_) => EXIT_SOLVER,
            Error::DimensionCap { .. } => EXIT_DIMENSION,
            Error::InvalidInstance(_) => EXIT_CONFIG,
        };
        Self::new(code, e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "dantzig-kit", version, about = "Dantzig selector and lasso toolkit")]
pub struct Cli {
    /// Worker threads for replicate-level parallelism (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Random seed; overrides any seed in a config file.
    #[arg(long, global = true, env = "DANTZIG_KIT_SEED")]
    pub seed: Option<u64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fit the Dantzig selector or the lasso to CSV data.
    Solve(SolveArgs),
    /// Parallelism checks.
    #[command(subcommand)]
    Uniqueness(UniquenessCommand),
    /// Monte Carlo experiments.
    #[command(subcommand)]
    Asymptotics(AsymptoticsCommand),
    /// Feasible-set polygon for p = 2.
    Polygon(PolygonArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Dantzig,
    Lasso,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long, value_enum, default_value = "dantzig")]
    pub method: Method,
    #[arg(long)]
    pub x: PathBuf,
    #[arg(long)]
    pub y: PathBuf,
    #[arg(long)]
    pub lambda: f64,
    /// Skip the first line of each CSV file.
    #[arg(long)]
    pub header: bool,
    /// Also report the diameter of the solution set (Dantzig only).
    #[arg(long)]
    pub diameter: bool,
    #[arg(long, default_value_t = 10_000)]
    pub max_sweeps: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct MatrixInput {
    /// Symmetric matrix C as CSV.
    #[arg(long, conflicts_with = "x")]
    pub c: Option<PathBuf>,
    /// Design X as CSV; C = n⁻¹XᵀX.
    #[arg(long)]
    pub x: Option<PathBuf>,
    #[arg(long)]
    pub header: bool,
    #[arg(long, default_value_t = DEFAULT_WITNESS_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_P_CAP)]
    pub p_cap: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum GeneratorArg {
    StandardNormal,
    DuplicatedColumn,
}

#[derive(Subcommand, Debug)]
pub enum UniquenessCommand {
    /// Exhaustive parallelism check of C.
    Check(MatrixInput),
    /// Parallelism restricted to B = {1..p}.
    LassoCheck(MatrixInput),
    /// Fraction of random designs whose Gram matrix is parallel.
    Prop2 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        reps: usize,
        #[arg(long, value_enum, default_value = "standard-normal")]
        generator: GeneratorArg,
    },
}

#[derive(Args, Debug)]
pub struct ScenarioArgs {
    /// Scenario JSON; a built-in three-coordinate scenario is used without it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Directory for per-replicate sample CSV files.
    #[arg(long)]
    pub samples_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum AsymptoticsCommand {
    /// Almost-sure limit under a fixed lambda.
    Cor1 {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Overrides the config's lambda rule with this fixed value.
        #[arg(long)]
        lambda0: Option<f64>,
    },
    /// Limiting law under lambda = lambda_tilde / sqrt(n).
    Cor2 {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Overrides the config's lambda rule with this root-n level.
        #[arg(long)]
        lambda_tilde: Option<f64>,
        #[arg(long, default_value_t = 0.15)]
        cov_threshold: f64,
        #[arg(long, default_value_t = 0.05)]
        ks_threshold: f64,
    },
    /// Decay of ‖G(perturbed) − G(base)‖∞ along a grid of ε.
    Continuity {
        #[arg(long, value_enum, default_value = "random")]
        preset: Preset,
        #[arg(long, default_value_t = 3)]
        p: usize,
        /// Use λ = 0 for the base point.
        #[arg(long)]
        lambda_zero: bool,
        /// Perturb only v.
        #[arg(long)]
        v_only: bool,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Random,
}

#[derive(Args, Debug)]
pub struct PolygonArgs {
    #[arg(long, requires = "v", conflicts_with = "x")]
    pub c: Option<PathBuf>,
    #[arg(long)]
    pub v: Option<PathBuf>,
    #[arg(long, requires = "y")]
    pub x: Option<PathBuf>,
    #[arg(long)]
    pub y: Option<PathBuf>,
    #[arg(long)]
    pub lambda: f64,
    /// Half-width of the clipping box.
    #[arg(long = "box", default_value_t = 10.0)]
    pub box_halfwidth: f64,
    #[arg(long)]
    pub header: bool,
    /// Write feasible-set vertices here as CSV.
    #[arg(long)]
    pub vertices_csv: Option<PathBuf>,
}

/// Parses numeric CSV; blank lines are ignored.
pub fn read_matrix_csv(path: &Path, header: bool) -> CliResult<Matrix> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::new(EXIT_INPUT, format!("cannot read {}: {e}", path.display())))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate().skip(usize::from(header)) {
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| CliError::new(EXIT_INPUT, format!("{}:{}: {e}", path.display(), lineno + 1)))?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::new(EXIT_INPUT, format!("{}: no data", path.display())));
    }
    Matrix::from_rows(&rows).map_err(|e| CliError::new(EXIT_INPUT, format!("{}: {e}", path.display())))
}

/// A vector stored as one column (or, equivalently, one row).
pub fn read_vector_csv(path: &Path, header: bool) -> CliResult<Vec<f64>> {
    let m = read_matrix_csv(path, header)?;
    match m.shape() {
        (_, 1) => Ok(m.column(0)),
        (1, _) => Ok(m.row(0).to_vec()),
        (r, c) => Err(CliError::new(
            EXIT_INPUT,
            format!("{}: expected a single column, got {r}x{c}", path.display()),
        )),
    }
}

/// Writes rows with 17 significant digits, which round-trips every f64.
pub fn write_rows_csv<R: AsRef<[f64]>>(path: &Path, rows: &[R]) -> CliResult<()> {
    let mut text = String::new();
    for row in rows {
        let fields: Vec<String> = row.as_ref().iter().map(|x| format!("{x:.16e}")).collect();
        text.push_str(&fields.join(","));
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| CliError::new(EXIT_INPUT, format!("cannot write {}: {e}", path.display())))
}

pub fn write_matrix_csv(path: &Path, m: &Matrix) -> CliResult<()> {
    write_rows_csv(path, &m.to_rows())
}

#[derive(Serialize)]
struct WitnessOut {
    a: Vec<usize>,
    b: Vec<usize>,
    w: Vec<f64>,
    s: Vec<i8>,
}

impl From<&ParallelismWitness> for WitnessOut {
    fn from(w: &ParallelismWitness) -> Self {
        Self {
            a: w.a.to_one_based(),
            b: w.b.to_one_based(),
            w: w.w.clone(),
            s: w.s.clone(),
        }
    }
}

fn parallelism_json(rep: &ParallelismReport) -> Value {
    let witnesses: Vec<WitnessOut> = rep.witnesses.iter().map(WitnessOut::from).collect();
    json!({
        "parallel": rep.parallel,
        "witnesses": witnesses,
        "pairs_examined": rep.pairs_examined,
        "p_cap_respected": rep.p_cap_respected,
    })
}

fn envelope(command: &str, config: Value, result: Value) -> Value {
    json!({
        "schema": SCHEMA,
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "result": result,
    })
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn cmd_solve(args: &SolveArgs) -> CliResult<Value> {
    let x = read_matrix_csv(&args.x, args.header)?;
    let y = read_vector_csv(&args.y, args.header)?;
    let data = DesignData::new(x, y)?;
    let config = json!({
        "method": args.method,
        "x": args.x,
        "y": args.y,
        "lambda": args.lambda,
        "header": args.header,
        "diameter": args.diameter,
        "max_sweeps": args.max_sweeps,
        "tol": args.tol,
    });
    let result = match args.method {
        Method::Dantzig => {
            let est = dantzig_select(&data, args.lambda)?;
            if !est.is_optimal() {
                return Err(CliError::new(
                    EXIT_SOLVER,
                    format!("no beta satisfies ‖v − Cβ‖∞ ≤ {}", args.lambda),
                ));
            }
            let cert = dantzig_certificate(&data, args.lambda, &est.beta_hat, 1e-7)?;
            let mut out = json!({
                "beta_hat": est.beta_hat,
                "l1_norm": est.l1_norm,
                "active_set": est.active_set.to_one_based(),
                "kkt": {
                    "found": cert.found,
                    "mu_hat": cert.mu_hat,
                    "max_condition_error": cert.max_condition_error(),
                },
            });
            if args.diameter {
                out["diameter"] = to_value(&solution_set_diameter(&data.problem(args.lambda)?)?);
            }
            out
        }
        Method::Lasso => {
            let est = lasso_solve(&data, args.lambda, args.max_sweeps, args.tol)?;
            let (ok, _) = lasso_kkt_check(&data, args.lambda, &est.beta_hat, KKT_TOL);
            let active: Vec<usize> = (0..data.p())
                .filter(|&j| est.beta_hat[j] != 0.0)
                .map(|j| j + 1)
                .collect();
            json!({
                "beta_hat": est.beta_hat,
                "l1_norm": crate::linalg::norm_l1(&est.beta_hat),
                "active_set": active,
                "objective": est.objective,
                "sweeps": est.sweeps,
                "kkt": { "passed": ok, "residual": est.kkt_residual },
            })
        }
    };
    Ok(envelope("solve", config, result))
}

fn matrix_from_input(input: &MatrixInput) -> CliResult<(Matrix, Value)> {
    let (c, source) = match (&input.c, &input.x) {
        (Some(path), None) => (read_matrix_csv(path, input.header)?, json!({ "c": path })),
        (None, Some(path)) => (read_matrix_csv(path, input.header)?.gram_scaled(), json!({ "x": path })),
        _ => return Err(CliError::new(EXIT_INPUT, "exactly one of --c or --x is required")),
    };
    let mut config = source;
    config["tol"] = json!(input.tol);
    config["p_cap"] = json!(input.p_cap);
    config["header"] = json!(input.header);
    Ok((c, config))
}

fn cmd_uniqueness(cmd: &UniquenessCommand, seed: u64) -> CliResult<Value> {
    match cmd {
        UniquenessCommand::Check(input) => {
            let (c, config) = matrix_from_input(input)?;
            let rep = is_parallel(&c, input.tol, input.p_cap)?;
            Ok(envelope("uniqueness check", config, parallelism_json(&rep)))
        }
        UniquenessCommand::LassoCheck(input) => {
            let (c, config) = matrix_from_input(input)?;
            let rep = lasso_parallelism_check(&c, input.tol, input.p_cap)?;
            Ok(envelope("uniqueness lasso-check", config, parallelism_json(&rep)))
        }
        UniquenessCommand::Prop2 { n, p, reps, generator } => {
            let g = match generator {
                GeneratorArg::StandardNormal => DesignGenerator::StandardNormal,
                GeneratorArg::DuplicatedColumn => DesignGenerator::DuplicatedColumn,
            };
            let fraction = prop2_experiment_with(*n, *p, *reps, seed, g)?;
            let config = json!({ "n": n, "p": p, "reps": reps, "seed": seed, "generator": g });
            Ok(envelope(
                "uniqueness prop2",
                config,
                json!({ "fraction_parallel": fraction }),
            ))
        }
    }
}

/// Built-in scenario: p = 3, mild correlation, one zero coefficient.
pub fn default_scenario(seed: u64) -> ScenarioConfig {
    ScenarioConfig {
        beta_star: vec![1.0, -0.5, 0.0],
        c_target: vec![vec![1.0, 0.3, 0.1], vec![0.3, 1.0, 0.2], vec![0.1, 0.2, 1.0]],
        sigma: 1.0,
        lambda_rule: LambdaRule::Fixed { lambda0: 0.0 },
        n_grid: vec![250, 500, 1000, 2000],
        reps: 200,
        seed,
        noise: Noise::Gaussian,
    }
}

fn load_scenario(args: &ScenarioArgs, seed: Option<u64>) -> CliResult<ScenarioConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::new(EXIT_INPUT, format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| CliError::new(EXIT_INPUT, format!("{}: {e}", path.display())))?
        }
        None => default_scenario(0),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn check_scenario(cfg: &ScenarioConfig) -> CliResult<()> {
    cfg.validate().map(|_| ()).map_err(|e| match e {
        Error::DimensionCap { .. } => CliError::from(e),
        other => CliError::new(EXIT_CONFIG, format!("scenario rejected: {other}")),
    })
}

fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::new(EXIT_INPUT, format!("cannot create {}: {e}", dir.display())))
}

fn cmd_asymptotics(cmd: &AsymptoticsCommand, seed: Option<u64>) -> CliResult<Value> {
    match cmd {
        AsymptoticsCommand::Cor1 { scenario, lambda0 } => {
            let mut cfg = load_scenario(scenario, seed)?;
            if let Some(l) = lambda0 {
                cfg.lambda_rule = LambdaRule::Fixed { lambda0: *l };
            }
            check_scenario(&cfg)?;
            let (report, samples) = simulate_corollary1_with_samples(&cfg)?;
            if let Some(dir) = &scenario.samples_dir {
                ensure_dir(dir)?;
                for (n, est) in cfg.n_grid.iter().zip(&samples) {
                    write_rows_csv(&dir.join(format!("cor1_estimates_n{n}.csv")), est)?;
                }
            }
            Ok(envelope("asymptotics cor1", to_value(&cfg), to_value(&report)))
        }
        AsymptoticsCommand::Cor2 {
            scenario,
            lambda_tilde,
            cov_threshold,
            ks_threshold,
        } => {
            let mut cfg = load_scenario(scenario, seed)?;
            if let Some(l) = lambda_tilde {
                cfg.lambda_rule = LambdaRule::RootN { lambda_tilde: *l };
            }
            if scenario.config.is_none() && lambda_tilde.is_none() {
                cfg.lambda_rule = LambdaRule::RootN { lambda_tilde: 0.0 };
            }
            check_scenario(&cfg)?;
            let thresholds = Cor2Thresholds {
                covariance_rel_error: *cov_threshold,
                ks_statistic: *ks_threshold,
            };
            let (report, samples) = simulate_corollary2(&cfg, thresholds)?;
            if let Some(dir) = &scenario.samples_dir {
                ensure_dir(dir)?;
                write_rows_csv(&dir.join("cor2_empirical.csv"), &samples.empirical)?;
                write_rows_csv(&dir.join("cor2_limiting.csv"), &samples.limiting)?;
            }
            Ok(envelope("asymptotics cor2", to_value(&cfg), to_value(&report)))
        }
        AsymptoticsCommand::Continuity {
            preset: Preset::Random,
            p,
            lambda_zero,
            v_only,
        } => {
            let seed = seed.unwrap_or(0);
            let inst = random_continuity_instance(*p, seed, *lambda_zero)?;
            let dirs = if *v_only {
                PerturbationDirections::v_only(*p, seed)
            } else {
                PerturbationDirections::random(*p, seed)
            };
            let grid = default_eps_grid();
            let report = continuity_probe(&inst.c, &inst.v, inst.lambda, &dirs, &grid)?;
            let config = json!({
                "preset": "random",
                "seed": seed,
                "p": p,
                "lambda_zero": lambda_zero,
                "v_only": v_only,
                "instance": inst,
                "directions": dirs,
                "eps_grid": grid,
            });
            Ok(envelope("asymptotics continuity", config, to_value(&report)))
        }
    }
}

fn cmd_polygon(args: &PolygonArgs) -> CliResult<Value> {
    let prob = match (&args.c, &args.v, &args.x, &args.y) {
        (Some(c), Some(v), None, None) => DantzigProblem::new(
            read_matrix_csv(c, args.header)?,
            read_vector_csv(v, args.header)?,
            args.lambda,
        )?,
        (None, None, Some(x), Some(y)) => {
            DesignData::new(read_matrix_csv(x, args.header)?, read_vector_csv(y, args.header)?)?.problem(args.lambda)?
        }
        _ => return Err(CliError::new(EXIT_INPUT, "give either --c and --v, or --x and --y")),
    };
    if prob.p() != 2 {
        return Err(CliError::new(
            EXIT_DIMENSION,
            format!("polygon output needs p = 2, got p = {}", prob.p()),
        ));
    }
    let est = crate::dantzig::g_map(&prob)?;
    if !est.is_optimal() {
        return Err(CliError::new(EXIT_SOLVER, "the feasible set is empty"));
    }
    let vertices = polygon_2d(&prob, args.box_halfwidth)?;
    let solutions = solution_polygon_2d(&prob, args.box_halfwidth, est.l1_norm)?;
    if let Some(path) = &args.vertices_csv {
        write_rows_csv(path, &vertices)?;
    }
    let config = json!({
        "c": prob.c,
        "v": prob.v,
        "lambda": args.lambda,
        "box": args.box_halfwidth,
    });
    let result = json!({
        "vertices": vertices,
        "t0": est.l1_norm,
        "solution_set": solutions,
        "beta_hat": est.beta_hat,
    });
    Ok(envelope("polygon", config, result))
}

/// Runs a parsed command and returns the JSON report.
pub fn run(cli: &Cli) -> CliResult<Value> {
    let run_command = || match &cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Uniqueness(cmd) => cmd_uniqueness(cmd, cli.seed.unwrap_or(0)),
        Command::Asymptotics(cmd) => cmd_asymptotics(cmd, cli.seed),
        Command::Polygon(args) => cmd_polygon(args),
    };
    match cli.jobs {
        Some(0) => Err(CliError::new(EXIT_INPUT, "--jobs must be positive")),
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| CliError::new(EXIT_INPUT, e.to_string()))?
            .install(run_command),
        None => run_command(),
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}", e.message);
            return e.code;
        }
    };
    let text = serde_json::to_string_pretty(&report).expect("json");
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, text + "\n") {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_INPUT;
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{text}");
        }
    }
    0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        let m = Matrix::from_rows(&[[0.1, -1.0 / 3.0, 1e-300], [f64::MAX, f64::MIN_POSITIVE, 2f64.sqrt()]]).unwrap();
        write_matrix_csv(&path, &m).unwrap();
        assert_eq!(read_matrix_csv(&path, false).unwrap(), m);
    }

    #[test]
    fn missing_file_names_path() {
        let err = read_matrix_csv(Path::new("/nonexistent/x.csv"), false).unwrap_err();
        assert_eq!(err.code, EXIT_INPUT);
        assert!(err.message.contains("/nonexistent/x.csv"));
    }

    #[test]
    fn header_and_vector_shapes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("y.csv");
        fs::write(&path, "y\n1\n2\n\n3\n").unwrap();
        assert_eq!(read_vector_csv(&path, true).unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(read_matrix_csv(&path, false).unwrap_err().code, EXIT_INPUT);
    }

    #[test]
    fn error_codes() {
        assert_eq!(
            CliError::from(Error::DimensionCap { p: 11, cap: 10 }).code,
            EXIT_DIMENSION
        );
        assert_eq!(CliError::from(Error::Infeasible(String::new())).code, EXIT_SOLVER);
        assert_eq!(CliError::from(Error::InvalidInstance(String::new())).code, EXIT_CONFIG);
    }
}
