//! Command-line verbs. Every verb reads an optional JSON config, overrides it
//! with any flags given, runs one library call and produces a JSON report
//! that echoes the merged config.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use cvfix_core::admissibility::{check_contraction, ContractionSpec, ContractionVariant};
use cvfix_core::applications::{
    kernel_mass, solve_integral_equation, solve_periodic, PeriodicProblem,
};
use cvfix_core::engine::{iterate_pair, FixpointResult, SolverConfig};
use cvfix_core::metric::{check_metric_axioms, Distance};
use cvfix_core::simulation::check_simulation_axioms;
use cvfix_core::{CheckReport, ComplexScalar, Error, Point};

use crate::formats::{grid_to_csv, trace_to_csv};
use crate::names::{
    parse_alpha, parse_map, parse_metric, parse_problem_fn, parse_simulation, parse_xi, NameError,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "cvfix",
    version,
    about = "Fixed-point solvers and hypothesis checkers on complex-valued metric spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the metric axioms for a named metric.
    CheckMetric(CheckMetricArgs),
    /// Sample the simulation-function axioms.
    CheckSimulation(CheckSimulationArgs),
    /// Sample a contraction condition for a pair of maps.
    CheckContraction(CheckContractionArgs),
    /// Alternating Picard iteration of named maps.
    Iterate(IterateArgs),
    /// Solve the Volterra integral equation.
    SolveIntegral(SolveIntegralArgs),
    /// Solve a first-order periodic boundary value problem.
    SolvePeriodic(SolvePeriodicArgs),
    /// Integrate the periodic Green kernel over one period.
    KernelMass(KernelMassArgs),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("invalid value for `{flag}`: {message}")]
    Usage { flag: &'static str, message: String },
    #[error("{0}")]
    Io(String),
}

fn usage(flag: &'static str) -> impl Fn(NameError) -> CliError {
    move |e| CliError::Usage { flag, message: e.0 }
}

fn usage_core(flag: &'static str) -> impl Fn(Error) -> CliError {
    move |e| CliError::Usage {
        flag,
        message: e.to_string(),
    }
}

fn usage_msg(flag: &'static str, message: &str) -> CliError {
    CliError::Usage {
        flag,
        message: message.to_string(),
    }
}

/// A finished run: the JSON report and the process exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub exit: u8,
}

fn load_config<C: DeserializeOwned + Default>(path: Option<&Path>) -> Result<C, CliError> {
    let Some(path) = path else {
        return Ok(C::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage {
        flag: "--config",
        message: e.to_string(),
    })
}

fn write_output(path: Option<&PathBuf>, contents: &str) -> Result<(), CliError> {
    if let Some(path) = path {
        fs::write(path, contents)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

macro_rules! merge {
    ($cfg:ident, $args:ident; $($field:ident),*) => {
        $(if let Some(v) = &$args.$field { $cfg.$field = v.clone(); })*
    };
    ($cfg:ident, $args:ident; opt $($field:ident),*) => {
        $(if $args.$field.is_some() { $cfg.$field = $args.$field.clone(); })*
    };
}

fn header(command: &str, config: &impl Serialize) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema".into(), json!(SCHEMA_VERSION));
    m.insert("command".into(), json!(command));
    m.insert(
        "config".into(),
        serde_json::to_value(config).expect("config serializes"),
    );
    m
}

fn point_json(p: &Point) -> Value {
    match p {
        Point::Complex(z) => json!(z.to_string()),
        Point::Grid(g) => {
            let s = g.shape();
            json!({ "start": s.start, "end": s.end, "nodes": s.nodes, "dim": s.dim, "sup_norm": g.sup_norm() })
        }
    }
}

fn check_json(m: &mut serde_json::Map<String, Value>, r: &CheckReport) -> u8 {
    m.insert("passed".into(), json!(r.passed));
    m.insert("samples_tested".into(), json!(r.samples_tested));
    m.insert("premises_met".into(), json!(r.premises_met));
    m.insert("vacuous".into(), json!(r.is_vacuous()));
    let witness = r.witness.as_ref().map(|w| {
        json!({
            "clause": w.clause,
            "sample_index": w.sample_index,
            "points": w.points.iter().map(point_json).collect::<Vec<_>>(),
            "values": w.values.iter().map(ToString::to_string).collect::<Vec<_>>(),
        })
    });
    m.insert("witness".into(), json!(witness));
    u8::from(!r.passed)
}

fn fixpoint_json(m: &mut serde_json::Map<String, Value>, r: &FixpointResult) {
    m.insert("point".into(), point_json(&r.point));
    m.insert("converged".into(), json!(r.converged));
    m.insert("diverged".into(), json!(false));
    m.insert("iterations".into(), json!(r.iterations()));
    m.insert("final_delta".into(), json!(r.trace.deltas.last()));
    m.insert("residual_s".into(), json!(r.residual_s));
    m.insert("residual_t".into(), json!(r.residual_t));
}

fn solver_config(tol: f64, max_iter: usize, window: usize) -> Result<SolverConfig, CliError> {
    SolverConfig::new(tol, max_iter, window).map_err(|e| match e {
        Error::InvalidParameter { name: "tol", .. } => usage_core("--tol")(e),
        Error::InvalidParameter {
            name: "max_iter", ..
        } => usage_core("--max-iter")(e),
        _ => usage_core("--window")(e),
    })
}

fn check_grid(grid: usize) -> Result<(), CliError> {
    if grid < 3 {
        return Err(usage_msg(
            "--grid",
            "at least three grid nodes are required",
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckMetricConfig {
    pub metric: String,
    pub samples: usize,
    pub seed: u64,
    pub grid: usize,
    pub dim: usize,
}

impl Default for CheckMetricConfig {
    fn default() -> Self {
        CheckMetricConfig {
            metric: "d1".into(),
            samples: 10_000,
            seed: 42,
            grid: 101,
            dim: 1,
        }
    }
}

#[derive(Debug, Args)]
pub struct CheckMetricArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// d1, d2:k=<f>, d3, volterra-sup:a=<f>,b=<f>, periodic-sup:a=<f>
    #[arg(long)]
    pub metric: Option<String>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Grid nodes for sup metrics.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Value dimension for the periodic sup metric.
    #[arg(long)]
    pub dim: Option<usize>,
}

fn run_check_metric(args: &CheckMetricArgs) -> Result<Outcome, CliError> {
    let mut cfg: CheckMetricConfig = load_config(args.config.as_deref())?;
    merge!(cfg, args; metric, samples, seed, grid, dim);
    check_grid(cfg.grid)?;
    let metric = parse_metric(&cfg.metric, cfg.grid, cfg.dim).map_err(usage("--metric"))?;
    let report = check_metric_axioms(&metric, cfg.samples, cfg.seed);
    let mut m = header("check-metric", &cfg);
    m.insert("seed".into(), json!(cfg.seed));
    let exit = check_json(&mut m, &report);
    Ok(Outcome {
        report: Value::Object(m),
        exit,
    })
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckSimulationConfig {
    pub xi: String,
    pub samples: usize,
    pub tail: usize,
    pub seed: u64,
}

impl Default for CheckSimulationConfig {
    fn default() -> Self {
        CheckSimulationConfig {
            xi: "xi3".into(),
            samples: 10_000,
            tail: 1000,
            seed: 42,
        }
    }
}

#[derive(Debug, Args)]
pub struct CheckSimulationArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// xi1:lambda=<f>, xi2:psi=scale(<f>),phi=identity, xi3, difference
    #[arg(long)]
    pub xi: Option<String>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Length of the evaluated tail for the limit axiom.
    #[arg(long)]
    pub tail: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

fn run_check_simulation(args: &CheckSimulationArgs) -> Result<Outcome, CliError> {
    let mut cfg: CheckSimulationConfig = load_config(args.config.as_deref())?;
    merge!(cfg, args; xi, samples, tail, seed);
    let xi = parse_xi(&cfg.xi).map_err(usage("--xi"))?;
    if cfg.samples < 1 {
        return Err(usage_msg("--samples", "must be at least 1"));
    }
    if cfg.tail < 10 {
        return Err(usage_msg("--tail", "must be at least 10"));
    }
    let report = check_simulation_axioms(&xi, cfg.samples, cfg.tail, cfg.seed)
        .map_err(usage_core("--tail"))?;
    let mut m = header("check-simulation", &cfg);
    m.insert("seed".into(), json!(cfg.seed));
    let exit = check_json(&mut m, &report);
    Ok(Outcome {
        report: Value::Object(m),
        exit,
    })
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckContractionConfig {
    pub variant: String,
    pub lambda: Option<f64>,
    pub xi: String,
    pub alpha: String,
    pub metric: Option<String>,
    pub map: String,
    pub map_t: Option<String>,
    pub samples: usize,
    pub seed: u64,
    pub grid: usize,
}

impl Default for CheckContractionConfig {
    fn default() -> Self {
        CheckContractionConfig {
            variant: "plain".into(),
            lambda: None,
            xi: "xi1:lambda=0.6".into(),
            alpha: "one".into(),
            metric: None,
            map: "halfshift".into(),
            map_t: None,
            samples: 10_000,
            seed: 42,
            grid: 101,
        }
    }
}

#[derive(Debug, Args)]
pub struct CheckContractionArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// plain, m_type or n_type
    #[arg(long)]
    pub variant: Option<String>,
    /// Weight of the M-type comparison, in (0, 1).
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub xi: Option<String>,
    #[arg(long)]
    pub alpha: Option<String>,
    /// Defaults to the natural metric of the map.
    #[arg(long)]
    pub metric: Option<String>,
    /// The map S (and T unless --map-t is given).
    #[arg(long)]
    pub map: Option<String>,
    #[arg(long)]
    pub map_t: Option<String>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub grid: Option<usize>,
}

fn run_check_contraction(args: &CheckContractionArgs) -> Result<Outcome, CliError> {
    let mut cfg: CheckContractionConfig = load_config(args.config.as_deref())?;
    merge!(cfg, args; variant, xi, alpha, map, samples, seed, grid);
    merge!(cfg, args; opt lambda, metric, map_t);
    check_grid(cfg.grid)?;
    let variant = match (cfg.variant.as_str(), cfg.lambda) {
        ("plain", None) => ContractionVariant::Plain,
        ("n_type", None) => ContractionVariant::NType,
        ("m_type", Some(lambda)) => ContractionVariant::MType { lambda },
        ("m_type", None) => return Err(usage_msg("--lambda", "m_type needs a weight")),
        ("plain" | "n_type", Some(_)) => {
            return Err(usage_msg("--lambda", "only m_type takes a weight"))
        }
        _ => return Err(usage_msg("--variant", "expected plain, m_type or n_type")),
    };
    let xi = parse_simulation(&cfg.xi).map_err(usage("--xi"))?;
    let alpha = parse_alpha(&cfg.alpha).map_err(usage("--alpha"))?;
    let s = parse_map(&cfg.map).map_err(usage("--map"))?;
    let t = match &cfg.map_t {
        Some(name) => parse_map(name).map_err(usage("--map-t"))?,
        None => s,
    };
    let metric = match &cfg.metric {
        Some(name) => parse_metric(name, cfg.grid, 1).map_err(usage("--metric"))?,
        None => s.default_metric(cfg.grid).map_err(usage("--map"))?,
    };
    for (map, flag) in [(&s, "--map"), (&t, "--map-t")] {
        if map.domain(cfg.grid).map_err(usage(flag))? != metric.domain() {
            return Err(usage_msg(
                "--metric",
                "metric and map act on different spaces",
            ));
        }
    }
    let spec = ContractionSpec::new(variant, xi, alpha, metric).map_err(usage_core("--lambda"))?;
    let report = check_contraction(&spec, &s, &t, cfg.samples, cfg.seed);
    let mut m = header("check-contraction", &cfg);
    m.insert("seed".into(), json!(cfg.seed));
    let exit = check_json(&mut m, &report);
    Ok(Outcome {
        report: Value::Object(m),
        exit,
    })
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IterateConfig {
    pub map: String,
    pub map_t: Option<String>,
    pub start: String,
    pub metric: Option<String>,
    pub tol: f64,
    pub max_iter: usize,
    pub window: usize,
    pub grid: usize,
}

impl Default for IterateConfig {
    fn default() -> Self {
        IterateConfig {
            map: "halfshift".into(),
            map_t: None,
            start: "0+0i".into(),
            metric: None,
            tol: 1e-10,
            max_iter: 1000,
            window: 1,
            grid: 101,
        }
    }
}

#[derive(Debug, Args)]
pub struct IterateArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// The map S (and T unless --map-t is given).
    #[arg(long)]
    pub map: Option<String>,
    #[arg(long)]
    pub map_t: Option<String>,
    /// Complex literal such as 0+0i; grid maps start from the constant real part.
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<String>,
    #[arg(long)]
    pub metric: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Number of consecutive small steps required to stop.
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long)]
    pub grid: Option<usize>,
    /// Write the iteration trace as CSV.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn run_iterate(args: &IterateArgs) -> Result<Outcome, CliError> {
    let mut cfg: IterateConfig = load_config(args.config.as_deref())?;
    merge!(cfg, args; map, start, tol, max_iter, window, grid);
    merge!(cfg, args; opt map_t, metric);
    check_grid(cfg.grid)?;
    let solver = solver_config(cfg.tol, cfg.max_iter, cfg.window)?;
    let s = parse_map(&cfg.map).map_err(usage("--map"))?;
    let t = match &cfg.map_t {
        Some(name) => parse_map(name).map_err(usage("--map-t"))?,
        None => s,
    };
    let start: ComplexScalar = cfg.start.parse().map_err(usage_core("--start"))?;
    let x0 = s.start_point(start, cfg.grid).map_err(usage("--start"))?;
    let metric = match &cfg.metric {
        Some(name) => parse_metric(name, cfg.grid, 1).map_err(usage("--metric"))?,
        None => s.default_metric(cfg.grid).map_err(usage("--map"))?,
    };
    if x0.domain() != metric.domain()
        || t.domain(cfg.grid).map_err(usage("--map-t"))? != metric.domain()
    {
        return Err(usage_msg(
            "--metric",
            "metric and maps act on different spaces",
        ));
    }
    let mut m = header("iterate", &cfg);
    let exit = match iterate_pair(&s, &t, &x0, &metric, &solver) {
        Ok(r) => {
            fixpoint_json(&mut m, &r);
            write_output(args.output.as_ref(), &trace_to_csv(&r.trace))?;
            u8::from(!r.converged)
        }
        Err(Error::Divergence { trace }) => {
            m.insert(
                "point".into(),
                point_json(trace.points.last().expect("trace has a start")),
            );
            m.insert("converged".into(), json!(false));
            m.insert("diverged".into(), json!(true));
            m.insert("iterations".into(), json!(trace.deltas.len()));
            m.insert("final_delta".into(), json!(trace.deltas.last()));
            write_output(args.output.as_ref(), &trace_to_csv(&trace))?;
            1
        }
        Err(e) => return Err(usage_core("--map")(e)),
    };
    Ok(Outcome {
        report: Value::Object(m),
        exit,
    })
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolveIntegralConfig {
    pub problem: String,
    pub a: f64,
    pub b: f64,
    pub grid: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub window: usize,
}

impl Default for SolveIntegralConfig {
    fn default() -> Self {
        SolveIntegralConfig {
            problem: "integral".into(),
            a: 1.0,
            b: 2.0,
            grid: 2001,
            tol: 1e-10,
            max_iter: 1000,
            window: 1,
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveIntegralArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub window: Option<usize>,
    /// Write the solution as grid CSV.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn run_solve_integral(args: &SolveIntegralArgs) -> Result<Outcome, CliError> {
    let mut cfg: SolveIntegralConfig = load_config(args.config.as_deref())?;
    merge!(cfg, args; a, b, grid, tol, max_iter, window);
    if cfg.problem != "integral" {
        return Err(usage_msg("--config", "problem must be \"integral\""));
    }
    check_grid(cfg.grid)?;
    if cfg.a.is_nan() || cfg.a < 1.0 {
        return Err(usage_msg("--a", "must be at least 1"));
    }
    if !(cfg.b > cfg.a && cfg.b.is_finite()) {
        return Err(usage_msg("--b", "must be finite and greater than a"));
    }
    let solver = solver_config(cfg.tol, cfg.max_iter, cfg.window)?;
    let mut m = header("solve-integral", &cfg);
    let exit = match solve_integral_equation(cfg.a, cfg.b, cfg.grid, &solver) {
        Ok(sol) => {
            fixpoint_json(&mut m, &sol.result);
            m.insert("lambda".into(), json!(sol.lambda));
            m.insert("lambda_warning".into(), json!(sol.lambda_warning));
            write_output(
                args.output.as_ref(),
                &grid_to_csv(sol.result.point.as_grid().expect("grid solution")),
            )?;
            u8::from(!sol.result.converged)
        }
        Err(Error::Divergence { trace }) => {
            m.insert("converged".into(), json!(false));
            m.insert("diverged".into(), json!(true));
            m.insert("iterations".into(), json!(trace.deltas.len()));
            1
        }
        Err(e) => return Err(usage_core("--config")(e)),
    };
    Ok(Outcome {
        report: Value::Object(m),
        exit,
    })
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolvePeriodicConfig {
    pub problem: String,
    pub f: String,
    pub eta: f64,
    pub a: f64,
    pub n: usize,
    pub grid: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub window: usize,
}

impl Default for SolvePeriodicConfig {
    fn default() -> Self {
        SolvePeriodicConfig {
            problem: "periodic".into(),
            f: "example32".into(),
            eta: 1.5,
            a: 1.0,
            n: 1,
            grid: 2001,
            tol: 1e-10,
            max_iter: 1000,
            window: 1,
        }
    }
}

#[derive(Debug, Args)]
pub struct SolvePeriodicArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// example32, example33, zero or linear(<u>,<t>,<c>)
    #[arg(long)]
    pub f: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    /// Period.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Dimension of u.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub window: Option<usize>,
    /// Write the solution as grid CSV.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn run_solve_periodic(args: &SolvePeriodicArgs) -> Result<Outcome, CliError> {
    let mut cfg: SolvePeriodicConfig = load_config(args.config.as_deref())?;
    merge!(cfg, args; f, eta, a, n, grid, tol, max_iter, window);
    if cfg.problem != "periodic" {
        return Err(usage_msg("--config", "problem must be \"periodic\""));
    }
    check_grid(cfg.grid)?;
    let f = parse_problem_fn(&cfg.f).map_err(usage("--f"))?;
    let problem = PeriodicProblem::new(f, cfg.a, cfg.eta, cfg.n).map_err(|e| match e {
        Error::InvalidParameter { name: "eta", .. } => usage_core("--eta")(e),
        Error::InvalidParameter { name: "n", .. } => usage_core("--n")(e),
        _ => usage_core("--a")(e),
    })?;
    let solver = solver_config(cfg.tol, cfg.max_iter, cfg.window)?;
    let mut m = header("solve-periodic", &cfg);
    let exit = match solve_periodic(&problem, cfg.grid, &solver) {
        Ok(sol) => {
            fixpoint_json(&mut m, &sol.result);
            m.insert("residual_periodic".into(), json!(sol.residual));
            m.insert("lipschitz".into(), json!(sol.lipschitz));
            m.insert("certified".into(), json!(sol.certified));
            write_output(
                args.output.as_ref(),
                &grid_to_csv(sol.result.point.as_grid().expect("grid solution")),
            )?;
            u8::from(!sol.certified)
        }
        Err(Error::Divergence { trace }) => {
            m.insert("converged".into(), json!(false));
            m.insert("diverged".into(), json!(true));
            m.insert("iterations".into(), json!(trace.deltas.len()));
            1
        }
        Err(e) => return Err(usage_core("--config")(e)),
    };
    Ok(Outcome {
        report: Value::Object(m),
        exit,
    })
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelMassConfig {
    pub t: f64,
    pub a: f64,
    pub eta: f64,
    pub grid: usize,
}

impl Default for KernelMassConfig {
    fn default() -> Self {
        KernelMassConfig {
            t: 0.5,
            a: 1.0,
            eta: 1.0,
            grid: 2001,
        }
    }
}

#[derive(Debug, Args)]
pub struct KernelMassArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub grid: Option<usize>,
}

fn run_kernel_mass(args: &KernelMassArgs) -> Result<Outcome, CliError> {
    let mut cfg: KernelMassConfig = load_config(args.config.as_deref())?;
    merge!(cfg, args; t, a, eta, grid);
    check_grid(cfg.grid)?;
    let value = kernel_mass(cfg.t, cfg.a, cfg.eta, cfg.grid).map_err(|e| match e {
        Error::InvalidParameter { name: "eta", .. } => usage_core("--eta")(e),
        Error::InvalidParameter { name: "t", .. } => usage_core("--t")(e),
        _ => usage_core("--a")(e),
    })?;
    let mut m = header("kernel-mass", &cfg);
    m.insert("value".into(), json!(value));
    m.insert("expected".into(), json!(1.0 / cfg.eta));
    m.insert("error".into(), json!((value - 1.0 / cfg.eta).abs()));
    Ok(Outcome {
        report: Value::Object(m),
        exit: 0,
    })
}

pub fn run(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::CheckMetric(a) => run_check_metric(a),
        Command::CheckSimulation(a) => run_check_simulation(a),
        Command::CheckContraction(a) => run_check_contraction(a),
        Command::Iterate(a) => run_iterate(a),
        Command::SolveIntegral(a) => run_solve_integral(a),
        Command::SolvePeriodic(a) => run_solve_periodic(a),
        Command::KernelMass(a) => run_kernel_mass(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Command {
        let mut argv = vec!["cvfix"];
        argv.extend_from_slice(args);
        Cli::try_parse_from(argv).unwrap().command
    }

    #[test]
    fn halfshift_iteration_reaches_i() {
        let out = run(&parse(&[
            "iterate",
            "--map",
            "halfshift",
            "--start",
            "0+0i",
            "--metric",
            "d1",
            "--tol",
            "1e-10",
        ]))
        .unwrap();
        assert_eq!(out.exit, 0);
        let p: ComplexScalar = out.report["point"].as_str().unwrap().parse().unwrap();
        assert!((p - ComplexScalar::I).modulus() <= 1e-9);
        assert_eq!(out.report["schema"], json!(1));
    }

    #[test]
    fn usage_errors_name_the_flag() {
        let cases: [(&[&str], &str); 5] = [
            (&["iterate", "--start", "1+2j"], "--start"),
            (&["check-simulation", "--xi", "xi1:lambda=1.5"], "--xi"),
            (&["solve-periodic", "--eta", "1"], "--eta"),
            (&["kernel-mass", "--grid", "2"], "--grid"),
            (
                &[
                    "check-contraction",
                    "--variant",
                    "m_type",
                    "--lambda",
                    "1.5",
                ],
                "--lambda",
            ),
        ];
        for (argv, flag) in cases {
            match run(&parse(argv)) {
                Err(CliError::Usage { flag: f, .. }) => assert_eq!(f, flag, "{argv:?}"),
                other => panic!("{argv:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn flags_override_defaults() {
        let out = run(&parse(&["kernel-mass", "--t", "0", "--eta", "2"])).unwrap();
        assert_eq!(out.report["config"]["eta"], json!(2.0));
        assert!((out.report["value"].as_f64().unwrap() - 0.5).abs() <= 1e-6);
    }

    #[test]
    fn divergence_is_reported_not_raised() {
        let out = run(&parse(&["iterate", "--map", "doubleplus1", "--start", "1"])).unwrap();
        assert_eq!(out.exit, 1);
        assert_eq!(out.report["diverged"], json!(true));
    }
}
