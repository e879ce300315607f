//! `schwinger`: resource estimates, verification, dynamics and
//! amplitude-estimation runs from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or configuration
//! error. Every JSON artifact carries `schema_version`.

use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use schwinger::ae;
use schwinger::blockenc::{self, VerifyMode};
use schwinger::estimator::{self, SCHEMA_VERSION};
use schwinger::model::{DynamicsOracle, ModelParams, DEFAULT_DENSE_LIMIT};
use schwinger::subroutines::checks::{self, CheckOutcome};

#[derive(Parser, Debug)]
#[command(name = "schwinger", version, about = "Schwinger-model block-encoding resource estimator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// T counts and runtimes of the vacuum persistence estimate.
    Estimate(EstimateArgs),
    /// Simulation checks of the subroutines and the block-encoding.
    Verify(VerifyArgs),
    /// Vacuum persistence amplitude and particle density over time.
    Dynamics(DynamicsArgs),
    /// Amplitude-estimation query statistics.
    Ae(AeArgs),
    /// Surface-code footprint of the vacuum persistence estimate.
    Physical(PhysicalArgs),
}

#[derive(Args, Debug, Clone, Copy)]
struct ModelArgs {
    /// Lattice spacing a.
    #[arg(long, default_value_t = 0.2)]
    spacing: f64,
    /// Fermion mass m.
    #[arg(long, default_value_t = 0.1)]
    mass: f64,
    /// Gauge coupling g.
    #[arg(long, default_value_t = 1.0)]
    coupling: f64,
    /// Topological angle theta.
    #[arg(long, default_value_t = PI)]
    theta: f64,
}

impl ModelArgs {
    fn params(&self, n: usize) -> ModelParams {
        ModelParams { n_sites: n, spacing: self.spacing, mass: self.mass, coupling: self.coupling, theta: self.theta }
    }
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (stdout when absent).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    /// Use the default grid N in {16,32,64,128,256}, wt in {1,10,100}.
    #[arg(long)]
    defaults: bool,
    /// System sizes.
    #[arg(long = "N", value_delimiter = ',')]
    sizes: Vec<usize>,
    /// Dimensionless evolution times w t.
    #[arg(long, value_delimiter = ',')]
    wt: Vec<f64>,
    /// T gates per second for runtimes.
    #[arg(long, default_value_t = estimator::DEFAULT_T_RATE)]
    rate: f64,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Suite {
    All,
    Arithmetic,
    Prepare,
    Block,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Semantic,
    FullStatevector,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Checks to run.
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    /// System size of the block-encoding check.
    #[arg(long = "N", default_value_t = 8)]
    n: usize,
    /// Target error of the block-encoding check.
    #[arg(long, default_value_t = 1e-2)]
    epsilon: f64,
    /// Block-encoding evaluation mode.
    #[arg(long, value_enum, default_value_t = Mode::Semantic)]
    mode: Mode,
    /// Largest register width of the exhaustive arithmetic checks.
    #[arg(long, default_value_t = 6)]
    bits: usize,
    /// Largest system size of the preparation checks.
    #[arg(long, default_value_t = 16)]
    max_n: u64,
    #[command(flatten)]
    model: ModelArgs,
    /// Output file (stdout when absent).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DynamicsArgs {
    #[arg(long = "N", default_value_t = 4)]
    n: usize,
    /// Final time.
    #[arg(long, default_value_t = 2.0)]
    t_max: f64,
    /// Number of intervals of the time grid.
    #[arg(long, default_value_t = 20)]
    steps: usize,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct AeArgs {
    /// Amplitudes to estimate.
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])]
    omega: Vec<f64>,
    /// Runs per amplitude.
    #[arg(long, default_value_t = 1000)]
    runs: u64,
    #[arg(long, default_value_t = 0.005)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    /// First seed; later runs use consecutive seeds.
    #[arg(long, env = "SCHWINGER_SEED", default_value_t = 0)]
    seed: u64,
    /// Print only the Hoeffding sample count.
    #[arg(long)]
    hoeffding: bool,
    /// Print only the worst-case Chebyshev query formula.
    #[arg(long)]
    chebae: bool,
    /// Print only the summary, not the per-run records.
    #[arg(long)]
    summary_only: bool,
    /// Output file (stdout when absent).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PhysicalArgs {
    #[arg(long = "N", value_delimiter = ',', default_values_t = [64usize])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 10.0)]
    wt: f64,
    /// Physical error rates.
    #[arg(long = "p", value_delimiter = ',', default_values_t = [1e-3, 1e-4])]
    p_phys: Vec<f64>,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    out: OutputArgs,
}

/// Command failure with its exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Verification,
}

impl From<schwinger::Error> for Failure {
    fn from(e: schwinger::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn emit(path: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn csv_text<S: serde::Serialize>(rows: &[S]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let body = w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(format!("# schema_version={SCHEMA_VERSION}\n{}", String::from_utf8_lossy(&body)))
}

fn table<S: serde::Serialize>(out: &OutputArgs, rows: &[S]) -> Result<(), Failure> {
    let text = match out.format {
        Format::Csv => csv_text(rows)?,
        Format::Json => format!("{}\n", json!({ "schema_version": SCHEMA_VERSION, "rows": rows })),
    };
    emit(&out.output, &text)
}

fn cmd_estimate(a: &EstimateArgs) -> Result<(), Failure> {
    let (sizes, times) = if a.defaults {
        (estimator::TABLE_SIZES.to_vec(), estimator::TABLE_TIMES.to_vec())
    } else {
        (a.sizes.clone(), a.wt.clone())
    };
    if sizes.is_empty() || times.is_empty() {
        return Err(Failure::Usage("estimate needs --defaults or both --N and --wt".into()));
    }
    if !(a.rate > 0.0) {
        return Err(Failure::Usage("--rate must be positive".into()));
    }
    let rows = estimator::table3(&a.model.params(sizes[0]), &sizes, &times, a.rate)?;
    table(&a.out, &rows)
}

fn cmd_verify(a: &VerifyArgs) -> Result<(), Failure> {
    let params = a.model.params(a.n);
    params.validate()?;
    let mut checks: Vec<CheckOutcome> = Vec::new();
    let mut block = None;
    if matches!(a.suite, Suite::All | Suite::Arithmetic) {
        if a.bits == 0 || a.bits > 10 {
            return Err(Failure::Usage("--bits must lie in 1..=10".into()));
        }
        checks.extend(checks::arithmetic_suite(a.bits)?);
    }
    if matches!(a.suite, Suite::All | Suite::Prepare) {
        let sizes: Vec<u64> = (4..=a.max_n).step_by(2).collect();
        checks.extend(checks::prepare_suite(&sizes, 1e-3, 1e-8)?);
    }
    if matches!(a.suite, Suite::All | Suite::Block) {
        let mode = match a.mode {
            Mode::Semantic => VerifyMode::Semantic,
            Mode::FullStatevector => VerifyMode::FullStatevector,
        };
        block = Some(blockenc::verify(&params, a.epsilon, mode)?);
    }
    let pass = checks.iter().all(|c| c.passed) && block.as_ref().is_none_or(|b| b.pass);
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "pass": pass,
        "checks": checks,
        "block_encoding": block,
    });
    emit(&a.output, &format!("{report}\n"))?;
    if pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

#[derive(serde::Serialize)]
struct DynamicsRow {
    t: f64,
    re_g: f64,
    im_g: f64,
    abs_g: f64,
    nu: f64,
}

fn cmd_dynamics(a: &DynamicsArgs) -> Result<(), Failure> {
    if a.steps == 0 || !(a.t_max >= 0.0) {
        return Err(Failure::Usage("need --steps > 0 and --t-max >= 0".into()));
    }
    let oracle = DynamicsOracle::new(&a.model.params(a.n), DEFAULT_DENSE_LIMIT)?;
    let rows: Vec<DynamicsRow> = (0..=a.steps)
        .map(|k| {
            let t = a.t_max * k as f64 / a.steps as f64;
            let g = oracle.vacuum_persistence(t);
            DynamicsRow { t, re_g: g.re, im_g: g.im, abs_g: g.norm(), nu: oracle.particle_density(t) }
        })
        .collect();
    table(&a.out, &rows)
}

fn cmd_ae(a: &AeArgs) -> Result<(), Failure> {
    if a.hoeffding || a.chebae {
        let mut v = json!({ "schema_version": SCHEMA_VERSION, "epsilon": a.epsilon });
        if a.hoeffding {
            v["hoeffding_queries"] = json!(ae::hoeffding_queries(a.epsilon, a.delta)?);
            v["delta"] = json!(a.delta);
        }
        if a.chebae {
            v["chebae_queries"] = json!(ae::chebae_query_formula(a.epsilon)?);
        }
        return emit(&a.output, &format!("{v}\n"));
    }
    if a.omega.is_empty() || a.runs == 0 {
        return Err(Failure::Usage("need at least one --omega and --runs > 0".into()));
    }
    let mut text = String::new();
    let mut summary = Vec::new();
    for &w in &a.omega {
        let runs = ae::batch(w, a.epsilon, a.delta, a.seed, a.runs)?;
        if !a.summary_only {
            for r in &runs {
                text.push_str(&format!("{}\n", r.record()));
            }
        }
        let n = runs.len() as f64;
        summary.push(json!({
            "omega": w,
            "runs": runs.len(),
            "mean_queries": runs.iter().map(|r| r.queries() as f64).sum::<f64>() / n,
            "max_queries": runs.iter().map(|r| r.queries()).max(),
            "failure_rate": runs.iter().filter(|r| !r.succeeded).count() as f64 / n,
        }));
    }
    let all = json!({
        "schema_version": SCHEMA_VERSION,
        "summary": summary,
        "epsilon": a.epsilon,
        "delta": a.delta,
        "seed": a.seed,
        "chebae_queries": ae::chebae_query_formula(a.epsilon)?,
    });
    text.push_str(&format!("{all}\n"));
    emit(&a.output, &text)
}

#[derive(serde::Serialize)]
struct PhysicalRow {
    #[serde(rename = "N")]
    n: usize,
    wt: f64,
    t_count: u64,
    p_phys: f64,
    code_distance: u64,
    logical_qubits: u64,
    physical_qubits: u64,
}

fn cmd_physical(a: &PhysicalArgs) -> Result<(), Failure> {
    if a.sizes.is_empty() || a.p_phys.is_empty() {
        return Err(Failure::Usage("need at least one --N and --p".into()));
    }
    let mut rows = Vec::new();
    for &n in &a.sizes {
        let params = a.model.params(n);
        let t = estimator::vpa_cost(&params, params.time_from_wt(a.wt))?.t_count;
        for &p in &a.p_phys {
            let e = estimator::physical_qubits(t, estimator::logical_qubits(n as u64), p)?;
            rows.push(PhysicalRow {
                n,
                wt: a.wt,
                t_count: t,
                p_phys: p,
                code_distance: e.code_distance,
                logical_qubits: e.logical_qubits,
                physical_qubits: e.physical_qubits,
            });
        }
    }
    table(&a.out, &rows)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Estimate(a) => cmd_estimate(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Dynamics(a) => cmd_dynamics(a),
        Command::Ae(a) => cmd_ae(a),
        Command::Physical(a) => cmd_physical(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
