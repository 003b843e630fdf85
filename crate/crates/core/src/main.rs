//! Command-line interface to the sensor-selection toolkit.
//!
//! Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 infeasible
//! model.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use kfss::bound_engine::{improved_ratio_bound, optimality_certificate, BoundError, MTraceMode};
use kfss::experiment_harness::{
    bound_audit, brute_force_optimal, generate_random_system, read_records, run_campaign,
    write_histogram_csv, write_offending_models, write_records, write_stats_json,
    write_summary_csv, GeneratorConfig, OracleError,
};
use kfss::greedy_selector::greedy_select;
use kfss::matrix_kernel::KernelError;
use kfss::system_model::{
    dmatrix_to_rows, evaluate_cost, load_model, save_model, CostError, ModelFileError, Selection,
    SystemModel,
};

#[derive(Parser)]
#[command(
    name = "kfss",
    version,
    about = "Sensor selection for stable discrete-time linear systems under steady-state Kalman filtering"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MModeArg {
    Lyapunov,
    EnumerateFirstPick,
}

impl From<MModeArg> for MTraceMode {
    fn from(m: MModeArg) -> Self {
        match m {
            MModeArg::Lyapunov => MTraceMode::Lyapunov,
            MModeArg::EnumerateFirstPick => MTraceMode::EnumerateFirstPick,
        }
    }
}

#[derive(clap::Args, Clone)]
struct EnsembleArgs {
    /// State dimension.
    #[arg(long, default_value_t = 5)]
    n: usize,
    /// Number of candidate sensors.
    #[arg(long, default_value_t = 10)]
    sensors: usize,
    /// Selection budget.
    #[arg(long = "q", default_value_t = 4)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.1)]
    radius_lo: f64,
    #[arg(long, default_value_t = 0.9)]
    radius_hi: f64,
    #[arg(long, default_value_t = 0.5)]
    w_regularizer: f64,
    #[arg(long, default_value_t = 0.5)]
    v_lo: f64,
    #[arg(long, default_value_t = 1.5)]
    v_hi: f64,
}

impl From<EnsembleArgs> for GeneratorConfig {
    fn from(a: EnsembleArgs) -> Self {
        GeneratorConfig {
            n: a.n,
            sensors: a.sensors,
            budget: a.budget,
            spectral_radius_range: (a.radius_lo, a.radius_hi),
            w_regularizer: a.w_regularizer,
            v_range: (a.v_lo, a.v_hi),
            seed: a.seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve the steady-state covariance and cost for one selection.
    Solve {
        #[arg(long)]
        model: PathBuf,
        /// Comma-separated sensor indices; omit for the empty selection.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        select: Vec<usize>,
        /// Select every sensor.
        #[arg(long, conflicts_with = "select")]
        all: bool,
    },
    /// Run greedy selection and print the full trace.
    Greedy {
        #[arg(long)]
        model: PathBuf,
        #[arg(long = "q")]
        budget: usize,
    },
    /// Compute the performance-bound report.
    Bounds {
        #[arg(long)]
        model: PathBuf,
        #[arg(long = "q")]
        budget: usize,
        #[arg(long, value_enum, default_value = "lyapunov")]
        m_mode: MModeArg,
    },
    /// Check the greedy-optimality certificate.
    Certify {
        #[arg(long)]
        model: PathBuf,
    },
    /// Exact optimum by exhaustive enumeration.
    Optimal {
        #[arg(long)]
        model: PathBuf,
        #[arg(long = "q")]
        budget: usize,
    },
    /// Generate one random system to a model file.
    Generate {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        /// Index of the system within the seeded ensemble.
        #[arg(long, default_value_t = 0)]
        index: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a Monte Carlo campaign and write records, stats, and CSVs.
    Campaign {
        /// JSON file holding a generator config; flags override nothing when
        /// this is given.
        #[arg(long, conflicts_with_all = ["n", "sensors", "budget", "seed", "radius_lo", "radius_hi", "w_regularizer", "v_lo", "v_hi"])]
        config: Option<PathBuf>,
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[arg(long, default_value_t = 600)]
        systems: usize,
        /// Worker threads; defaults to KFSS_WORKERS or the machine's
        /// parallelism.
        #[arg(long)]
        workers: Option<usize>,
        /// Output directory for records.jsonl, stats.json, summary.csv,
        /// histogram.csv.
        #[arg(long)]
        out: PathBuf,
    },
    /// Audit a records file against its bounds; write offender models.
    Audit {
        #[arg(long)]
        records: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// CLI failure with its process exit code.
#[derive(Debug)]
enum CliError {
    Usage(String),
    Numerical(String),
    Infeasible(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) | CliError::Infeasible(m) => {
                f.write_str(m)
            }
        }
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Infeasible(_) => 3,
        }
    }
}

impl From<ModelFileError> for CliError {
    fn from(e: ModelFileError) -> Self {
        match e {
            ModelFileError::Rejected(_) => CliError::Infeasible(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<KernelError> for CliError {
    fn from(e: KernelError) -> Self {
        match e {
            KernelError::Infeasible(_) | KernelError::Unstable { .. } => {
                CliError::Infeasible(e.to_string())
            }
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<CostError> for CliError {
    fn from(e: CostError) -> Self {
        match e {
            CostError::Solver(k) => k.into(),
            CostError::SelectionMismatch { .. } => CliError::Usage(e.to_string()),
        }
    }
}

impl From<BoundError> for CliError {
    fn from(e: BoundError) -> Self {
        match e {
            BoundError::InvalidBudget { .. } => CliError::Usage(e.to_string()),
            BoundError::Cost(c) => c.into(),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::TooManySubsets { .. } => CliError::Numerical(e.to_string()),
            OracleError::InvalidBudget { .. } => CliError::Usage(e.to_string()),
            OracleError::Cost(c) => c.into(),
            OracleError::Greedy(g) => g.into(),
        }
    }
}

impl From<kfss::greedy_selector::GreedyError> for CliError {
    fn from(e: kfss::greedy_selector::GreedyError) -> Self {
        match e {
            kfss::greedy_selector::GreedyError::Cost(c) => c.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn load(path: &PathBuf) -> Result<SystemModel, CliError> {
    Ok(load_model(path)?)
}

fn print_json(value: &serde_json::Value) -> Result<(), CliError> {
    println!(
        "{}",
        serde_json::to_string_pretty(value).map_err(|e| CliError::Usage(e.to_string()))?
    );
    Ok(())
}

fn to_value<T: serde::Serialize>(value: &T) -> Result<serde_json::Value, CliError> {
    serde_json::to_value(value).map_err(|e| CliError::Usage(e.to_string()))
}

fn resolve_workers(flag: Option<usize>) -> usize {
    flag.or_else(|| {
            std::env::var("KFSS_WORKERS")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|p| p.get())
                .unwrap_or(1)
        })
        .max(1)
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Solve { model, select, all } => {
            let model = load(&model)?;
            let indices: Vec<usize> = if all {
                (0..model.sensor_count()).collect()
            } else {
                select
            };
            let budget = indices.len().max(1).min(model.sensor_count().max(1));
            let selection = Selection::from_indices(&indices, model.sensor_count(), budget)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let costed = evaluate_cost(&model, &selection)?;
            print_json(&json!({
                "selection": costed.selection.indices(),
                "cost": costed.cost,
                "sigma": dmatrix_to_rows(costed.sigma.as_matrix()),
                "diagnostics": to_value(&costed.diagnostics)?,
            }))
        }
        Command::Greedy { model, budget } => {
            let model = load(&model)?;
            let trace = greedy_select(&model, budget)?;
            let mut value = to_value(&trace)?;
            value["final_cost"] = json!(trace.final_cost());
            print_json(&value)
        }
        Command::Bounds {
            model,
            budget,
            m_mode,
        } => {
            let model = load(&model)?;
            let report = improved_ratio_bound(&model, budget, m_mode.into())?;
            print_json(&to_value(&report)?)
        }
        Command::Certify { model } => {
            let model = load(&model)?;
            let certificate = optimality_certificate(&model);
            print_json(&to_value(&certificate)?)
        }
        Command::Optimal { model, budget } => {
            let model = load(&model)?;
            let optimal = brute_force_optimal(&model, budget)?;
            print_json(&json!({
                "selection": optimal.selection.indices(),
                "cost": optimal.cost,
            }))
        }
        Command::Generate {
            ensemble,
            index,
            out,
        } => {
            let config: GeneratorConfig = ensemble.into();
            config
                .validate()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let model = generate_random_system(&config, index)
                .map_err(|e| CliError::Infeasible(e.to_string()))?;
            save_model(&model, &out)?;
            print_json(&json!({
                "written": out,
                "n": model.n(),
                "sensors": model.sensor_count(),
                "spectral_radius": model.spectral_radius(),
            }))
        }
        Command::Campaign {
            config,
            ensemble,
            systems,
            workers,
            out,
        } => {
            let config: GeneratorConfig = match config {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
                    serde_json::from_str(&text).map_err(|e| CliError::Usage(e.to_string()))?
                }
                None => ensemble.into(),
            };
            let workers = resolve_workers(workers);
            std::fs::create_dir_all(&out)
                .map_err(|e| CliError::Usage(format!("{}: {e}", out.display())))?;
            let outcome = run_campaign(&config, systems, workers).map_err(|e| match e {
                kfss::experiment_harness::CampaignError::Config(c) => {
                    CliError::Usage(c.to_string())
                }
                kfss::experiment_harness::CampaignError::ZeroWorkers => {
                    CliError::Usage(e.to_string())
                }
                other => CliError::Numerical(other.to_string()),
            })?;
            let write = |e: kfss::experiment_harness::RecordsError| CliError::Usage(e.to_string());
            write_records(&out.join("records.jsonl"), &config, &outcome.records)
                .map_err(write)?;
            write_stats_json(&out.join("stats.json"), &outcome.stats).map_err(write)?;
            write_summary_csv(&out.join("summary.csv"), &outcome.records).map_err(write)?;
            write_histogram_csv(&out.join("histogram.csv"), &outcome.stats).map_err(write)?;
            print_json(&to_value(&outcome.stats)?)
        }
        Command::Audit { records, out } => {
            let (header, records) =
                read_records(&records).map_err(|e| CliError::Usage(e.to_string()))?;
            let report = bound_audit(&records);
            std::fs::create_dir_all(&out)
                .map_err(|e| CliError::Usage(format!("{}: {e}", out.display())))?;
            let json_path = out.join("audit.json");
            std::fs::write(
                &json_path,
                serde_json::to_string_pretty(&report)
                    .map_err(|e| CliError::Usage(e.to_string()))?
                    + "\n",
            )
            .map_err(|e| CliError::Usage(e.to_string()))?;
            let mut offenders: Vec<u64> = report
                .rold_violations
                .iter()
                .chain(&report.rnew_violations)
                .chain(&report.ordering_violations)
                .copied()
                .collect();
            offenders.sort_unstable();
            offenders.dedup();
            if !offenders.is_empty() {
                write_offending_models(&header.config, &offenders, &out)
                    .map_err(|e| CliError::Numerical(e.to_string()))?;
            }
            print_json(&to_value(&report)?)
        }
    }
}
