//! Command-line runner: select models, fields and checks; execute the
//! verification sweeps in parallel; emit human-readable or JSON reports;
//! regression mode replays the per-model expected ledger.
//!
//! Exit codes: 0 on success, 2 for unknown names or bad arguments, 3 when
//! the numerical oracle gate fails.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use harmonia_core::checks::{execute, known_check, list_checks, RunPlan};
use harmonia_core::harmonic::CheckConfig;
use harmonia_core::models;

#[derive(Parser)]
#[command(
    name = "harmonia",
    version,
    about = "pointwise verification of harmonic sections of form bundles on model manifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run checks against one or more catalog models.
    Run(RunArgs),
    /// List the model catalog.
    ListModels(ListArgs),
    /// List the available checks.
    ListChecks(ListArgs),
}

#[derive(Args)]
struct ListArgs {
    /// Output format: text or json.
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Args)]
struct RunArgs {
    /// Model id or glob (exact id, prefix*, or * for the whole catalog).
    #[arg(long, default_value = "*")]
    model: String,
    /// Restrict to these field names (comma separated).
    #[arg(long)]
    field: Option<String>,
    /// Checks to run (comma separated); defaults per mode.
    #[arg(long)]
    checks: Option<String>,
    /// Sample points per (model, field).
    #[arg(long, default_value_t = 50)]
    points: usize,
    /// RNG seed.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// First-derivative tolerance.
    #[arg(long, default_value_t = 1e-6)]
    tol_d1: f64,
    /// Second-derivative tolerance.
    #[arg(long, default_value_t = 1e-4)]
    tol_d2: f64,
    /// Write the report to this path instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: text or json.
    #[arg(long, default_value = "text")]
    format: String,
    /// Replay the expected ledger; exit nonzero on any mismatch.
    #[arg(long, default_value_t = false)]
    regression: bool,
    /// Run everything in the catalog (equivalent to --model '*').
    #[arg(long, default_value_t = false)]
    all: bool,
    /// Worker threads (HARMONIA_JOBS overrides).
    #[arg(long)]
    jobs: Option<usize>,
    /// Also dump per-point residuals as CSV to this path.
    #[arg(long)]
    emit_csv: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::ListModels(args) => {
            let descriptors: Vec<_> = models::list_ids()
                .iter()
                .map(|id| models::build(id).expect("catalog id builds").descriptor())
                .collect();
            if args.format == "json" {
                println!("{}", serde_json::to_string_pretty(&descriptors).unwrap());
            } else {
                for d in descriptors {
                    println!(
                        "{:<16} dim {}  {:<9} fields: {}",
                        d.id,
                        d.dim,
                        d.flavor,
                        d.fields.join(", ")
                    );
                }
            }
            ExitCode::SUCCESS
        }
        Command::ListChecks(args) => {
            if args.format == "json" {
                let rows: Vec<_> = list_checks()
                    .iter()
                    .map(|(n, d)| serde_json::json!({"name": n, "description": d}))
                    .collect();
                println!("{}", serde_json::to_string_pretty(&rows).unwrap());
            } else {
                for (name, desc) in list_checks() {
                    println!("{name:<18} {desc}");
                }
            }
            ExitCode::SUCCESS
        }
        Command::Run(args) => run(args),
    }
}

fn run(args: RunArgs) -> ExitCode {
    let pattern = if args.all { "*" } else { args.model.as_str() };
    let model_ids = models::select_ids(pattern);
    if model_ids.is_empty() {
        eprintln!("error: no model matches `{}`", args.model);
        return ExitCode::from(2);
    }
    let checks: Option<Vec<String>> = args
        .checks
        .as_ref()
        .map(|s| s.split(',').map(|x| x.trim().to_string()).collect());
    if let Some(list) = &checks {
        for c in list {
            if !known_check(c) {
                eprintln!("error: unknown check `{c}`");
                return ExitCode::from(2);
            }
        }
    }
    let fields: Option<Vec<String>> = args
        .field
        .as_ref()
        .map(|s| s.split(',').map(|x| x.trim().to_string()).collect());
    if let Some(list) = &fields {
        for f in list {
            let known = model_ids.iter().any(|id| {
                models::build(id)
                    .map(|e| e.field(f).is_some())
                    .unwrap_or(false)
            });
            if !known {
                eprintln!("error: field `{f}` not found on any selected model");
                return ExitCode::from(2);
            }
        }
    }

    let jobs = std::env::var("HARMONIA_JOBS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .or(args.jobs);
    if let Some(n) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .ok();
    }

    let plan = RunPlan {
        model_ids,
        fields,
        checks,
        config: CheckConfig {
            tol_d1: args.tol_d1,
            tol_d2: args.tol_d2,
            sample_count: args.points.max(1),
            seed: args.seed,
            ..CheckConfig::default()
        },
        regression: args.regression,
        oracle_points: 2,
    };
    let report = execute(&plan);

    let body = if args.format == "json" {
        report.to_json()
    } else {
        report.to_text()
    };
    match &args.out {
        Some(path) => {
            let mut f = std::fs::File::create(path).expect("create report file");
            f.write_all(body.as_bytes()).expect("write report");
        }
        None => println!("{body}"),
    }
    if let Some(path) = &args.emit_csv {
        std::fs::write(path, report.to_csv()).expect("write csv");
    }

    if !report.oracle_ok {
        eprintln!("oracle gate failed");
        return ExitCode::from(3);
    }
    if args.regression && report.summary.failed > 0 {
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
