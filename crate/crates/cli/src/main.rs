//! `ergopose`: runs the drilling posture case study from a JSON
//! configuration and writes one CSV per analysis plus a run manifest.
//!
//! Exit status: 0 success, 2 configuration error, 3 infeasible scenario,
//! 4 I/O error.

mod manifest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ergopose_core::scenario::{cmd_fatigue_curve, cmd_pareto, cmd_predict, cmd_sweep, cmd_work_rest};
use ergopose_core::{DrillingScenario, Error, Table, Weights};

use crate::manifest::RunRecord;

#[derive(Debug, Parser)]
#[command(name = "ergopose", version, about = "Fatigue-aware posture analysis for a drilling task")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, clap::Args)]
struct Common {
    /// Scenario configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Also evaluate capacity after one work phase.
    #[arg(long)]
    fatigued: bool,
    /// Number of distance grid points.
    #[arg(long)]
    steps: Option<usize>,
    /// Objective weights as `discomfort,fatigue`.
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<f64>>,
    /// Recorded in the manifest; every analysis is deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Capacity decay under the analysis-posture load.
    FatigueCurve(Common),
    /// Work-rest capacity schedule.
    WorkRest(Common),
    /// Objectives along the shoulder-to-hole distance.
    Sweep(Common),
    /// Pareto front and weight-line selections.
    Pareto(Common),
    /// Optimal working distance.
    Predict(Common),
}

impl Command {
    fn parts(&self) -> (&'static str, &Common) {
        match self {
            Command::FatigueCurve(c) => ("fatigue-curve", c),
            Command::WorkRest(c) => ("work-rest", c),
            Command::Sweep(c) => ("sweep", c),
            Command::Pareto(c) => ("pareto", c),
            Command::Predict(c) => ("predict", c),
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::InvalidParameter(_) => 2,
        Error::NoSolution(_) | Error::InvalidState(_) => 3,
        Error::Io(_) => 4,
    }
}

fn load(args: &Common) -> Result<(DrillingScenario, Vec<u8>), Error> {
    let bytes = std::fs::read(&args.config)?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| Error::Config(format!("config is not UTF-8: {e}")))?;
    let mut scenario = DrillingScenario::from_json(&text)?;
    scenario.base_dir = args.config.parent().map(Path::to_path_buf).unwrap_or_default();
    if let Some(steps) = args.steps {
        scenario.sweep.steps = steps;
    }
    if let Some(w) = &args.weights {
        if w.len() != 2 {
            return Err(Error::Config(format!("--weights takes two values, got {}", w.len())));
        }
        let w = Weights::new(w[0], w[1]).map_err(|e| Error::Config(e.to_string()))?;
        scenario.weights = [w.discomfort, w.fatigue];
    }
    scenario.validate()?;
    Ok((scenario, bytes))
}

fn run(name: &str, args: &Common) -> Result<Vec<PathBuf>, Error> {
    let (scenario, bytes) = load(args)?;
    let table: Table = match name {
        "fatigue-curve" => cmd_fatigue_curve(&scenario)?,
        "work-rest" => cmd_work_rest(&scenario)?,
        "sweep" => cmd_sweep(&scenario, args.fatigued)?,
        "pareto" => cmd_pareto(&scenario)?,
        "predict" => cmd_predict(&scenario, args.fatigued)?,
        _ => unreachable!("subcommand names are fixed"),
    };
    std::fs::create_dir_all(&args.out)?;
    let csv = args.out.join(format!("{}.csv", name.replace('-', "_")));
    std::fs::write(&csv, table.to_csv())?;
    log::info!("{name}: {} rows -> {}", table.rows.len(), csv.display());

    let record = RunRecord::new(name, &bytes, &args.config, args.seed, args.steps, args.weights.clone(), vec![csv.clone()]);
    let manifest = args.out.join("run_manifest.json");
    record.write(&manifest)?;
    Ok(vec![csv, manifest])
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (name, args) = cli.command.parts();
    match run(name, args) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("ergopose {name}: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
