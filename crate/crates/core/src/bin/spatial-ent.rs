//! Command-line front end for configured experiments.
//!
//! Exit codes: 0 on success, 1 for configuration or usage errors, 2 when a
//! valid configuration fails at run time.

use clap::{Parser, Subcommand};
use spatial_entanglement::experiment::config::{MonteCarlo, DEFAULT_SHOTS};
use spatial_entanglement::experiment::{
    parse_config, resolve_output_path, run, run_single, write_report, ExperimentConfig, ExperimentReport, ReportFormat,
};
use spatial_entanglement::{ConfigError, Error};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "spatial-ent",
    version,
    about = "Spatial entanglement of bright optical beams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Experiment configuration (JSON).
    config: PathBuf,
    /// Report path; relative paths are placed under $SPATIAL_ENT_OUTPUT_DIR if set.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_parser = parse_format)]
    format: Option<ReportFormat>,
    /// Monte Carlo seed; enables sampling with default shots if not configured.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the configured point, ignoring any sweep.
    Run(RunArgs),
    /// Evaluate every point of the configured sweep.
    Sweep(RunArgs),
    /// Check a configuration without running it.
    Validate { config: PathBuf },
}

fn parse_format(s: &str) -> Result<ReportFormat, String> {
    s.parse().map_err(|e: ConfigError| e.to_string())
}

enum Failure {
    Config(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(c) => Failure::Config(c.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn load(path: &Path) -> Result<ExperimentConfig, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn execute(args: RunArgs, sweep: bool) -> Result<(), Failure> {
    let mut config = load(&args.config)?;
    if let Some(format) = args.format {
        config.output.format = format;
    }
    if let Some(output) = &args.output {
        config.output.path = output.display().to_string();
    }
    if let Some(seed) = args.seed {
        let mc = config.monte_carlo.get_or_insert(MonteCarlo {
            shots: DEFAULT_SHOTS,
            seed,
        });
        mc.seed = seed;
    }
    config.validate().map_err(|e| Failure::Config(e.to_string()))?;
    let report: ExperimentReport = if sweep {
        if config.sweep.is_none() {
            return Err(Failure::Config(
                "`sweep` needs a configuration with a sweep section".into(),
            ));
        }
        run(&config)?
    } else {
        run_single(&config)?
    };
    let path = resolve_output_path(&config.output.path);
    write_report(&report, config.output.format, &path)?;
    let entangled = report.results.iter().filter(|p| p.entangled()).count();
    println!(
        "{}: {} point(s), {} entangled, report written to {}",
        config.scenario.as_str(),
        report.results.len(),
        entangled,
        path.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Run(args) => execute(args, false),
        Command::Sweep(args) => execute(args, true),
        Command::Validate { config } => load(&config).map(|c| {
            let points = c.sweep.map_or(1, |s| s.steps);
            println!(
                "{}: valid ({} scenario, {points} point(s))",
                config.display(),
                c.scenario.as_str()
            );
        }),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
