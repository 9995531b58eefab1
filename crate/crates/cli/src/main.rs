//! `bbkit`: batch verification front-end. One JSON config per run, JSON and
//! CSV reports out, exit code 0 = all checks passed, 1 = a mathematical
//! check failed, 2 = usage or configuration error.

mod commands;
mod config;

use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;

use bbkit_core::error::BbError;
use clap::{Parser, Subcommand};

#[derive(Debug)]
pub enum CliError {
    /// Bad usage, schema, or parameters → exit 2.
    Config(String),
    /// A verification failed or a pipeline hit a mathematical obstruction
    /// (zero pairing, divergence, counterexample) → exit 1.
    Math(String),
}

impl CliError {
    pub fn config<E: Display>(e: E) -> Self {
        CliError::Config(e.to_string())
    }

    pub fn math<E: Display>(e: E) -> Self {
        CliError::Math(e.to_string())
    }
}

impl From<BbError> for CliError {
    fn from(e: BbError) -> Self {
        match e {
            BbError::ZeroPairing(_)
            | BbError::HypothesisViolation(_)
            | BbError::Divergent(_)
            | BbError::Precondition(_) => CliError::Math(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "bbkit",
    about = "Verification harness for weighted time-frequency constructions",
    after_help = "Reports are deterministic: identical configs produce byte-identical JSON.\n\
                  BBKIT_THREADS caps internal parallelism (all pipelines are currently\n\
                  single-threaded; the variable is accepted for forward compatibility)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the structural-condition checkers for a weight system
    WeightsCheck(CommonArgs),
    /// Reconstruction error table over the function library
    StftReconstruct(CommonArgs),
    /// Tensor-kernel analysis/synthesis round-trip
    KernelRoundtrip(CommonArgs),
    /// Discrete summability report for the lattice-sampled system
    KotheReport(CommonArgs),
    /// Analysis/synthesis continuity bounds and the family-summability bound
    BoundsVerify(CommonArgs),
    /// Build the sinc-windowed bump and verify its sampling identities
    Phi0Check(CommonArgs),
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Path to the JSON run configuration
    #[arg(long)]
    config: PathBuf,
    /// Directory for the JSON + CSV reports (stdout only when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A finished run: the JSON report, CSV rows, and the overall verdict.
pub struct RunOutput {
    pub report: serde_json::Value,
    pub csv: String,
    pub pass: bool,
}

fn load<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let (name, args, output) = match &cli.command {
        Command::WeightsCheck(a) => ("weights-check", a, commands::weights_check(load(&a.config)?)?),
        Command::StftReconstruct(a) => {
            ("stft-reconstruct", a, commands::stft_reconstruct(load(&a.config)?)?)
        }
        Command::KernelRoundtrip(a) => {
            ("kernel-roundtrip", a, commands::kernel_roundtrip(load(&a.config)?)?)
        }
        Command::KotheReport(a) => ("kothe-report", a, commands::kothe_report(load(&a.config)?)?),
        Command::BoundsVerify(a) => ("bounds-verify", a, commands::bounds_verify(load(&a.config)?)?),
        Command::Phi0Check(a) => ("phi0-check", a, commands::phi0_check(load(&a.config)?)?),
    };
    let mut report = output.report;
    report["command"] = serde_json::Value::String(name.into());
    report["pass"] = serde_json::Value::Bool(output.pass);
    let rendered = serde_json::to_string_pretty(&report).map_err(CliError::config)?;
    println!("{rendered}");
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Config(format!("cannot create {}: {e}", dir.display())))?;
        let json_path = dir.join(format!("{name}.json"));
        std::fs::write(&json_path, rendered + "\n")
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", json_path.display())))?;
        let csv_path = dir.join(format!("{name}.csv"));
        std::fs::write(&csv_path, &output.csv)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", csv_path.display())))?;
    }
    Ok(if output.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Math(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(2)
        }
    }
}
