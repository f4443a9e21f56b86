//! Batch front-end for the ladder excitation simulator: experiment configs
//! in, CSV/JSON data out.

mod config;
mod error;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{parse_config, Experiment};
use crate::error::CliError;
use crate::run::{list_presets, run, RunOptions};

#[derive(Parser)]
#[command(
    name = "ladder-sim",
    version,
    about = "Simulator for coherent multi-photon ladder excitation of trapped atoms",
    long_about = "Propagates rotating-frame amplitude equations with radiative decay for \
                  N-level excitation ladders, reduces them to effective two-level models, and \
                  averages the dynamics over Gaussian beams and thermal atom positions. \
                  Experiments are described by JSON config documents; outputs are CSV data \
                  files plus a run manifest, byte-identical for identical configs."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Path to the experiment configuration document (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; defaults to the config's output_path, then
    /// $LADDER_SIM_OUT, then the working directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Radial quadrature nodes for spatially averaged quantities.
    #[arg(long)]
    nodes: Option<usize>,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a transition detuning and fit the excitation peak.
    Spectrum(RunArgs),
    /// Time trace of the level populations at one position.
    Rabi(RunArgs),
    /// First-peak amplitude versus the spot/atom-cloud ratio.
    Coverage(RunArgs),
    /// Excitation of a neighboring atom cloud displaced from the beams.
    Crosstalk(RunArgs),
    /// Reduced two-level model parameters and validity diagnostics.
    Effective(RunArgs),
    /// List the built-in schemes.
    Presets,
}

fn experiment_of(command: &Command) -> Option<(Experiment, &RunArgs)> {
    match command {
        Command::Spectrum(a) => Some((Experiment::Spectrum, a)),
        Command::Rabi(a) => Some((Experiment::Rabi, a)),
        Command::Coverage(a) => Some((Experiment::Coverage, a)),
        Command::Crosstalk(a) => Some((Experiment::Crosstalk, a)),
        Command::Effective(a) => Some((Experiment::Effective, a)),
        Command::Presets => None,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match try_main(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn try_main(command: &Command) -> Result<(), CliError> {
    let Some((experiment, args)) = experiment_of(command) else {
        print!("{}", list_presets());
        return Ok(());
    };

    if let Some(threads) = args.threads {
        if threads == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        // ignore the error when a pool already exists (tests, repeat calls)
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }

    let document = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", args.config.display())))?;
    let config = parse_config(&document)?;
    if config.experiment != experiment {
        return Err(CliError::Config(format!(
            "config selects experiment \"{}\", but the \"{}\" subcommand was invoked",
            config.experiment.name(),
            experiment.name(),
        )));
    }

    let out_dir = args
        .out
        .clone()
        .or_else(|| config.output_path.as_ref().map(PathBuf::from))
        .or_else(|| std::env::var_os("LADDER_SIM_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));

    let mut options = RunOptions::default();
    if let Some(nodes) = args.nodes {
        if nodes < 8 {
            return Err(CliError::Config("--nodes must be at least 8".into()));
        }
        options.nodes = nodes;
    }

    let output = run(&config, &options, &out_dir)?;
    println!("{}", output.summary);
    for file in &output.files {
        println!("wrote {}", file.display());
    }
    Ok(())
}
