//! `nodalvol`: reproducible runs of the nodal-volume experiments.
//!
//! Every artifact starts with the tool version and the fully resolved run
//! configuration, so it can be regenerated with `--config`.

mod commands;
mod config;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::{CuboidDist, CuboidStats, McValidate, RwConstants, RwDensity};
use crate::config::{resolve, CliError};

#[derive(Debug, Parser)]
#[command(
    name = "nodalvol",
    version,
    about = "Nodal-volume statistics of cuboids and random waves"
)]
struct Cli {
    /// Seed for every random stream of the run.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads (defaults to all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON file whose keys override the command-line parameters.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Windowed mean and variance of the rescaled nodal volume over an energy sweep.
    CuboidStats(CuboidStats),
    /// Histogram of the rescaled nodal volume in one window, with a KS distance to the limit.
    CuboidDist(CuboidDist),
    /// Nodal density profile of boundary-adapted random waves.
    RwDensity(RwDensity),
    /// Bulk density, boundary ratio, correction amplitudes and boundary constants.
    RwConstants(RwConstants),
    /// Monte Carlo estimates against the analytic correlators and densities.
    McValidate(McValidate),
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("cannot start {n} worker threads: {e}")))?;
    }
    let file = cli.config.as_deref();
    let seed = cli.seed;
    let artifact = match cli.command {
        Command::CuboidStats(a) => {
            let (a, seed, info) = resolve("cuboid-stats", a, seed, file)?;
            commands::cuboid_stats(&a, seed, &info)?
        }
        Command::CuboidDist(a) => {
            let (a, seed, info) = resolve("cuboid-dist", a, seed, file)?;
            commands::cuboid_dist(&a, seed, &info)?
        }
        Command::RwDensity(a) => {
            let (a, seed, info) = resolve("rw-density", a, seed, file)?;
            commands::rw_density(&a, seed, &info)?
        }
        Command::RwConstants(a) => {
            let (a, seed, info) = resolve("rw-constants", a, seed, file)?;
            commands::rw_constants(&a, seed, &info)?
        }
        Command::McValidate(a) => {
            let (a, seed, info) = resolve("mc-validate", a, seed, file)?;
            commands::mc_validate(&a, seed, &info)?
        }
    };
    // written only once the run has succeeded, so a failed run leaves no file
    match cli.out {
        Some(path) => {
            fs::write(&path, artifact).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => std::io::stdout()
            .write_all(artifact.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nodalvol: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
