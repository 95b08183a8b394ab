// SPDX-License-Identifier: Apache-2.0

//! `multiboson`: output distributions, delay scans and sampling for
//! partially distinguishable photons in linear interferometers.

mod commands;
mod error;
mod scenario;
mod validate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{DipArgs, Output, PermanentAlgorithm};
use error::{CliError, EXIT_OK};
use scenario::Format;

#[derive(Parser)]
#[command(name = "multiboson", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the probability of every output sample.
    Distribution {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Sweep the emission delay of the second photon and write the
    /// coincidence probability.
    DipScan {
        #[arg(long)]
        scenario: PathBuf,
        /// Defaults to -5/Δω of the first photon.
        #[arg(long, allow_hyphen_values = true)]
        tau_min: Option<f64>,
        /// Defaults to 5/Δω of the first photon.
        #[arg(long, allow_hyphen_values = true)]
        tau_max: Option<f64>,
        #[arg(long, default_value_t = 101)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw output samples, one occupation vector per line.
    Sample {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Compute the permanent of a matrix read from JSON or CSV.
    Permanent {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_enum, default_value_t = PermanentAlgorithm::Ryser)]
        algorithm: PermanentAlgorithm,
    },
    /// Run the invariant checks that apply to a scenario.
    Validate {
        #[arg(long)]
        scenario: PathBuf,
    },
}

fn workers() -> usize {
    multiboson::thread_cap_from_env().unwrap_or_else(rayon::current_num_threads)
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Distribution { scenario, out, format } => {
            commands::distribution(&scenario, &Output { path: out, format })?
        }
        Command::DipScan { scenario, tau_min, tau_max, steps, out } => commands::dip(
            &scenario,
            &DipArgs { tau_min, tau_max, steps },
            &Output { path: out, format: None },
        )?,
        Command::Sample { scenario, count, seed, out, format } => {
            commands::sample_cmd(&scenario, count, seed, &Output { path: out, format })?
        }
        Command::Permanent { matrix, algorithm } => commands::permanent(&matrix, algorithm, workers())?,
        Command::Validate { scenario } => return validate::validate(&scenario),
    }
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("error")).init();
    if let Some(threads) = multiboson::thread_cap_from_env() {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            log::warn!("cannot size the worker pool: {e}");
        }
    }
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
