use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use eraser_cli::commands::{cmd_analytic, cmd_sample, cmd_verify, exit_code, Ordering};

/// Simulator for a two-photon delayed-choice quantum eraser.
///
/// Exit codes: 0 on success, 1 when a verification check fails, 2 on
/// usage, IO, or config-parse errors.
#[derive(Parser)]
#[command(name = "eraser-sim", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the analytic coincidence table as CSV.
    Analytic {
        /// Experiment description (.exp file).
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw photon-by-photon events; write a counts CSV and a JSON summary
    /// (at the same path with a .json extension).
    Sample {
        /// Experiment description (.exp file).
        #[arg(long)]
        config: PathBuf,
        /// Number of events to draw (falls back to the config, then 100000).
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        trials: Option<u64>,
        /// RNG seed (falls back to the config, then ERASER_SIM_SEED, then 0).
        #[arg(long)]
        seed: Option<u64>,
        /// Narrative time ordering recorded in the summary (labeling only).
        #[arg(long, value_enum, default_value_t = Ordering::AfterDetection)]
        ordering: Ordering,
        /// Output CSV path for the counts.
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the configured experiment against its closed-form claims and
    /// emit a JSON report.
    Verify {
        /// Experiment description (.exp file).
        #[arg(long)]
        config: PathBuf,
        /// Narrative time ordering recorded in the report (labeling only).
        #[arg(long, value_enum, default_value_t = Ordering::AfterDetection)]
        ordering: Ordering,
        /// Report path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Analytic { config, out } => cmd_analytic(&config, out.as_deref()).map(|()| true),
        Command::Sample {
            config,
            trials,
            seed,
            ordering,
            out,
        } => cmd_sample(&config, trials, seed, ordering, &out).map(|()| true),
        Command::Verify {
            config,
            ordering,
            out,
        } => cmd_verify(&config, ordering, out.as_deref()),
    };
    if let Err(e) = &outcome {
        eprintln!("error: {e}");
    }
    ExitCode::from(exit_code(&outcome))
}
