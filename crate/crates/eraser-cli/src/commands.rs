//! The three subcommands: analytic tables, Monte Carlo runs, and
//! verification reports.

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use eraser_core::eraser::{DetectorId, Experiment};
use eraser_core::expdsl::{self, ExperimentConfig, ParseError};
use eraser_core::montecarlo::{chi_square, fringe_histogram, sample};

use crate::output::{
    analytic_csv, counts_csv, to_json, write_out, ConfigEcho, DetectorSummary, SampleSummary,
};
use crate::report::verify_config;

/// Trials drawn when neither the flag nor the config specifies a count.
pub const DEFAULT_TRIALS: u64 = 100_000;
/// Seed used when no flag, config key, or environment variable names one.
pub const DEFAULT_SEED: u64 = 0;
/// Environment variable consulted as the fallback seed.
pub const SEED_ENV_VAR: &str = "ERASER_SIM_SEED";

/// Narrative time ordering of the run, echoed into reports. The final
/// state and every statistic are identical either way; whether photon II's
/// detection precedes photon I's random choice is a labeling matter only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Ordering {
    /// Photon II is detected before photon I meets the splitters
    /// (after-detection erasure, the delayed-choice narrative).
    #[default]
    AfterDetection,
    /// Photon I's choice happens first (simple erasure).
    BeforeDetection,
}

impl Ordering {
    pub fn label(self) -> &'static str {
        match self {
            Ordering::AfterDetection => "after-detection",
            Ordering::BeforeDetection => "before-detection",
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Config {
        path: PathBuf,
        source: ParseError,
    },
    Core(eraser_core::Error),
    InvalidEnvSeed(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Config { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::InvalidEnvSeed(value) => {
                write!(f, "{SEED_ENV_VAR}={value} is not a valid unsigned seed")
            }
        }
    }
}

impl std::error::Error for CliError {}

impl From<eraser_core::Error> for CliError {
    fn from(e: eraser_core::Error) -> Self {
        CliError::Core(e)
    }
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    expdsl::parse_bytes(&bytes).map_err(|source| CliError::Config {
        path: path.to_path_buf(),
        source,
    })
}

/// Seed precedence: `--seed` flag, then the config's `seed` key, then
/// `ERASER_SIM_SEED`, then [`DEFAULT_SEED`].
pub fn resolve_seed(flag: Option<u64>, config: &ExperimentConfig) -> Result<u64, CliError> {
    if let Some(seed) = flag.or(config.seed) {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV_VAR) {
        Ok(value) => value
            .parse::<u64>()
            .map_err(|_| CliError::InvalidEnvSeed(value)),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

/// Trials precedence: `--trials` flag, then the config's `trials` key,
/// then [`DEFAULT_TRIALS`].
pub fn resolve_trials(flag: Option<u64>, config: &ExperimentConfig) -> u64 {
    flag.or(config.trials).unwrap_or(DEFAULT_TRIALS)
}

/// Where the JSON summary of a sample run lands, next to its counts CSV.
pub fn summary_path(out: &Path) -> PathBuf {
    let candidate = out.with_extension("json");
    if candidate == out {
        out.with_extension("summary.json")
    } else {
        candidate
    }
}

/// `analytic`: serialize the coincidence table as CSV.
pub fn cmd_analytic(config_path: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let config = load_config(config_path)?;
    let table = Experiment::from_config(&config)?
        .run()?
        .coincidence_table()?;
    let csv = analytic_csv(&table);
    write_out(out, &csv).map_err(|source| CliError::Io {
        path: out.unwrap_or_else(|| Path::new("<stdout>")).to_path_buf(),
        source,
    })
}

/// `sample`: draw events, write the counts CSV to `out` and the JSON
/// summary next to it. Timing goes to stderr only, keeping both artifacts
/// byte-deterministic in (config, trials, seed).
pub fn cmd_sample(
    config_path: &Path,
    trials_flag: Option<u64>,
    seed_flag: Option<u64>,
    ordering: Ordering,
    out: &Path,
) -> Result<(), CliError> {
    let config = load_config(config_path)?;
    let trials = resolve_trials(trials_flag, &config);
    let seed = resolve_seed(seed_flag, &config)?;

    let table = Experiment::from_config(&config)?
        .run()?
        .coincidence_table()?;
    let started = Instant::now();
    let mut run = sample(&table, trials, seed)?;
    run.set_elapsed_seconds(started.elapsed().as_secs_f64());
    eprintln!(
        "sampled {trials} trials (seed {seed}) in {:.3} s",
        run.elapsed_seconds().unwrap_or_default()
    );

    let fit = chi_square(&run, &table)?;
    let detectors = DetectorId::ALL
        .iter()
        .filter(|&&r| !table.row_is_empty(r))
        .map(|&r| DetectorSummary {
            detector: r.label().to_string(),
            count: run.detector_total(r),
            frequency: run.detector_total(r) as f64 / trials as f64,
            visibility_estimate: fringe_histogram(&run, r).ok().map(|h| h.visibility),
        })
        .collect();
    let summary = SampleSummary {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: ConfigEcho::from(&config),
        ordering: ordering.label(),
        seed,
        trials,
        chi_square: fit.into(),
        detectors,
    };

    std::fs::write(out, counts_csv(&run, &table)).map_err(|source| CliError::Io {
        path: out.to_path_buf(),
        source,
    })?;
    let summary_out = summary_path(out);
    std::fs::write(&summary_out, to_json(&summary)).map_err(|source| CliError::Io {
        path: summary_out.clone(),
        source,
    })?;
    Ok(())
}

/// `verify`: emit the JSON report; returns whether every check passed.
pub fn cmd_verify(
    config_path: &Path,
    ordering: Ordering,
    out: Option<&Path>,
) -> Result<bool, CliError> {
    let config = load_config(config_path)?;
    let report = verify_config(&config, ordering.label())?;
    write_out(out, &to_json(&report)).map_err(|source| CliError::Io {
        path: out.unwrap_or_else(|| Path::new("<stdout>")).to_path_buf(),
        source,
    })?;
    Ok(report.passed)
}

/// Process exit code for a command outcome: 0 success, 1 verification
/// failure, 2 usage/parse/IO errors (clap reports its own usage errors as
/// 2 before this is reached).
pub fn exit_code(outcome: &Result<bool, CliError>) -> u8 {
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(_) => 2,
    }
}
