//! CSV and JSON serialization of tables, runs, and reports.
//!
//! Output is a deterministic function of (config, flags): field orders are
//! fixed, probabilities are printed to 12 significant digits, and nothing
//! time- or host-dependent is written.

use std::io::Write;

use eraser_core::eraser::{CoincidenceTable, DetectorId};
use eraser_core::expdsl::ExperimentConfig;
use eraser_core::montecarlo::{ChiSquare, SampleRun};
use serde::Serialize;

/// 12-significant-digit scientific notation used for all probabilities.
pub fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

/// `detector,bin,probability,conditional_probability,visibility_of_row`
/// rows for every populated detector; detectors that receive no
/// probability under the layout are omitted entirely.
pub fn analytic_csv(table: &CoincidenceTable) -> String {
    let mut out =
        String::from("detector,bin,probability,conditional_probability,visibility_of_row\n");
    for r in DetectorId::ALL {
        if table.row_is_empty(r) {
            continue;
        }
        let conditional = table.conditional_row(r).expect("row not empty");
        // A single bin resolves no fringe; its row reports zero visibility.
        let visibility = table.row_visibility(r).unwrap_or(0.0);
        for (bin, &p_cond) in conditional.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.label(),
                bin,
                sig12(table.probability(r, bin)),
                sig12(p_cond),
                sig12(visibility),
            ));
        }
    }
    out
}

/// `detector,bin,count` rows for every detector the table populates.
pub fn counts_csv(run: &SampleRun, table: &CoincidenceTable) -> String {
    let mut out = String::from("detector,bin,count\n");
    for r in DetectorId::ALL {
        if table.row_is_empty(r) {
            continue;
        }
        for bin in 0..run.bins() {
            out.push_str(&format!("{},{},{}\n", r.label(), bin, run.count(r, bin)));
        }
    }
    out
}

/// Structured echo of the parsed config, embedded in every JSON artifact.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub layout: String,
    pub bins: usize,
    pub cycles: f64,
    pub phi0: f64,
    pub merge_paths: bool,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
}

impl From<&ExperimentConfig> for ConfigEcho {
    fn from(config: &ExperimentConfig) -> Self {
        Self {
            layout: config.layout.as_str().to_string(),
            bins: config.bins,
            cycles: config.cycles,
            phi0: config.phi0,
            merge_paths: config.merge_paths,
            seed: config.seed,
            trials: config.trials,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ChiSquareSummary {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

impl From<ChiSquare> for ChiSquareSummary {
    fn from(fit: ChiSquare) -> Self {
        Self {
            statistic: fit.statistic,
            dof: fit.dof,
            p_value: fit.p_value,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DetectorSummary {
    pub detector: String,
    pub count: u64,
    pub frequency: f64,
    /// Raw-count fringe visibility; absent for rows with no counts.
    pub visibility_estimate: Option<f64>,
}

/// The machine-readable summary written next to a sample run's counts.
#[derive(Debug, Clone, Serialize)]
pub struct SampleSummary {
    pub version: String,
    pub config: ConfigEcho,
    /// Narrative time ordering label; statistics are ordering-independent.
    pub ordering: &'static str,
    pub seed: u64,
    pub trials: u64,
    pub chi_square: ChiSquareSummary,
    pub detectors: Vec<DetectorSummary>,
}

pub fn to_json(value: &impl Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable report");
    text.push('\n');
    text
}

/// Write to the path, or stdout when no path is given.
pub fn write_out(path: Option<&std::path::Path>, content: &str) -> std::io::Result<()> {
    match path {
        Some(path) => std::fs::write(path, content),
        None => std::io::stdout().write_all(content.as_bytes()),
    }
}
