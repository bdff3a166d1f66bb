//! Photon-by-photon stochastic simulation: draw (detector, bin)
//! coincidence events from the analytic table, accumulate histograms, and
//! test agreement with a chi-square goodness-of-fit.
//!
//! Sampling is inverse-CDF over the canonical detector-major flattening of
//! the table, driven by the seeded generator from [`crate::rng`]. Identical
//! (seed, trials, table) always produce identical counts. Work may be
//! partitioned; partition k draws from ChaCha stream k of the same seed,
//! and the merged counts equal the single-threaded partitioned run by
//! construction.

mod gamma;

pub use gamma::{chi_square_sf, ln_gamma, regularized_upper_gamma};

use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::eraser::{visibility, CoincidenceTable, DetectorId, DETECTOR_COUNT};
use crate::error::{Error, Result};
use crate::rng;

/// Cells with expected count below this are pooled before the chi-square.
const POOL_MIN_EXPECTED: f64 = 5.0;

/// Counts of sampled coincidence events over (detector, bin), in the same
/// detector-major order as the table they were drawn from.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRun {
    seed: u64,
    trials: u64,
    bins: usize,
    counts: Vec<u64>,
    elapsed_seconds: Option<f64>,
}

impl SampleRun {
    /// Wrap externally accumulated counts (test and report plumbing).
    pub fn from_counts(seed: u64, bins: usize, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != DETECTOR_COUNT * bins {
            return Err(Error::ShapeMismatch);
        }
        let trials = counts.iter().sum();
        Ok(Self {
            seed,
            trials,
            bins,
            counts,
            elapsed_seconds: None,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, r: DetectorId, n: usize) -> u64 {
        self.counts[r.level() * self.bins + n]
    }

    pub fn row(&self, r: DetectorId) -> &[u64] {
        let start = r.level() * self.bins;
        &self.counts[start..start + self.bins]
    }

    pub fn detector_total(&self, r: DetectorId) -> u64 {
        self.row(r).iter().sum()
    }

    /// Wall-clock metadata a caller with a clock may attach; never part of
    /// the sampled data.
    pub fn elapsed_seconds(&self) -> Option<f64> {
        self.elapsed_seconds
    }

    pub fn set_elapsed_seconds(&mut self, seconds: f64) {
        self.elapsed_seconds = Some(seconds);
    }
}

fn cumulative(table: &CoincidenceTable) -> (Vec<f64>, usize) {
    let probs = table.flattened();
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0f64;
    let mut last_nonzero = 0usize;
    for (k, &p) in probs.iter().enumerate() {
        acc += p;
        cdf.push(acc);
        if p > 0.0 {
            last_nonzero = k;
        }
    }
    (cdf, last_nonzero)
}

fn draw_into(
    counts: &mut [u64],
    cdf: &[f64],
    last_nonzero: usize,
    trials: u64,
    rng: &mut impl RngCore,
) {
    for _ in 0..trials {
        let u = rng::uniform_f64(rng);
        // First cell whose cumulative mass exceeds u; zero-probability
        // cells have zero-width intervals and are never selected. The tail
        // gap left by rounding (≤ 1 ulp) falls to the last nonzero cell.
        let mut idx = cdf.partition_point(|&c| c <= u);
        if idx >= cdf.len() {
            idx = last_nonzero;
        }
        counts[idx] += 1;
    }
}

/// Draw `trials` i.i.d. events from the table with the given seed.
pub fn sample(table: &CoincidenceTable, trials: u64, seed: u64) -> Result<SampleRun> {
    sample_partitioned(table, trials, seed, 1)
}

/// Draw `trials` events from one ChaCha stream of the seed. This is the
/// unit a parallel worker executes; stream 0 is the plain [`sample`].
pub fn sample_stream(
    table: &CoincidenceTable,
    trials: u64,
    seed: u64,
    stream: u64,
) -> Result<SampleRun> {
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let (cdf, last_nonzero) = cumulative(table);
    let mut counts = vec![0u64; DETECTOR_COUNT * table.bins()];
    let mut rng = rng::partition(seed, stream);
    draw_into(&mut counts, &cdf, last_nonzero, trials, &mut rng);
    Ok(SampleRun {
        seed,
        trials,
        bins: table.bins(),
        counts,
        elapsed_seconds: None,
    })
}

/// Share of `trials` assigned to partition `k` of `partitions`: an even
/// split with the remainder on the leading partitions.
pub fn partition_share(trials: u64, partitions: u64, k: u64) -> u64 {
    trials / partitions + u64::from(k < trials % partitions)
}

/// Draw `trials` events split over `partitions` independent streams of the
/// same seed (stream k samples [`partition_share`] events). Partitions may
/// be executed on separate workers via [`sample_stream`]; summing their
/// counts reproduces this serial result exactly. One partition is the
/// plain [`sample`].
pub fn sample_partitioned(
    table: &CoincidenceTable,
    trials: u64,
    seed: u64,
    partitions: u64,
) -> Result<SampleRun> {
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    if partitions == 0 {
        return Err(Error::ZeroPartitions);
    }
    let mut counts = vec![0u64; DETECTOR_COUNT * table.bins()];
    for k in 0..partitions {
        let share = partition_share(trials, partitions, k);
        if share == 0 {
            continue;
        }
        let part = sample_stream(table, share, seed, k)?;
        for (total, c) in counts.iter_mut().zip(part.counts()) {
            *total += c;
        }
    }
    Ok(SampleRun {
        seed,
        trials,
        bins: table.bins(),
        counts,
        elapsed_seconds: None,
    })
}

/// Pearson chi-square of a run against a reference table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Goodness-of-fit of `run` against `table`. Cells with expected count
/// below 5 are pooled into one cell; a still-undersized pool is merged
/// into the last regular cell. Errors with [`Error::DegenerateTable`] when
/// fewer than two cells remain.
pub fn chi_square(run: &SampleRun, table: &CoincidenceTable) -> Result<ChiSquare> {
    if run.bins != table.bins() {
        return Err(Error::ShapeMismatch);
    }
    let trials = run.trials as f64;
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let mut pooled = (0.0f64, 0.0f64);
    for (k, &p) in table.flattened().iter().enumerate() {
        let expected = trials * p;
        let observed = run.counts[k] as f64;
        if expected >= POOL_MIN_EXPECTED {
            cells.push((observed, expected));
        } else {
            pooled.0 += observed;
            pooled.1 += expected;
        }
    }
    if pooled.1 >= POOL_MIN_EXPECTED {
        cells.push(pooled);
    } else if pooled.0 > 0.0 || pooled.1 > 0.0 {
        match cells.last_mut() {
            Some(last) => {
                last.0 += pooled.0;
                last.1 += pooled.1;
            }
            None => return Err(Error::DegenerateTable),
        }
    }
    if cells.len() < 2 {
        return Err(Error::DegenerateTable);
    }

    let statistic: f64 = cells
        .iter()
        .map(|&(o, e)| {
            let d = o - e;
            d * d / e
        })
        .sum();
    let dof = cells.len() - 1;
    Ok(ChiSquare {
        statistic,
        dof,
        p_value: chi_square_sf(statistic, dof),
    })
}

/// Empirical conditioned histogram of one detector row.
#[derive(Debug, Clone, PartialEq)]
pub struct FringeHistogram {
    pub detector: DetectorId,
    pub counts: Vec<u64>,
    pub total: u64,
    /// Raw-count visibility estimate, biased upward at low counts.
    pub visibility: f64,
}

/// Per-bin counts and estimated visibility for detector `r`. Errors on an
/// empty row.
pub fn fringe_histogram(run: &SampleRun, r: DetectorId) -> Result<FringeHistogram> {
    let counts = run.row(r).to_vec();
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::EmptyRow);
    }
    let as_f64: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
    Ok(FringeHistogram {
        detector: r,
        total,
        visibility: visibility(&as_f64)?,
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eraser::Experiment;
    use crate::expdsl::ExperimentConfig;

    fn default_table() -> CoincidenceTable {
        Experiment::from_config(&ExperimentConfig::default())
            .unwrap()
            .run()
            .unwrap()
            .coincidence_table()
            .unwrap()
    }

    #[test]
    fn identical_seeds_are_bitwise_identical() {
        let table = default_table();
        let a = sample(&table, 10_000, 7).unwrap();
        let b = sample(&table, 10_000, 7).unwrap();
        assert_eq!(a, b);
        let c = sample(&table, 10_000, 8).unwrap();
        assert_ne!(a.counts(), c.counts());
    }

    #[test]
    fn counts_sum_to_trials() {
        let table = default_table();
        for trials in [1u64, 3, 1000, 12_345] {
            let run = sample(&table, trials, 1).unwrap();
            assert_eq!(run.counts().iter().sum::<u64>(), trials);
            assert_eq!(run.trials(), trials);
        }
    }

    #[test]
    fn zero_trials_and_partitions_are_errors() {
        let table = default_table();
        assert_eq!(sample(&table, 0, 1), Err(Error::ZeroTrials));
        assert_eq!(
            sample_partitioned(&table, 10, 1, 0),
            Err(Error::ZeroPartitions)
        );
    }

    fn test_table(bins: usize, probs: Vec<f64>) -> CoincidenceTable {
        CoincidenceTable::from_probabilities(bins, probs).unwrap()
    }

    #[test]
    fn single_nonzero_cell_takes_every_trial() {
        // All mass on (detector b, bin 1); flattened index 1*2 + 1 = 3.
        let mut probs = vec![0.0f64; DETECTOR_COUNT * 2];
        probs[3] = 1.0;
        let table = test_table(2, probs);
        let run = sample(&table, 1, 99).unwrap();
        assert_eq!(run.count(DetectorId::B, 1), 1);
        assert_eq!(run.counts().iter().sum::<u64>(), 1);
    }

    #[test]
    fn partitioned_merge_is_conservative_and_deterministic() {
        let table = default_table();
        let whole = sample_partitioned(&table, 10_001, 5, 4).unwrap();
        assert_eq!(whole.counts().iter().sum::<u64>(), 10_001);
        let again = sample_partitioned(&table, 10_001, 5, 4).unwrap();
        assert_eq!(whole, again);
        // One partition is the plain sampler.
        assert_eq!(
            sample_partitioned(&table, 5_000, 5, 1).unwrap(),
            sample(&table, 5_000, 5).unwrap()
        );
    }

    #[test]
    fn detector_frequencies_land_near_a_quarter() {
        let table = default_table();
        let run = sample(&table, 100_000, 42).unwrap();
        for r in DetectorId::ALL {
            let f = run.detector_total(r) as f64 / run.trials() as f64;
            assert!((f - 0.25).abs() < 0.01, "{r}: {f}");
        }
    }

    #[test]
    fn chi_square_of_exact_expectations_is_zero() {
        // Uniform 4x4 table, 1600 trials → every expected count 100.
        let probs = vec![1.0 / 16.0; 16];
        let table = test_table(4, probs);
        let counts = vec![100u64; 16];
        let run = SampleRun::from_counts(0, 4, counts).unwrap();
        let fit = chi_square(&run, &table).unwrap();
        assert_eq!(fit.statistic, 0.0);
        assert_eq!(fit.dof, 15);
        assert!((fit.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn chi_square_accepts_its_own_table() {
        let table = default_table();
        let run = sample(&table, 100_000, 3).unwrap();
        let fit = chi_square(&run, &table).unwrap();
        assert!(fit.p_value > 0.001, "p = {}", fit.p_value);
        // 256 cells minus the four exactly-zero fringe cells, minus one.
        assert_eq!(fit.dof, 251);
    }

    #[test]
    fn chi_square_rejects_single_cell_tables() {
        let mut probs = vec![0.0f64; 8];
        probs[0] = 1.0;
        let table = test_table(2, probs);
        let run = sample(&table, 1000, 1).unwrap();
        assert_eq!(chi_square(&run, &table), Err(Error::DegenerateTable));
    }

    #[test]
    fn fringe_histogram_rows() {
        let table = default_table();
        let run = sample(&table, 200_000, 11).unwrap();
        let hist = fringe_histogram(&run, DetectorId::B).unwrap();
        assert_eq!(hist.total, run.detector_total(DetectorId::B));
        assert!(hist.visibility > 0.9, "vis {}", hist.visibility);
        let flat = fringe_histogram(&run, DetectorId::A).unwrap();
        assert!(flat.visibility < 0.35, "vis {}", flat.visibility);
    }

    #[test]
    fn fringe_histogram_of_single_trial() {
        let table = default_table();
        let run = sample(&table, 1, 2).unwrap();
        let total: u64 = DetectorId::ALL
            .iter()
            .filter_map(|&r| fringe_histogram(&run, r).ok())
            .map(|h| h.total)
            .sum();
        assert_eq!(total, 1);
    }

    #[test]
    fn empty_rows_error() {
        let mut probs = vec![0.0f64; 8];
        probs[0] = 0.5;
        probs[1] = 0.5;
        let table = test_table(2, probs);
        let run = sample(&table, 100, 1).unwrap();
        assert_eq!(fringe_histogram(&run, DetectorId::D), Err(Error::EmptyRow));
    }
}
