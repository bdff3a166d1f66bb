//! Coincidence statistics: the joint distribution P(r, n) over photon-I
//! detectors and photon-II bins, its conditioned rows, and fringe
//! visibility.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::tol;

use super::{DetectorId, ExperimentState, DETECTOR_COUNT};

/// Joint probability table over (detector, bin), flattened detector-major
/// with detectors in a,b,c,d order and bins ascending — the canonical
/// order used everywhere counts or probabilities are serialized or sampled.
#[derive(Debug, Clone, PartialEq)]
pub struct CoincidenceTable {
    bins: usize,
    probs: Vec<f64>,
}

impl CoincidenceTable {
    /// Read the coincidence distribution out of an evolved state. A bin
    /// readout resolves position only: in the path-tagged representation
    /// the outcome at bin n is the projection onto (|n,1⟩ + |n,2⟩)/√2, so
    /// the two tagged amplitudes are summed coherently; with merged paths
    /// the amplitude is read off directly. The table is normalized over all
    /// outcomes.
    pub(crate) fn from_state(state: &ExperimentState) -> Result<Self> {
        let detector = state.detector();
        let bins = detector.bins();
        let registry = state.state().registry();
        let mut probs = vec![0.0f64; DETECTOR_COUNT * bins];
        for r in 0..DETECTOR_COUNT {
            for n in 0..bins {
                let amp = if detector.merge_paths() {
                    state.state().amp_flat(registry.flatten(&[r, n])?)
                } else {
                    state.state().amp_flat(registry.flatten(&[r, n])?)
                        + state.state().amp_flat(registry.flatten(&[r, bins + n])?)
                };
                probs[r * bins + n] = amp.norm_sqr();
            }
        }
        let total: f64 = probs.iter().sum();
        if total < tol::NEGLIGIBLE_PROBABILITY {
            return Err(Error::EmptyRow);
        }
        for p in &mut probs {
            *p /= total;
        }
        Ok(Self { bins, probs })
    }

    /// Adopt an explicit distribution in the canonical flattening
    /// (normalized on construction). Entries must be nonnegative with some
    /// weight somewhere.
    pub fn from_probabilities(bins: usize, mut probs: Vec<f64>) -> Result<Self> {
        if bins == 0 || probs.len() != DETECTOR_COUNT * bins {
            return Err(Error::ShapeMismatch);
        }
        if probs.iter().any(|&p| !p.is_finite() || p < 0.0) {
            return Err(Error::EmptyRow);
        }
        let total: f64 = probs.iter().sum();
        if total < tol::NEGLIGIBLE_PROBABILITY {
            return Err(Error::EmptyRow);
        }
        for p in &mut probs {
            *p /= total;
        }
        Ok(Self { bins, probs })
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn probability(&self, r: DetectorId, n: usize) -> f64 {
        self.probs[r.level() * self.bins + n]
    }

    /// One detector's row of joint probabilities.
    pub fn row(&self, r: DetectorId) -> &[f64] {
        let start = r.level() * self.bins;
        &self.probs[start..start + self.bins]
    }

    /// P(r): the row sum.
    pub fn row_total(&self, r: DetectorId) -> f64 {
        self.row(r).iter().sum()
    }

    /// Whether the detector receives any probability at all under this
    /// layout.
    pub fn row_is_empty(&self, r: DetectorId) -> bool {
        self.row_total(r) < tol::NEGLIGIBLE_PROBABILITY
    }

    /// Conditioned distribution P(n | r); errors on an empty row.
    pub fn conditional_row(&self, r: DetectorId) -> Result<Vec<f64>> {
        let total = self.row_total(r);
        if total < tol::NEGLIGIBLE_PROBABILITY {
            return Err(Error::EmptyRow);
        }
        Ok(self.row(r).iter().map(|p| p / total).collect())
    }

    /// Fringe visibility of the conditioned row.
    pub fn row_visibility(&self, r: DetectorId) -> Result<f64> {
        visibility(&self.conditional_row(r)?)
    }

    /// Unconditioned bin distribution P(n) = Σ_r P(r, n).
    pub fn bin_marginal(&self, n: usize) -> f64 {
        DetectorId::ALL
            .iter()
            .map(|r| self.probability(*r, n))
            .sum()
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// The canonical flattening, detector-major.
    pub fn flattened(&self) -> &[f64] {
        &self.probs
    }
}

/// (max − min)/(max + min) of a nonnegative row. Errors when the row has
/// fewer than two bins or carries no weight.
pub fn visibility(row: &[f64]) -> Result<f64> {
    if row.len() < 2 {
        return Err(Error::EmptyRow);
    }
    let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = row.iter().copied().fold(f64::INFINITY, f64::min);
    if max < tol::NEGLIGIBLE_PROBABILITY {
        return Err(Error::EmptyRow);
    }
    Ok((max - min) / (max + min))
}
