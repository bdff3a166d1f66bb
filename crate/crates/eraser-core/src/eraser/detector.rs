//! The scanned-detector model for photon II.
//!
//! Photon II is absorbed early; what survives is the joint photon+detector
//! "dressed" state for each emission path, supported on the detector's
//! position bins. Unitarity of the absorption means the two dressed states
//! inherit the orthogonality of the emission paths, so in the default
//! representation each bin carries a path tag and ⟨Ξ1|Ξ2⟩ = 0 holds
//! exactly. With `merge_paths` the bins are path-blind and the overlap is
//! whatever the phase profiles make it — measured, never assumed.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
// f64 math through the trait so the no_std build finds it in libm.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::qcore::{StateVector, SubsystemRegistry};
use crate::tol;

use super::POINTER;

/// Which atom emitted the pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmissionPath {
    One,
    Two,
}

/// Far-field two-path fringe model: the phase difference between the two
/// emission paths is affine across the bins,
/// Δφ(n) = 2π·cycles·n/bins + φ₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringeModel {
    pub cycles: f64,
    pub phi0: f64,
}

impl FringeModel {
    pub fn delta_phi(&self, n: usize, bins: usize) -> f64 {
        core::f64::consts::TAU * self.cycles * n as f64 / bins as f64 + self.phi0
    }
}

/// Per-bin amplitude profiles of the two dressed states.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorModel {
    envelope: Vec<f64>,
    phase_1: Vec<f64>,
    phase_2: Vec<f64>,
    merge_paths: bool,
}

impl DetectorModel {
    /// Uniform-envelope fringe detector: g(n) = 1/√bins and the fringe
    /// phase split symmetrically over the two paths,
    /// φ₁ = +Δφ/2, φ₂ = −Δφ/2.
    pub fn fringe(bins: usize, fringe: &FringeModel, merge_paths: bool) -> Result<Self> {
        if bins == 0 {
            return Err(Error::EmptyDetector);
        }
        let g = 1.0 / (bins as f64).sqrt();
        let envelope = vec![g; bins];
        let mut phase_1 = Vec::with_capacity(bins);
        let mut phase_2 = Vec::with_capacity(bins);
        for n in 0..bins {
            let dphi = fringe.delta_phi(n, bins);
            phase_1.push(0.5 * dphi);
            phase_2.push(-0.5 * dphi);
        }
        Ok(Self {
            envelope,
            phase_1,
            phase_2,
            merge_paths,
        })
    }

    /// Arbitrary profiles. The envelope must be nonnegative with Σg² = 1.
    pub fn from_profiles(
        envelope: Vec<f64>,
        phase_1: Vec<f64>,
        phase_2: Vec<f64>,
        merge_paths: bool,
    ) -> Result<Self> {
        if envelope.is_empty() {
            return Err(Error::EmptyDetector);
        }
        if envelope.len() != phase_1.len() || envelope.len() != phase_2.len() {
            return Err(Error::InvalidDetectorModel);
        }
        if envelope.iter().any(|&g| !g.is_finite() || g < 0.0) {
            return Err(Error::InvalidDetectorModel);
        }
        let total: f64 = envelope.iter().map(|g| g * g).sum();
        if (total - 1.0).abs() > tol::EXACT {
            return Err(Error::InvalidDetectorModel);
        }
        Ok(Self {
            envelope,
            phase_1,
            phase_2,
            merge_paths,
        })
    }

    pub fn bins(&self) -> usize {
        self.envelope.len()
    }

    pub fn merge_paths(&self) -> bool {
        self.merge_paths
    }

    pub fn envelope(&self) -> &[f64] {
        &self.envelope
    }

    /// Dimension of the combined photon-II/detector pointer subsystem:
    /// bins × path tag, or just bins when paths are merged.
    pub fn pointer_dim(&self) -> usize {
        if self.merge_paths {
            self.bins()
        } else {
            2 * self.bins()
        }
    }

    pub fn pointer_registry(&self) -> SubsystemRegistry {
        SubsystemRegistry::single(POINTER, self.pointer_dim()).expect("nonzero dim")
    }

    /// Amplitude g(n)·e^{iφ_q(n)} of path `q` on bin `n`.
    pub fn amplitude(&self, path: EmissionPath, n: usize) -> Complex64 {
        let phi = match path {
            EmissionPath::One => self.phase_1[n],
            EmissionPath::Two => self.phase_2[n],
        };
        Complex64::from_polar(self.envelope[n], phi)
    }

    /// Pointer index of bin `n` for path `q`: paths occupy separate blocks
    /// unless merged.
    pub fn pointer_index(&self, path: EmissionPath, n: usize) -> usize {
        if self.merge_paths {
            n
        } else {
            match path {
                EmissionPath::One => n,
                EmissionPath::Two => self.bins() + n,
            }
        }
    }

    /// The dressed state Ξ_q = Σ_n g(n)·e^{iφ_q(n)} |n(,q)⟩.
    pub fn dressed_state(&self, path: EmissionPath) -> StateVector {
        let mut amps = vec![Complex64::ZERO; self.pointer_dim()];
        for n in 0..self.bins() {
            amps[self.pointer_index(path, n)] = self.amplitude(path, n);
        }
        StateVector::from_amplitudes(self.pointer_registry(), amps).expect("sized above")
    }

    /// ⟨Ξ1|Ξ2⟩. Exactly zero in the path-tagged representation; with merged
    /// paths it is Σ_n g(n)²·e^{i(φ₂−φ₁)(n)}.
    pub fn pointer_overlap(&self) -> Complex64 {
        self.dressed_state(EmissionPath::One)
            .inner(&self.dressed_state(EmissionPath::Two))
            .expect("same registry")
    }

    /// The normalized coherence combinations (1/√2)(Ξ1 ∓ iΞ2); only
    /// orthonormal when the dressed states are.
    pub fn coherence_state(&self, sign_minus: bool) -> StateVector {
        let xi1 = self.dressed_state(EmissionPath::One);
        let xi2 = self.dressed_state(EmissionPath::Two);
        let i = Complex64::new(0.0, if sign_minus { -1.0 } else { 1.0 });
        let rt = Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
        xi1.add(&xi2.scaled(i)).expect("same registry").scaled(rt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fringe_detector_normalizes_each_dressed_state() {
        let model = DetectorModel::fringe(
            64,
            &FringeModel {
                cycles: 2.0,
                phi0: 0.0,
            },
            false,
        )
        .unwrap();
        for path in [EmissionPath::One, EmissionPath::Two] {
            let xi = model.dressed_state(path);
            assert!((xi.squared_norm() - 1.0).abs() < 1e-12);
        }
        assert_eq!(model.pointer_dim(), 128);
        assert_eq!(model.pointer_overlap(), Complex64::ZERO);
    }

    #[test]
    fn zero_bins_rejected() {
        assert_eq!(
            DetectorModel::fringe(
                0,
                &FringeModel {
                    cycles: 1.0,
                    phi0: 0.0
                },
                false
            ),
            Err(Error::EmptyDetector)
        );
    }

    #[test]
    fn merged_overlap_vanishes_for_integer_cycles() {
        let model = DetectorModel::fringe(
            64,
            &FringeModel {
                cycles: 2.0,
                phi0: 0.0,
            },
            true,
        )
        .unwrap();
        assert_eq!(model.pointer_dim(), 64);
        assert!(model.pointer_overlap().norm() < 1e-14);

        let skew = DetectorModel::fringe(
            64,
            &FringeModel {
                cycles: 2.5,
                phi0: 0.3,
            },
            true,
        )
        .unwrap();
        assert!(skew.pointer_overlap().norm() > 0.05);
    }

    #[test]
    fn profile_validation() {
        let bad_norm =
            DetectorModel::from_profiles(vec![1.0, 1.0], vec![0.0, 0.0], vec![0.0, 0.0], false);
        assert_eq!(bad_norm, Err(Error::InvalidDetectorModel));
        let bad_len = DetectorModel::from_profiles(vec![1.0], vec![0.0, 0.0], vec![0.0], false);
        assert_eq!(bad_len, Err(Error::InvalidDetectorModel));
        let neg = DetectorModel::from_profiles(vec![-1.0], vec![0.0], vec![0.0], false);
        assert_eq!(neg, Err(Error::InvalidDetectorModel));
    }

    #[test]
    fn single_bin_degenerates_to_a_bare_pair() {
        // One bin with unit envelope: the dressed states are |0,q⟩.
        let model = DetectorModel::fringe(
            1,
            &FringeModel {
                cycles: 0.0,
                phi0: 0.0,
            },
            false,
        )
        .unwrap();
        let xi1 = model.dressed_state(EmissionPath::One);
        let xi2 = model.dressed_state(EmissionPath::Two);
        assert_eq!(xi1.amplitudes()[0], Complex64::ONE);
        assert_eq!(xi2.amplitudes()[1], Complex64::ONE);
    }
}
