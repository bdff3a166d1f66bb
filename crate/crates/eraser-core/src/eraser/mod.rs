//! The delayed-choice eraser experiment: initial entangled state, optics
//! pipeline per layout, conditioned states, coincidence statistics, and the
//! claims made about them.
//!
//! Photon I starts in one of two path modes and ends on one of four
//! detectors. During evolution it lives in a six-mode space (the two paths
//! plus the four detectors); the final state is compacted onto the detector
//! modes once the paths are empty. Photon II and its detector form a single
//! combined pointer subsystem described by [`DetectorModel`].

mod detector;
mod second_basis;
mod table;

pub use detector::{DetectorModel, EmissionPath, FringeModel};
pub use second_basis::{expected_coefficients, verify_second_simple_basis, SecondBasisReport};
pub use table::{visibility, CoincidenceTable};

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expdsl::{ExperimentConfig, Layout};
use crate::optics::OpticalElement;
use crate::qcore::{BasisLabel, DensityOperator, StateVector, SubsystemId, SubsystemRegistry};
use crate::rng;
use crate::tol;

/// Subsystem carrying photon I's path/detector modes.
pub const PHOTON_I: SubsystemId = SubsystemId(0);
/// Combined photon-II/detector pointer subsystem.
pub const POINTER: SubsystemId = SubsystemId(1);

// Mode layout of the six-dimensional evolution space.
const MODE_PATH_1: usize = 0;
const MODE_PATH_2: usize = 1;
const MODE_DET_A: usize = 2;
const MODE_DET_B: usize = 3;
const MODE_DET_C: usize = 4;
const MODE_DET_D: usize = 5;
const EVOLUTION_DIM: usize = 6;

/// Number of photon-I detectors.
pub const DETECTOR_COUNT: usize = 4;

/// One of the four photon-I detectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DetectorId {
    A,
    B,
    C,
    D,
}

impl DetectorId {
    pub const ALL: [DetectorId; 4] = [DetectorId::A, DetectorId::B, DetectorId::C, DetectorId::D];

    /// Level index in the compacted four-mode photon-I space.
    pub fn level(self) -> usize {
        match self {
            DetectorId::A => 0,
            DetectorId::B => 1,
            DetectorId::C => 2,
            DetectorId::D => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            DetectorId::A => "a",
            DetectorId::B => "b",
            DetectorId::C => "c",
            DetectorId::D => "d",
        }
    }

    pub fn from_level(level: usize) -> Option<Self> {
        Self::ALL.get(level).copied()
    }
}

impl core::fmt::Display for DetectorId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.label())
    }
}

/// Registry of the compacted experiment state: four detector modes times
/// the pointer.
fn final_registry(detector: &DetectorModel) -> SubsystemRegistry {
    SubsystemRegistry::new(&[
        (PHOTON_I, DETECTOR_COUNT),
        (POINTER, detector.pointer_dim()),
    ])
    .expect("static registry")
}

/// The source state: (1/√2)(|path 1⟩·Ξ1 + |path 2⟩·Ξ2) over the six-mode
/// photon-I space and the pointer.
pub fn build_initial_state(detector: &DetectorModel) -> Result<StateVector> {
    let photon = SubsystemRegistry::single(PHOTON_I, EVOLUTION_DIM)?;
    let rt = Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
    let path1 = StateVector::basis_state(
        photon.clone(),
        &BasisLabel::new(&[(PHOTON_I, MODE_PATH_1)])?,
    )?;
    let path2 = StateVector::basis_state(photon, &BasisLabel::new(&[(PHOTON_I, MODE_PATH_2)])?)?;
    let branch1 = path1.tensor(&detector.dressed_state(EmissionPath::One))?;
    let branch2 = path2.tensor(&detector.dressed_state(EmissionPath::Two))?;
    branch1.scaled(rt).add(&branch2.scaled(rt))
}

/// A configured experiment: detector model plus beam-splitter layout.
#[derive(Debug, Clone)]
pub struct Experiment {
    config: ExperimentConfig,
    detector: DetectorModel,
}

impl Experiment {
    pub fn from_config(config: &ExperimentConfig) -> Result<Self> {
        let fringe = FringeModel {
            cycles: config.cycles,
            phi0: config.phi0,
        };
        let detector = DetectorModel::fringe(config.bins, &fringe, config.merge_paths)?;
        Ok(Self {
            config: config.clone(),
            detector,
        })
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.config
    }

    pub fn detector(&self) -> &DetectorModel {
        &self.detector
    }

    pub fn layout(&self) -> Layout {
        self.config.layout
    }

    pub fn initial_state(&self) -> Result<StateVector> {
        build_initial_state(&self.detector)
    }

    /// The optics pipeline for the configured layout, in application order.
    pub fn elements(&self) -> Result<Vec<OpticalElement>> {
        // Path 1 reflects into b and transmits into c at the central
        // splitter; path 2 does the mirror image.
        let central = || {
            OpticalElement::combine(
                "central bs",
                &[
                    OpticalElement::beam_splitter_5050(MODE_PATH_1, MODE_DET_B, MODE_DET_C)?,
                    OpticalElement::beam_splitter_5050(MODE_PATH_2, MODE_DET_C, MODE_DET_B)?,
                ],
            )
        };
        Ok(match self.config.layout {
            Layout::Eraser => vec![
                OpticalElement::beam_splitter_5050(MODE_PATH_1, MODE_PATH_1, MODE_DET_A)?,
                OpticalElement::beam_splitter_5050(MODE_PATH_2, MODE_PATH_2, MODE_DET_D)?,
                central()?,
            ],
            Layout::Mirrors => vec![
                OpticalElement::mirror(MODE_PATH_1, MODE_PATH_1)?,
                OpticalElement::mirror(MODE_PATH_2, MODE_PATH_2)?,
                central()?,
            ],
            Layout::Removed => vec![OpticalElement::relabel(&[
                (MODE_PATH_1, MODE_DET_A),
                (MODE_PATH_2, MODE_DET_D),
            ])?],
        })
    }

    /// Run the pipeline on `initial` and compact photon I onto its four
    /// detector modes (the path modes must be empty by then).
    pub fn evolve(&self, initial: &StateVector) -> Result<ExperimentState> {
        let mut state = initial.clone();
        for element in self.elements()? {
            state = element.apply(&state, PHOTON_I)?;
        }
        let full = state.map_levels(
            PHOTON_I,
            &[None, None, Some(0), Some(1), Some(2), Some(3)],
            DETECTOR_COUNT,
        )?;
        Ok(ExperimentState {
            full,
            detector: self.detector.clone(),
            layout: self.config.layout,
        })
    }

    pub fn run(&self) -> Result<ExperimentState> {
        self.evolve(&self.initial_state()?)
    }

    /// The closed-form expansion of the final state, written directly from
    /// the dressed states without touching the optics pipeline. Serves as
    /// the independent reference the composed evolution is checked against.
    pub fn reference_state(&self) -> Result<StateVector> {
        let registry = final_registry(&self.detector);
        let xi1 = self.detector.dressed_state(EmissionPath::One);
        let xi2 = self.detector.dressed_state(EmissionPath::Two);
        let photon = SubsystemRegistry::single(PHOTON_I, DETECTOR_COUNT)?;
        let det = |id: DetectorId| -> Result<StateVector> {
            StateVector::basis_state(photon.clone(), &BasisLabel::new(&[(PHOTON_I, id.level())])?)
        };
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let rt2 = core::f64::consts::FRAC_1_SQRT_2;

        let mut acc = StateVector::zero(registry);
        let mut add_term = |d: DetectorId, pointer: StateVector| -> Result<()> {
            acc = acc.add(&det(d)?.tensor(&pointer)?)?;
            Ok(())
        };
        match self.config.layout {
            Layout::Eraser => {
                // a: (1/2)Ξ1; b: (1/2)(1/√2)(−Ξ1+iΞ2);
                // c: (1/2)(1/√2)(iΞ1−Ξ2); d: (1/2)Ξ2.
                add_term(DetectorId::A, xi1.scaled(c(0.5, 0.0)))?;
                add_term(
                    DetectorId::B,
                    xi1.scaled(c(-0.5 * rt2, 0.0))
                        .add(&xi2.scaled(c(0.0, 0.5 * rt2)))?,
                )?;
                add_term(
                    DetectorId::C,
                    xi1.scaled(c(0.0, 0.5 * rt2))
                        .add(&xi2.scaled(c(-0.5 * rt2, 0.0)))?,
                )?;
                add_term(DetectorId::D, xi2.scaled(c(0.5, 0.0)))?;
            }
            Layout::Mirrors => {
                add_term(
                    DetectorId::B,
                    xi1.scaled(c(-0.5, 0.0)).add(&xi2.scaled(c(0.0, 0.5)))?,
                )?;
                add_term(
                    DetectorId::C,
                    xi1.scaled(c(0.0, 0.5)).add(&xi2.scaled(c(-0.5, 0.0)))?,
                )?;
            }
            Layout::Removed => {
                add_term(DetectorId::A, xi1.scaled(c(rt2, 0.0)))?;
                add_term(DetectorId::D, xi2.scaled(c(rt2, 0.0)))?;
            }
        }
        Ok(acc)
    }
}

/// The evolved two-photon state over (detector modes × pointer).
#[derive(Debug, Clone)]
pub struct ExperimentState {
    full: StateVector,
    detector: DetectorModel,
    layout: Layout,
}

impl ExperimentState {
    pub fn state(&self) -> &StateVector {
        &self.full
    }

    pub fn detector(&self) -> &DetectorModel {
        &self.detector
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    /// |r⟩ on the compacted photon-I registry.
    pub fn photon_basis(&self, r: DetectorId) -> Result<StateVector> {
        StateVector::basis_state(
            SubsystemRegistry::single(PHOTON_I, DETECTOR_COUNT)?,
            &BasisLabel::new(&[(PHOTON_I, r.level())])?,
        )
    }

    /// Probability that photon I lands on detector `r` (state marginal).
    pub fn detector_marginal(&self, r: DetectorId) -> f64 {
        let registry = self.full.registry();
        let pdim = self.detector.pointer_dim();
        let mut total = 0.0;
        for j in 0..pdim {
            let idx = registry
                .flatten(&[r.level(), j])
                .expect("registry is photon x pointer");
            total += self.full.amp_flat(idx).norm_sqr();
        }
        total
    }

    /// The pointer state conditioned on detector `r` firing, normalized.
    /// Errors with [`Error::ZeroProjection`] on a branch of zero
    /// probability (e.g. the which-path detectors under the mirrors
    /// layout).
    pub fn conditioned_state(&self, r: DetectorId) -> Result<StateVector> {
        let contracted = self.full.partial_inner(&self.photon_basis(r)?)?;
        let p = contracted.squared_norm();
        if p < tol::ZERO_PROJECTION {
            return Err(Error::ZeroProjection { squared_norm: p });
        }
        contracted.normalize()
    }

    /// Reduced density operator of the pointer subsystem.
    pub fn reduced_pointer(&self) -> Result<DensityOperator> {
        self.full.reduced_density(&[POINTER])
    }

    /// Coincidence distribution P(r, n) over detectors and bins.
    pub fn coincidence_table(&self) -> Result<CoincidenceTable> {
        CoincidenceTable::from_state(self)
    }
}

/// Expected detector marginals for a layout, given the measured dressed
/// overlap s = ⟨Ξ1|Ξ2⟩ (zero in the path-tagged representation, where the
/// marginals are exactly 1/4 for the full eraser).
pub fn expected_detector_marginals(layout: Layout, pointer_overlap: Complex64) -> [f64; 4] {
    let im = pointer_overlap.im;
    match layout {
        Layout::Eraser => [0.25, 0.25 + im / 4.0, 0.25 - im / 4.0, 0.25],
        Layout::Mirrors => [0.0, 0.5 * (1.0 + im), 0.5 * (1.0 - im), 0.0],
        Layout::Removed => [0.5, 0.0, 0.0, 0.5],
    }
}

/// Apply each photon-I-local unitary to the state and report the largest
/// elementwise change of the pointer's reduced operator. Quantum mechanics
/// says the answer is zero; the returned deviation is pure rounding.
pub fn no_signalling_check(state: &ExperimentState, local_ops: &[OpticalElement]) -> Result<f64> {
    let baseline = state.reduced_pointer()?;
    let mut worst = 0.0f64;
    for op in local_ops {
        if !op.is_square() {
            return Err(Error::NotSquare);
        }
        let moved = op.apply(&state.full, PHOTON_I)?;
        let reduced = moved.reduced_density(&[POINTER])?;
        worst = worst.max(reduced.max_abs_diff(&baseline)?);
    }
    Ok(worst)
}

/// Haar-random 4×4 unitaries on the photon-I detector modes, reproducible
/// from the seed.
pub fn seeded_local_unitaries(count: usize, seed: u64) -> Result<Vec<OpticalElement>> {
    let mut rng = rng::seeded(seed);
    (0..count)
        .map(|_| OpticalElement::random_unitary(&[0, 1, 2, 3], &mut rng))
        .collect()
}
