//! The Schmidt structure of the erased branch.
//!
//! Conditioning on the interferometer detectors leaves the two-photon state
//! in its "which-coherence" part. That part is maximally entangled with
//! coefficients (1/√2, 1/√2), and the degeneracy means its Schmidt bases
//! are not unique: any orthonormal pair in the span is valid. The claim
//! worth checking is that the images of the circular path combinations
//! (1/√2)(|1⟩ ± i|2⟩) under the central-splitter evolution *are* a valid
//! choice of photon-I Schmidt vectors, paired with the pointer partners
//! (1/√2)(Ξ1 ∓ iΞ2). This module builds that decomposition explicitly and
//! measures how well it holds, alongside the generic SVD route used for
//! the coefficients.

use alloc::vec::Vec;

use num_complex::Complex64;
// f64 math through the trait so the no_std build finds it in libm.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Result;
use crate::optics::central_bs_transfer;
use crate::qcore::{schmidt, StateVector, SubsystemRegistry};

use super::{DetectorId, ExperimentState, DETECTOR_COUNT, PHOTON_I};

/// Measured deviations for the second-coherence-basis claim. All fields
/// are deviations (0 = exact) except the raw values kept for reporting.
#[derive(Debug, Clone)]
pub struct SecondBasisReport {
    /// Probability of the which-coherence part (detectors b, c).
    pub coherence_probability: f64,
    /// Schmidt coefficients from the generic SVD route, descending.
    pub schmidt_coefficients: Vec<f64>,
    /// max_k |σ_k − 1/√2| over the generic coefficients.
    pub coefficient_deviation: f64,
    /// How far the circular-basis images fall outside the span of the
    /// generic Schmidt vectors: max over ± of 1 − ‖P_span·U|±i⟩‖.
    pub left_span_deviation: f64,
    /// Norms of the circular-basis contractions ⟨U(±i)|ψ⟩ (the constructed
    /// Schmidt coefficients).
    pub constructed_sigma: [f64; 2],
    /// max over ± of |σ_± − 1/√2|.
    pub constructed_sigma_deviation: f64,
    /// Orthonormality deviation of the constructed pointer partners.
    pub partner_orthonormality_deviation: f64,
    /// max over ± of 1 − |⟨v_±, (1/√2)(Ξ1 ∓ iΞ2)⟩|.
    pub partner_overlap_deviation: f64,
    /// Largest elementwise error of Σ σ_± U(±i)⊗v_± against the
    /// which-coherence part.
    pub reconstruction_deviation: f64,
}

/// Expected Schmidt coefficients of the which-coherence part when the
/// dressed states have overlap magnitude `overlap_mag`: √((1 ± |s|)/2).
/// Zero overlap gives the degenerate pair (1/√2, 1/√2).
pub fn expected_coefficients(overlap_mag: f64) -> [f64; 2] {
    [
        ((1.0 + overlap_mag) / 2.0).sqrt(),
        ((1.0 - overlap_mag) / 2.0).sqrt(),
    ]
}

/// The images U|±i⟩ of the circular path combinations under the central
/// splitter, as photon-I states. Solving the forward transfer shows these
/// are −|b⟩ and i|c⟩.
fn circular_images() -> Result<[StateVector; 2]> {
    let t = central_bs_transfer();
    let registry = SubsystemRegistry::single(PHOTON_I, DETECTOR_COUNT)?;
    let rt = Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let mut states = Vec::with_capacity(2);
    for sign in [1.0, -1.0] {
        let mut amps = alloc::vec![Complex64::ZERO; DETECTOR_COUNT];
        for (row, det) in [DetectorId::B, DetectorId::C].into_iter().enumerate() {
            amps[det.level()] = rt * (t.forward[row][0] + sign * i * t.forward[row][1]);
        }
        states.push(StateVector::from_amplitudes(registry.clone(), amps)?);
    }
    Ok([states.remove(0), states.remove(0)])
}

/// Project out the which-coherence part and verify its Schmidt structure
/// in the circular basis. Fails with [`crate::Error::ZeroProjection`] when
/// the layout leaves no coherence arm (beam splitters removed).
pub fn verify_second_simple_basis(state: &ExperimentState) -> Result<SecondBasisReport> {
    let b = state.photon_basis(DetectorId::B)?;
    let c = state.photon_basis(DetectorId::C)?;
    let (coherence, probability) = state.state().project_renormalize(&[b, c])?;

    let generic = schmidt(&coherence, &[PHOTON_I])?;
    let rt = core::f64::consts::FRAC_1_SQRT_2;
    let coefficient_deviation = generic
        .coefficients()
        .iter()
        .map(|s| (s - rt).abs())
        .fold(0.0f64, f64::max);

    let [l_plus, l_minus] = circular_images()?;
    let mut left_span_deviation = 0.0f64;
    for l in [&l_plus, &l_minus] {
        let mut in_span = 0.0;
        for u in generic.left_vectors() {
            in_span += u.inner(l)?.norm_sqr();
        }
        left_span_deviation = left_span_deviation.max(1.0 - in_span.sqrt());
    }

    // Constructed decomposition: contract against the circular images.
    let raw_plus = coherence.partial_inner(&l_plus)?;
    let raw_minus = coherence.partial_inner(&l_minus)?;
    let sigma = [raw_plus.norm(), raw_minus.norm()];
    let constructed_sigma_deviation = (sigma[0] - rt).abs().max((sigma[1] - rt).abs());
    let v_plus = raw_plus.normalize()?;
    let v_minus = raw_minus.normalize()?;

    let mut partner_orthonormality_deviation = v_plus.inner(&v_minus)?.norm();
    partner_orthonormality_deviation = partner_orthonormality_deviation
        .max((v_plus.squared_norm() - 1.0).abs())
        .max((v_minus.squared_norm() - 1.0).abs());

    let det = state.detector();
    let partner_overlap_deviation = (1.0 - v_plus.overlap_magnitude(&det.coherence_state(true))?)
        .max(1.0 - v_minus.overlap_magnitude(&det.coherence_state(false))?);

    let reconstruction = l_plus
        .tensor(&v_plus)?
        .scaled(Complex64::new(sigma[0], 0.0))
        .add(
            &l_minus
                .tensor(&v_minus)?
                .scaled(Complex64::new(sigma[1], 0.0)),
        )?;
    let reconstruction_deviation = reconstruction
        .amplitudes()
        .iter()
        .zip(coherence.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0f64, f64::max);

    Ok(SecondBasisReport {
        coherence_probability: probability,
        schmidt_coefficients: generic.coefficients().to_vec(),
        coefficient_deviation,
        left_span_deviation,
        constructed_sigma: sigma,
        constructed_sigma_deviation,
        partner_orthonormality_deviation,
        partner_overlap_deviation,
        reconstruction_deviation,
    })
}
