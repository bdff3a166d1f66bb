//! Optical elements acting on the modes of one subsystem: 50/50 beam
//! splitters with the reflection-times-i convention, mirrors, and mode
//! relabelings.
//!
//! An element is an isometric transfer matrix from a list of input modes to
//! a list of output modes. Applying it to a state touches only those modes;
//! amplitudes elsewhere pass through unchanged. Output modes that are not
//! also inputs must be empty beforehand, so applications stay norm
//! preserving. Elements act on one subsystem only; any correlation between
//! subsystems has to come from the state itself.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::qcore::{linalg, StateVector, SubsystemId};
use crate::tol;

const FRAC_1_SQRT_2: f64 = core::f64::consts::FRAC_1_SQRT_2;

/// An isometric map between mode lists of a single subsystem.
#[derive(Debug, Clone, PartialEq)]
pub struct OpticalElement {
    name: String,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    /// Row-major, `outputs.len() x inputs.len()`.
    transfer: Vec<Complex64>,
}

impl OpticalElement {
    /// Build an element, checking mode lists and the isometry invariant
    /// transferᴴ·transfer = I.
    pub fn new(
        name: &str,
        inputs: Vec<usize>,
        outputs: Vec<usize>,
        transfer: Vec<Complex64>,
    ) -> Result<Self> {
        if let Some(m) = first_duplicate(&inputs) {
            return Err(Error::DuplicateMode(m));
        }
        if let Some(m) = first_duplicate(&outputs) {
            return Err(Error::DuplicateMode(m));
        }
        if transfer.len() != inputs.len() * outputs.len() || inputs.is_empty() {
            return Err(Error::ShapeMismatch);
        }
        let (rows, cols) = (outputs.len(), inputs.len());
        let mut dev = 0.0f64;
        for i in 0..cols {
            for j in 0..cols {
                let mut acc = Complex64::ZERO;
                for r in 0..rows {
                    acc += transfer[r * cols + i].conj() * transfer[r * cols + j];
                }
                let target = if i == j {
                    Complex64::ONE
                } else {
                    Complex64::ZERO
                };
                dev = dev.max((acc - target).norm());
            }
        }
        if dev > tol::EXACT {
            return Err(Error::NotIsometry { deviation: dev });
        }
        Ok(Self {
            name: String::from(name),
            inputs,
            outputs,
            transfer,
        })
    }

    /// 50/50 beam splitter column: |in⟩ ↦ (1/√2)(i·|reflect⟩ + |transmit⟩).
    /// The reflected amplitude picks up the factor i; the transmitted one is
    /// unchanged.
    pub fn beam_splitter_5050(
        in_mode: usize,
        reflect_mode: usize,
        transmit_mode: usize,
    ) -> Result<Self> {
        if reflect_mode == transmit_mode {
            return Err(Error::DuplicateMode(reflect_mode));
        }
        Self::new(
            &format!("bs {in_mode}->(i{reflect_mode},{transmit_mode})"),
            vec![in_mode],
            vec![reflect_mode, transmit_mode],
            vec![
                Complex64::new(0.0, FRAC_1_SQRT_2),
                Complex64::new(FRAC_1_SQRT_2, 0.0),
            ],
        )
    }

    /// Mirror: |in⟩ ↦ i·|out⟩ (a pure reflection).
    pub fn mirror(in_mode: usize, out_mode: usize) -> Result<Self> {
        Self::new(
            &format!("mirror {in_mode}->{out_mode}"),
            vec![in_mode],
            vec![out_mode],
            vec![Complex64::new(0.0, 1.0)],
        )
    }

    /// Relabeling: moves each `(old, new)` pair with unit amplitude.
    pub fn relabel(pairs: &[(usize, usize)]) -> Result<Self> {
        let n = pairs.len();
        let inputs: Vec<usize> = pairs.iter().map(|&(old, _)| old).collect();
        let outputs: Vec<usize> = pairs.iter().map(|&(_, new)| new).collect();
        let mut transfer = vec![Complex64::ZERO; n * n];
        for k in 0..n {
            transfer[k * n + k] = Complex64::ONE;
        }
        Self::new("relabel", inputs, outputs, transfer)
    }

    /// Identity on the listed modes.
    pub fn identity(modes: &[usize]) -> Result<Self> {
        let n = modes.len();
        let mut transfer = vec![Complex64::ZERO; n * n];
        for k in 0..n {
            transfer[k * n + k] = Complex64::ONE;
        }
        Self::new("identity", modes.to_vec(), modes.to_vec(), transfer)
    }

    /// Wrap an explicit unitary acting within `modes` (row-major over the
    /// given mode order).
    pub fn from_unitary(name: &str, modes: &[usize], matrix: Vec<Complex64>) -> Result<Self> {
        Self::new(name, modes.to_vec(), modes.to_vec(), matrix)
    }

    /// Haar-random unitary on `modes`, drawn from the QR of a complex
    /// Gaussian matrix.
    pub fn random_unitary(modes: &[usize], rng: &mut impl RngCore) -> Result<Self> {
        let u = linalg::haar_unitary(modes.len(), rng);
        Self::from_unitary("haar", modes, u)
    }

    /// Merge single- or multi-column elements with disjoint inputs into one
    /// element (e.g. the two columns of a two-input beam splitter). The
    /// isometry check on the result rejects non-orthogonal column sets.
    pub fn combine(name: &str, parts: &[OpticalElement]) -> Result<Self> {
        let mut inputs: Vec<usize> = Vec::new();
        let mut outputs: Vec<usize> = Vec::new();
        for part in parts {
            for &m in &part.inputs {
                if inputs.contains(&m) {
                    return Err(Error::DuplicateMode(m));
                }
                inputs.push(m);
            }
            for &m in &part.outputs {
                if !outputs.contains(&m) {
                    outputs.push(m);
                }
            }
        }
        let (rows, cols) = (outputs.len(), inputs.len());
        let mut transfer = vec![Complex64::ZERO; rows * cols];
        let mut col_base = 0usize;
        for part in parts {
            for (r, &om) in part.outputs.iter().enumerate() {
                let row = outputs.iter().position(|&m| m == om).expect("collected");
                for c in 0..part.inputs.len() {
                    transfer[row * cols + col_base + c] = part.transfer[r * part.inputs.len() + c];
                }
            }
            col_base += part.inputs.len();
        }
        Self::new(name, inputs, outputs, transfer)
    }

    /// Conjugate-transpose element; defined for square (unitary) elements.
    pub fn adjoint(&self) -> Result<Self> {
        if self.inputs.len() != self.outputs.len() {
            return Err(Error::NotSquare);
        }
        let n = self.inputs.len();
        let mut transfer = vec![Complex64::ZERO; n * n];
        for r in 0..n {
            for c in 0..n {
                transfer[r * n + c] = self.transfer[c * n + r].conj();
            }
        }
        Self::new(
            &format!("{}^H", self.name),
            self.outputs.clone(),
            self.inputs.clone(),
            transfer,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn input_modes(&self) -> &[usize] {
        &self.inputs
    }

    pub fn output_modes(&self) -> &[usize] {
        &self.outputs
    }

    pub fn transfer(&self) -> &[Complex64] {
        &self.transfer
    }

    pub fn is_square(&self) -> bool {
        self.inputs.len() == self.outputs.len()
    }

    /// Apply to one subsystem of `psi`. Amplitude on the input modes is
    /// redistributed through the transfer matrix; everything else passes
    /// through. Output-only modes must be empty or the call fails with
    /// [`Error::ModeCollision`].
    pub fn apply(&self, psi: &StateVector, subsystem: SubsystemId) -> Result<StateVector> {
        let registry = psi.registry().clone();
        let pos = registry
            .position(subsystem)
            .ok_or(Error::UnknownSubsystem(subsystem))?;
        let dim = registry.entries()[pos].1;
        for &m in self.inputs.iter().chain(&self.outputs) {
            if m >= dim {
                return Err(Error::LevelOutOfRange {
                    subsystem,
                    level: m,
                    dim,
                });
            }
        }

        // Walk the index space as outer x level x inner blocks so a single
        // "column" (fixed outer, inner) exposes all levels of the subsystem.
        let stride = registry.strides()[pos];
        let total = registry.total_dim();
        let block = dim * stride;
        let mut amps: Vec<Complex64> = psi.amplitudes().to_vec();
        let cols = self.inputs.len();

        let mut column = vec![Complex64::ZERO; dim];
        for outer in (0..total).step_by(block) {
            for inner in 0..stride {
                let at = |level: usize| outer + level * stride + inner;
                for level in 0..dim {
                    column[level] = amps[at(level)];
                }
                for &out in &self.outputs {
                    if !self.inputs.contains(&out) && column[out] != Complex64::ZERO {
                        return Err(Error::ModeCollision(out));
                    }
                }
                for &inp in &self.inputs {
                    amps[at(inp)] = Complex64::ZERO;
                }
                for (r, &out) in self.outputs.iter().enumerate() {
                    let mut acc = Complex64::ZERO;
                    for (c, &inp) in self.inputs.iter().enumerate() {
                        acc += self.transfer[r * cols + c] * column[inp];
                    }
                    amps[at(out)] += acc;
                }
            }
        }
        StateVector::from_amplitudes(registry, amps)
    }
}

fn first_duplicate(modes: &[usize]) -> Option<usize> {
    for (k, &m) in modes.iter().enumerate() {
        if modes[..k].contains(&m) {
            return Some(m);
        }
    }
    None
}

/// Forward and inverse transfer of the central beam splitter between the
/// incoming path basis (1, 2) and the outgoing detector basis (b, c),
/// including the factor i the paths acquired on the upstream reflection:
///
///   forward |1⟩ = (1/√2)(−|b⟩ + i|c⟩),   forward |2⟩ = (1/√2)(i|b⟩ − |c⟩),
///
/// and the inverse solves those relations for |b⟩, |c⟩. Rows index (b, c)
/// and columns (1, 2); `inverse` is the conjugate transpose, so
/// forward·inverse = I to rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentralBsTransfer {
    pub forward: [[Complex64; 2]; 2],
    pub inverse: [[Complex64; 2]; 2],
}

pub fn central_bs_transfer() -> CentralBsTransfer {
    let r = FRAC_1_SQRT_2;
    let m = Complex64::new(-r, 0.0);
    let i = Complex64::new(0.0, r);
    let forward = [[m, i], [i, m]];
    let inverse = [
        [forward[0][0].conj(), forward[1][0].conj()],
        [forward[0][1].conj(), forward[1][1].conj()],
    ];
    CentralBsTransfer { forward, inverse }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{BasisLabel, SubsystemRegistry};
    use crate::rng::seeded;

    const M: SubsystemId = SubsystemId(0);
    const AUX: SubsystemId = SubsystemId(1);

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mode_state(dim: usize, level: usize) -> StateVector {
        StateVector::basis_state(
            SubsystemRegistry::single(M, dim).unwrap(),
            &BasisLabel::new(&[(M, level)]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn beam_splitter_column() {
        let bs = OpticalElement::beam_splitter_5050(0, 1, 2).unwrap();
        let out = bs.apply(&mode_state(3, 0), M).unwrap();
        let r = FRAC_1_SQRT_2;
        assert!((out.amplitudes()[1] - c(0.0, r)).norm() < 1e-15);
        assert!((out.amplitudes()[2] - c(r, 0.0)).norm() < 1e-15);
        assert!((out.squared_norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn beam_splitter_rejects_equal_outputs() {
        assert_eq!(
            OpticalElement::beam_splitter_5050(0, 1, 1),
            Err(Error::DuplicateMode(1))
        );
    }

    #[test]
    fn two_input_splitter_block_is_unitary() {
        let bs = OpticalElement::combine(
            "central",
            &[
                OpticalElement::beam_splitter_5050(0, 2, 3).unwrap(),
                OpticalElement::beam_splitter_5050(1, 3, 2).unwrap(),
            ],
        )
        .unwrap();
        let t = bs.transfer();
        for i in 0..2 {
            for j in 0..2 {
                let acc: Complex64 = (0..2).map(|r| t[r * 2 + i].conj() * t[r * 2 + j]).sum();
                let target = if i == j {
                    Complex64::ONE
                } else {
                    Complex64::ZERO
                };
                assert!((acc - target).norm() < 1e-15);
            }
        }
        // Non-orthogonal columns are rejected.
        let bad = OpticalElement::combine(
            "bad",
            &[
                OpticalElement::beam_splitter_5050(0, 2, 3).unwrap(),
                OpticalElement::beam_splitter_5050(1, 2, 3).unwrap(),
            ],
        );
        assert!(matches!(bad, Err(Error::NotIsometry { .. })));
    }

    #[test]
    fn mach_zehnder_loop_is_deterministic() {
        // Two balanced splitters on the same mode pair: the product matrix
        // (computed by hand) is [[0, i], [i, 0]] — a port swap.
        let r = FRAC_1_SQRT_2;
        let block = vec![c(0.0, r), c(r, 0.0), c(r, 0.0), c(0.0, r)];
        let bs = OpticalElement::from_unitary("mz", &[0, 1], block.clone()).unwrap();
        let mut oracle = [Complex64::ZERO; 4];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    oracle[i * 2 + j] += block[i * 2 + k] * block[k * 2 + j];
                }
            }
        }
        assert!((oracle[0]).norm() < 1e-15 && (oracle[3]).norm() < 1e-15);
        assert!((oracle[1] - c(0.0, 1.0)).norm() < 1e-15);

        let out = bs
            .apply(&bs.apply(&mode_state(2, 0), M).unwrap(), M)
            .unwrap();
        assert!((out.amplitudes()[0]).norm() < 1e-15);
        assert!((out.amplitudes()[1] - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn identity_leaves_states_alone() {
        let id = OpticalElement::identity(&[0, 1, 2]).unwrap();
        let psi = mode_state(3, 1);
        assert_eq!(id.apply(&psi, M).unwrap(), psi);
    }

    #[test]
    fn adjoint_inverts_square_elements() {
        let mut rng = seeded(9);
        let u = OpticalElement::random_unitary(&[0, 1, 2, 3], &mut rng).unwrap();
        let psi = {
            let reg = SubsystemRegistry::single(M, 4).unwrap();
            StateVector::from_fn(reg, |l| c((l[0] + 1) as f64, -(l[0] as f64)))
                .normalize()
                .unwrap()
        };
        let roundtrip = u
            .adjoint()
            .unwrap()
            .apply(&u.apply(&psi, M).unwrap(), M)
            .unwrap();
        assert!(roundtrip.phase_aligned_max_diff(&psi).unwrap() < 1e-12);
        assert!((roundtrip.inner(&psi).unwrap() - Complex64::ONE).norm() < 1e-12);

        let column = OpticalElement::beam_splitter_5050(0, 1, 2).unwrap();
        assert_eq!(column.adjoint(), Err(Error::NotSquare));
    }

    #[test]
    fn apply_preserves_untouched_modes_and_norm() {
        let reg = SubsystemRegistry::new(&[(M, 4), (AUX, 2)]).unwrap();
        let psi = StateVector::from_fn(reg, |l| c(1.0 + l[0] as f64, l[1] as f64))
            .normalize()
            .unwrap();
        let bs = OpticalElement::from_unitary(
            "swap01",
            &[0, 1],
            vec![
                Complex64::ZERO,
                Complex64::ONE,
                Complex64::ONE,
                Complex64::ZERO,
            ],
        )
        .unwrap();
        let out = bs.apply(&psi, M).unwrap();
        assert!((out.squared_norm() - 1.0).abs() < 1e-12);
        // Modes 2 and 3 are untouched.
        for aux in 0..2 {
            for mode in 2..4 {
                let l = BasisLabel::new(&[(M, mode), (AUX, aux)]).unwrap();
                assert_eq!(out.amplitude(&l).unwrap(), psi.amplitude(&l).unwrap());
            }
        }
    }

    #[test]
    fn collisions_and_range_errors() {
        let psi = mode_state(3, 2);
        // Output mode 2 is occupied and not an input.
        let bs = OpticalElement::beam_splitter_5050(0, 1, 2).unwrap();
        assert_eq!(bs.apply(&psi, M), Err(Error::ModeCollision(2)));
        // Mode out of range for the subsystem.
        let bs = OpticalElement::beam_splitter_5050(0, 1, 7).unwrap();
        assert!(matches!(
            bs.apply(&mode_state(3, 0), M),
            Err(Error::LevelOutOfRange { .. })
        ));
    }

    #[test]
    fn random_elements_preserve_norm() {
        let mut rng = seeded(31);
        let reg = SubsystemRegistry::new(&[(M, 5), (AUX, 3)]).unwrap();
        let psi = StateVector::from_fn(reg, |l| c(l[0] as f64 - 1.0, 0.3 * l[1] as f64))
            .normalize()
            .unwrap();
        for _ in 0..25 {
            let u = OpticalElement::random_unitary(&[0, 1, 2, 3, 4], &mut rng).unwrap();
            let out = u.apply(&psi, M).unwrap();
            assert!((out.squared_norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn central_transfer_matches_the_solved_relations() {
        let t = central_bs_transfer();
        let r = FRAC_1_SQRT_2;
        // forward |1⟩ = (1/√2)(−|b⟩ + i|c⟩)
        assert!((t.forward[0][0] - c(-r, 0.0)).norm() < 1e-15);
        assert!((t.forward[1][0] - c(0.0, r)).norm() < 1e-15);
        // forward |2⟩ = (1/√2)(i|b⟩ − |c⟩)
        assert!((t.forward[0][1] - c(0.0, r)).norm() < 1e-15);
        assert!((t.forward[1][1] - c(-r, 0.0)).norm() < 1e-15);
        // forward · inverse = I.
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = Complex64::ZERO;
                for k in 0..2 {
                    acc += t.forward[i][k] * t.inverse[k][j];
                }
                let target = if i == j {
                    Complex64::ONE
                } else {
                    Complex64::ZERO
                };
                assert!((acc - target).norm() < 1e-14);
            }
        }
        // Solving forward for the outputs: −|b⟩ = (1/√2)(U|1⟩ + i U|2⟩) and
        // i|c⟩ = (1/√2)(U|1⟩ − i U|2⟩).
        let rt = Complex64::new(r, 0.0);
        let i_ = Complex64::new(0.0, 1.0);
        let minus_b = [
            rt * (t.forward[0][0] + i_ * t.forward[0][1]),
            rt * (t.forward[1][0] + i_ * t.forward[1][1]),
        ];
        assert!((minus_b[0] - c(-1.0, 0.0)).norm() < 1e-15);
        assert!(minus_b[1].norm() < 1e-15);
        let i_c = [
            rt * (t.forward[0][0] - i_ * t.forward[0][1]),
            rt * (t.forward[1][0] - i_ * t.forward[1][1]),
        ];
        assert!(i_c[0].norm() < 1e-15);
        assert!((i_c[1] - c(0.0, 1.0)).norm() < 1e-15);
    }
}
