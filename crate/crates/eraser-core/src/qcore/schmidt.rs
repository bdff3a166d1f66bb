//! Schmidt decomposition of bipartite pure states.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

use super::linalg;
use super::registry::{Bipartition, SubsystemId};
use super::state::StateVector;

/// ψ = Σ_k σ_k · left_k ⊗ right_k, with nonincreasing
/// nonnegative coefficients and orthonormal vector families on the two
/// sides of the split.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    coefficients: Vec<f64>,
    left: Vec<StateVector>,
    right: Vec<StateVector>,
}

impl SchmidtDecomposition {
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn left_vectors(&self) -> &[StateVector] {
        &self.left
    }

    pub fn right_vectors(&self) -> &[StateVector] {
        &self.right
    }

    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// Rebuild Σ_k σ_k · left_k ⊗ right_k on the original registry.
    pub fn reconstruct(&self) -> Result<StateVector> {
        let mut acc: Option<StateVector> = None;
        for ((sigma, l), r) in self.coefficients.iter().zip(&self.left).zip(&self.right) {
            let term = l.tensor(r)?.scaled(Complex64::new(*sigma, 0.0));
            acc = Some(match acc {
                None => term,
                Some(s) => s.add(&term)?,
            });
        }
        acc.ok_or(Error::InvalidPartition)
    }

    /// Largest deviation from orthonormality across both vector families.
    pub fn orthonormality_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for family in [&self.left, &self.right] {
            for (i, a) in family.iter().enumerate() {
                for (j, b) in family.iter().enumerate() {
                    let target = if i == j {
                        Complex64::ONE
                    } else {
                        Complex64::ZERO
                    };
                    if let Ok(ov) = a.inner(b) {
                        worst = worst.max((ov - target).norm());
                    }
                }
            }
        }
        worst
    }
}

/// Schmidt decomposition of a normalized state across `left` vs the rest.
/// The coefficients are the singular values of the coefficient matrix
/// reshaped by the split.
pub fn schmidt(psi: &StateVector, left: &[SubsystemId]) -> Result<SchmidtDecomposition> {
    let n2 = psi.squared_norm();
    if (n2 - 1.0).abs() > tol::EXACT {
        return Err(Error::NotNormalized { squared_norm: n2 });
    }
    let part = Bipartition::new(psi.registry(), left)?;
    let m = psi.bipartite_matrix(&part);
    let (ld, rd) = (part.left_dim(), part.right_dim());
    let svd = linalg::svd(&m, ld, rd);

    let left_vecs = svd
        .left
        .iter()
        .map(|col| StateVector::from_amplitudes(part.left().clone(), col.clone()))
        .collect::<Result<Vec<_>>>()?;
    // ψ_{lr} = Σ_k σ_k U_{lk} conj(V_{rk}), so the right Schmidt vectors
    // carry the conjugated right-singular components.
    let right_vecs = svd
        .right
        .iter()
        .map(|col| {
            StateVector::from_amplitudes(
                part.right().clone(),
                col.iter().map(|z| z.conj()).collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SchmidtDecomposition {
        coefficients: svd.values,
        left: left_vecs,
        right: right_vecs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::registry::SubsystemRegistry;
    use crate::rng::{seeded, standard_normal};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    const A: SubsystemId = SubsystemId(0);
    const B: SubsystemId = SubsystemId(1);

    fn random_state(registry: SubsystemRegistry, seed: u64) -> StateVector {
        let mut rng = seeded(seed);
        StateVector::from_fn(registry, |_| {
            c(standard_normal(&mut rng), standard_normal(&mut rng))
        })
        .normalize()
        .unwrap()
    }

    #[test]
    fn product_state_has_a_single_coefficient() {
        let a = random_state(SubsystemRegistry::single(A, 3).unwrap(), 1);
        let b = random_state(SubsystemRegistry::single(B, 4).unwrap(), 2);
        let d = schmidt(&a.tensor(&b).unwrap(), &[A]).unwrap();
        assert_eq!(d.rank(), 1);
        assert!((d.coefficients()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coefficients_square_to_reduced_eigenvalues() {
        for seed in 0..8 {
            let reg = SubsystemRegistry::new(&[(A, 3), (B, 5)]).unwrap();
            let psi = random_state(reg, 100 + seed);
            let d = schmidt(&psi, &[A]).unwrap();
            // Oracle: eigendecomposition of the reduced operator, an
            // independent route through different code.
            let evals = psi.reduced_density(&[A]).unwrap().eigenvalues();
            for (k, sigma) in d.coefficients().iter().enumerate() {
                assert!(
                    (sigma * sigma - evals[k]).abs() < 1e-10,
                    "σ²={} vs λ={}",
                    sigma * sigma,
                    evals[k]
                );
            }
            let total: f64 = d.coefficients().iter().map(|s| s * s).sum();
            assert!((total - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn reconstruction_and_orthonormality() {
        for seed in 0..6 {
            let reg = SubsystemRegistry::new(&[(A, 4), (B, 6)]).unwrap();
            let psi = random_state(reg, 200 + seed);
            let d = schmidt(&psi, &[B]).unwrap();
            assert!(d.orthonormality_deviation() < 1e-10);
            let recon = d.reconstruct().unwrap();
            assert!(recon.phase_aligned_max_diff(&psi).unwrap() < 1e-10);
        }
    }

    #[test]
    fn unnormalized_input_is_rejected() {
        let reg = SubsystemRegistry::new(&[(A, 2), (B, 2)]).unwrap();
        let psi = random_state(reg, 3).scaled(c(2.0, 0.0));
        assert!(matches!(
            schmidt(&psi, &[A]),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn maximally_entangled_pair_has_equal_coefficients() {
        // (1/√2)(|0,0⟩ + |1,1⟩) → coefficients (1/√2, 1/√2).
        let reg = SubsystemRegistry::new(&[(A, 2), (B, 2)]).unwrap();
        let rt = 1.0 / 2.0f64.sqrt();
        let mut amps = alloc::vec![Complex64::ZERO; 4];
        amps[0] = c(rt, 0.0);
        amps[3] = c(rt, 0.0);
        let psi = StateVector::from_amplitudes(reg, amps).unwrap();
        let d = schmidt(&psi, &[A]).unwrap();
        assert_eq!(d.rank(), 2);
        for sigma in d.coefficients() {
            assert!((sigma - rt).abs() < 1e-12);
        }
    }
}
