//! Density operators and partial traces.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

use super::linalg;
use super::registry::{Bipartition, SubsystemId, SubsystemRegistry};
use super::state::StateVector;

/// Hermitian, unit-trace, positive matrix over a registry's product basis
/// (row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    registry: SubsystemRegistry,
    mat: Vec<Complex64>,
}

impl DensityOperator {
    /// |ψ⟩⟨ψ| for a normalized state.
    pub fn pure(psi: &StateVector) -> Result<Self> {
        let n2 = psi.squared_norm();
        if (n2 - 1.0).abs() > tol::EXACT {
            return Err(Error::NotNormalized { squared_norm: n2 });
        }
        let amps = psi.amplitudes();
        let d = amps.len();
        let mut mat = vec![Complex64::ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                mat[i * d + j] = amps[i] * amps[j].conj();
            }
        }
        Ok(Self {
            registry: psi.registry().clone(),
            mat,
        })
    }

    pub(crate) fn from_matrix(registry: SubsystemRegistry, mat: Vec<Complex64>) -> Result<Self> {
        if mat.len() != registry.total_dim() * registry.total_dim() {
            return Err(Error::ShapeMismatch);
        }
        Ok(Self { registry, mat })
    }

    pub fn registry(&self) -> &SubsystemRegistry {
        &self.registry
    }

    pub fn dim(&self) -> usize {
        self.registry.total_dim()
    }

    pub fn matrix(&self) -> &[Complex64] {
        &self.mat
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.mat[row * self.dim() + col]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.entry(i, i)).sum()
    }

    /// max |ρ(i,j) − conj(ρ(j,i))|.
    pub fn hermiticity_deviation(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.entry(i, j) - self.entry(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.mat, self.dim())
    }

    /// Check the density-operator invariants: Hermitian and unit trace to
    /// the exact tolerance, eigenvalues above the PSD floor.
    pub fn validate(&self) -> Result<()> {
        let herm = self.hermiticity_deviation();
        if herm > tol::EXACT {
            return Err(Error::NotOrthonormal { deviation: herm });
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > tol::EXACT || tr.im.abs() > tol::EXACT {
            return Err(Error::NotNormalized {
                squared_norm: tr.re,
            });
        }
        let min = self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < tol::PSD_FLOOR {
            return Err(Error::NotNormalized { squared_norm: min });
        }
        Ok(())
    }

    /// Partial trace onto `keep`: ρ'[k,k'] = Σ_t ρ[(k,t),(k',t)].
    pub fn partial_trace(&self, keep: &[SubsystemId]) -> Result<Self> {
        let part = Bipartition::new(&self.registry, keep)?;
        let (kd, td) = (part.left_dim(), part.right_dim());
        let d = self.dim();
        let mut out = vec![Complex64::ZERO; kd * kd];
        for k in 0..kd {
            for k2 in 0..kd {
                let mut acc = Complex64::ZERO;
                for t in 0..td {
                    acc += self.mat[part.full_index(k, t) * d + part.full_index(k2, t)];
                }
                out[k * kd + k2] = acc;
            }
        }
        Self::from_matrix(part.left().clone(), out)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            registry: self.registry.clone(),
            mat: self.mat.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.registry != other.registry {
            return Err(Error::RegistryMismatch);
        }
        Ok(Self {
            registry: self.registry.clone(),
            mat: self
                .mat
                .iter()
                .zip(&other.mat)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Largest componentwise difference from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.registry != other.registry {
            return Err(Error::RegistryMismatch);
        }
        Ok(self
            .mat
            .iter()
            .zip(&other.mat)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max))
    }
}

/// Partial trace of a pure state or an operator: the free-function form
/// mirrors `StateVector::reduced_density` / `DensityOperator::partial_trace`.
pub fn partial_trace(rho: &DensityOperator, keep: &[SubsystemId]) -> Result<DensityOperator> {
    rho.partial_trace(keep)
}
