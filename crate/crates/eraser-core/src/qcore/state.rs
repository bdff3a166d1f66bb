//! Labeled tensor-product state vectors.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
// f64 math through the trait so the no_std build finds it in libm.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::tol;

use super::registry::{BasisLabel, Bipartition, SubsystemId, SubsystemRegistry};

/// Dense complex amplitudes over the product basis of a registry.
///
/// Amplitudes are stored row-major in canonical registry order; a
/// [`BasisLabel`] addresses one of them. States are immutable: every
/// operation returns a fresh value.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    registry: SubsystemRegistry,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The zero vector over `registry`.
    pub fn zero(registry: SubsystemRegistry) -> Self {
        let amps = vec![Complex64::ZERO; registry.total_dim()];
        Self { registry, amps }
    }

    /// The basis state `|label⟩`.
    pub fn basis_state(registry: SubsystemRegistry, label: &BasisLabel) -> Result<Self> {
        let idx = label.index_in(&registry)?;
        let mut s = Self::zero(registry);
        s.amps[idx] = Complex64::ONE;
        Ok(s)
    }

    /// Build from a function of the per-subsystem levels (canonical order).
    pub fn from_fn(registry: SubsystemRegistry, mut f: impl FnMut(&[usize]) -> Complex64) -> Self {
        let total = registry.total_dim();
        let mut amps = Vec::with_capacity(total);
        for idx in 0..total {
            let levels = registry.unflatten(idx);
            amps.push(f(&levels));
        }
        Self { registry, amps }
    }

    /// Adopt a flat amplitude vector (canonical order).
    pub fn from_amplitudes(registry: SubsystemRegistry, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != registry.total_dim() {
            return Err(Error::ShapeMismatch);
        }
        Ok(Self { registry, amps })
    }

    pub fn registry(&self) -> &SubsystemRegistry {
        &self.registry
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, label: &BasisLabel) -> Result<Complex64> {
        Ok(self.amps[label.index_in(&self.registry)?])
    }

    pub(crate) fn amp_flat(&self, idx: usize) -> Complex64 {
        self.amps[idx]
    }

    pub fn squared_norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.squared_norm().sqrt()
    }

    /// Rescale to unit norm.
    pub fn normalize(&self) -> Result<Self> {
        let n2 = self.squared_norm();
        if n2 < tol::ZERO_PROJECTION {
            return Err(Error::ZeroProjection { squared_norm: n2 });
        }
        Ok(self.scaled(Complex64::new(1.0 / n2.sqrt(), 0.0)))
    }

    pub fn is_normalized(&self) -> bool {
        (self.squared_norm() - 1.0).abs() <= tol::EXACT
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            registry: self.registry.clone(),
            amps: self.amps.iter().map(|a| a * factor).collect(),
        }
    }

    /// Componentwise sum; registries must match.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.registry != other.registry {
            return Err(Error::RegistryMismatch);
        }
        Ok(Self {
            registry: self.registry.clone(),
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Inner product ⟨self|other⟩: conjugate-linear in `self`, linear in
    /// `other`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.registry != other.registry {
            return Err(Error::RegistryMismatch);
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Tensor product over disjoint subsystem sets. Amplitudes multiply, so
    /// the norm of the product is the product of norms.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let merged = self.registry.merge(&other.registry)?;
        let mut out = Self::zero(merged);
        // The merged registry re-sorts subsystems, so route each (i, j)
        // pair through a level map rather than assuming contiguity.
        let mut levels = vec![0usize; out.registry.len()];
        for i in 0..self.amps.len() {
            let la = self.registry.unflatten(i);
            for j in 0..other.amps.len() {
                let lb = other.registry.unflatten(j);
                for (k, &(id, _)) in out.registry.entries().iter().enumerate() {
                    levels[k] = if let Some(p) = self.registry.position(id) {
                        la[p]
                    } else {
                        lb[other.registry.position(id).expect("merged id")]
                    };
                }
                let idx = out.registry.flatten(&levels).expect("levels in range");
                out.amps[idx] = self.amps[i] * other.amps[j];
            }
        }
        Ok(out)
    }

    /// Reshape into a `left x right` coefficient matrix for the given
    /// subsystem split (row-major over the two sub-registries).
    pub(crate) fn bipartite_matrix(&self, part: &Bipartition) -> Vec<Complex64> {
        let mut m = vec![Complex64::ZERO; part.left_dim() * part.right_dim()];
        for (full, &a) in self.amps.iter().enumerate() {
            let (l, r) = part.split_index(full);
            m[l * part.right_dim() + r] = a;
        }
        m
    }

    pub(crate) fn from_bipartite_matrix(
        registry: SubsystemRegistry,
        part: &Bipartition,
        m: &[Complex64],
    ) -> Self {
        let mut out = Self::zero(registry);
        for l in 0..part.left_dim() {
            for r in 0..part.right_dim() {
                out.amps[part.full_index(l, r)] = m[l * part.right_dim() + r];
            }
        }
        out
    }

    /// Reduced density operator over `keep`, by direct contraction of the
    /// outer product (the partial trace of the pure state).
    pub fn reduced_density(&self, keep: &[SubsystemId]) -> Result<super::DensityOperator> {
        let part = Bipartition::new(&self.registry, keep)?;
        let m = self.bipartite_matrix(&part);
        let (kd, td) = (part.left_dim(), part.right_dim());
        let mut rho = vec![Complex64::ZERO; kd * kd];
        for k in 0..kd {
            for k2 in 0..kd {
                let mut acc = Complex64::ZERO;
                for t in 0..td {
                    acc += m[k * td + t] * m[k2 * td + t].conj();
                }
                rho[k * kd + k2] = acc;
            }
        }
        super::DensityOperator::from_matrix(part.left().clone(), rho)
    }

    /// Project onto the span of `subspace` (orthonormal vectors on a single
    /// subsystem) and renormalize. Returns the normalized state and the
    /// projection probability.
    pub fn project_renormalize(&self, subspace: &[StateVector]) -> Result<(Self, f64)> {
        let sub_registry = subspace
            .first()
            .ok_or(Error::InvalidPartition)?
            .registry()
            .clone();
        if sub_registry.len() != 1 {
            return Err(Error::InvalidPartition);
        }
        let id = sub_registry.entries()[0].0;
        if sub_registry.dim_of(id)? != self.registry.dim_of(id)? {
            return Err(Error::RegistryMismatch);
        }
        let mut ortho_dev = 0.0f64;
        for (i, a) in subspace.iter().enumerate() {
            for (j, b) in subspace.iter().enumerate() {
                if a.registry() != &sub_registry {
                    return Err(Error::RegistryMismatch);
                }
                let target = if i == j {
                    Complex64::ONE
                } else {
                    Complex64::ZERO
                };
                ortho_dev = ortho_dev.max((a.inner(b)? - target).norm());
            }
        }
        if ortho_dev > tol::DECOMP {
            return Err(Error::NotOrthonormal {
                deviation: ortho_dev,
            });
        }

        let part = Bipartition::new(&self.registry, &[id])?;
        let m = self.bipartite_matrix(&part);
        let (ld, rd) = (part.left_dim(), part.right_dim());
        let mut projected = vec![Complex64::ZERO; ld * rd];
        for v in subspace {
            // coefficient row ⟨v|ψ⟩ on the right factor, then re-emit along v
            for r in 0..rd {
                let mut coeff = Complex64::ZERO;
                for l in 0..ld {
                    coeff += v.amps[l].conj() * m[l * rd + r];
                }
                for l in 0..ld {
                    projected[l * rd + r] += v.amps[l] * coeff;
                }
            }
        }
        let out = Self::from_bipartite_matrix(self.registry.clone(), &part, &projected);
        let p = out.squared_norm();
        if p < tol::ZERO_PROJECTION {
            return Err(Error::ZeroProjection { squared_norm: p });
        }
        Ok((out.scaled(Complex64::new(1.0 / p.sqrt(), 0.0)), p))
    }

    /// Contract one subsystem against `vec`, yielding ⟨vec|ψ⟩ on the
    /// remaining subsystems (unnormalized).
    pub fn partial_inner(&self, vec_on_subsystem: &StateVector) -> Result<StateVector> {
        let sub = vec_on_subsystem.registry();
        if sub.len() != 1 {
            return Err(Error::InvalidPartition);
        }
        let id = sub.entries()[0].0;
        if sub.dim_of(id)? != self.registry.dim_of(id)? {
            return Err(Error::RegistryMismatch);
        }
        let part = Bipartition::new(&self.registry, &[id])?;
        let m = self.bipartite_matrix(&part);
        let (ld, rd) = (part.left_dim(), part.right_dim());
        let mut out = vec![Complex64::ZERO; rd];
        for l in 0..ld {
            let c = vec_on_subsystem.amps[l].conj();
            for r in 0..rd {
                out[r] += c * m[l * rd + r];
            }
        }
        Self::from_amplitudes(part.right().clone(), out)
    }

    /// Re-map the levels of one subsystem. `map[old] = Some(new)` moves a
    /// level, `None` drops it; dropped levels must carry no amplitude. The
    /// subsystem's dimension becomes `new_dim`.
    pub fn map_levels(
        &self,
        id: SubsystemId,
        map: &[Option<usize>],
        new_dim: usize,
    ) -> Result<Self> {
        let old_dim = self.registry.dim_of(id)?;
        if map.len() != old_dim || new_dim == 0 {
            return Err(Error::ShapeMismatch);
        }
        let mut seen = vec![false; new_dim];
        for &target in map {
            if let Some(t) = target {
                if t >= new_dim {
                    return Err(Error::LevelOutOfRange {
                        subsystem: id,
                        level: t,
                        dim: new_dim,
                    });
                }
                if seen[t] {
                    return Err(Error::DuplicateMode(t));
                }
                seen[t] = true;
            }
        }

        let mut entries = self.registry.entries().to_vec();
        let pos = self.registry.position(id).expect("dim_of checked");
        entries[pos].1 = new_dim;
        let new_registry = SubsystemRegistry::new(&entries)?;
        let mut out = Self::zero(new_registry);
        for (full, &a) in self.amps.iter().enumerate() {
            let mut levels = self.registry.unflatten(full);
            match map[levels[pos]] {
                Some(new_level) => {
                    levels[pos] = new_level;
                    let idx = out.registry.flatten(&levels)?;
                    out.amps[idx] = a;
                }
                None => {
                    if a != Complex64::ZERO {
                        return Err(Error::ModeCollision(levels[pos]));
                    }
                }
            }
        }
        Ok(out)
    }

    /// |⟨self|other⟩| — the global-phase-blind overlap used for state
    /// comparisons.
    pub fn overlap_magnitude(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm())
    }

    /// Align the global phase of `self` to `other`, then return the largest
    /// componentwise difference.
    pub fn phase_aligned_max_diff(&self, other: &Self) -> Result<f64> {
        let ov = self.inner(other)?;
        let phase = if ov.norm() > 0.0 {
            ov / ov.norm()
        } else {
            Complex64::ONE
        };
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a * phase - b).norm())
            .fold(0.0f64, f64::max))
    }
}
