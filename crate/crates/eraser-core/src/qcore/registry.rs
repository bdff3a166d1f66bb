//! Subsystem registries and basis labels.
//!
//! A registry declares which subsystems a composite space is built from and
//! their dimensions, in canonical (ascending id) order. Amplitudes are
//! stored densely in row-major order over that registry, so a full basis
//! label maps to a single flat index.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Identifier of one tensor factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsystemId(pub u16);

/// Ordered set of (subsystem, dimension) pairs describing a product space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemRegistry {
    entries: Vec<(SubsystemId, usize)>,
}

impl SubsystemRegistry {
    /// Build a registry. Entries may arrive in any order; they are stored
    /// canonically sorted by id. Duplicate ids and zero dimensions are
    /// rejected.
    pub fn new(entries: &[(SubsystemId, usize)]) -> Result<Self> {
        let mut entries: Vec<_> = entries.to_vec();
        entries.sort_by_key(|(id, _)| *id);
        for pair in entries.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::DuplicateSubsystem(pair[0].0));
            }
        }
        for &(id, dim) in &entries {
            if dim == 0 {
                return Err(Error::ZeroDimension(id));
            }
        }
        Ok(Self { entries })
    }

    /// Single-subsystem registry.
    pub fn single(id: SubsystemId, dim: usize) -> Result<Self> {
        Self::new(&[(id, dim)])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(SubsystemId, usize)] {
        &self.entries
    }

    /// Total dimension of the product space.
    pub fn total_dim(&self) -> usize {
        self.entries.iter().map(|&(_, d)| d).product()
    }

    pub fn contains(&self, id: SubsystemId) -> bool {
        self.position(id).is_some()
    }

    pub fn position(&self, id: SubsystemId) -> Option<usize> {
        self.entries.iter().position(|&(e, _)| e == id)
    }

    pub fn dim_of(&self, id: SubsystemId) -> Result<usize> {
        self.position(id)
            .map(|p| self.entries[p].1)
            .ok_or(Error::UnknownSubsystem(id))
    }

    /// Row-major strides, aligned with `entries()`.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = alloc::vec![1usize; self.entries.len()];
        for k in (0..self.entries.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.entries[k + 1].1;
        }
        strides
    }

    /// Flat index of the basis state with the given per-subsystem levels
    /// (aligned with `entries()`).
    pub fn flatten(&self, levels: &[usize]) -> Result<usize> {
        if levels.len() != self.entries.len() {
            return Err(Error::IncompleteLabel);
        }
        let mut idx = 0usize;
        for (&level, &(id, dim)) in levels.iter().zip(&self.entries) {
            if level >= dim {
                return Err(Error::LevelOutOfRange {
                    subsystem: id,
                    level,
                    dim,
                });
            }
            idx = idx * dim + level;
        }
        Ok(idx)
    }

    /// Per-subsystem levels of a flat index (aligned with `entries()`).
    pub fn unflatten(&self, mut idx: usize) -> Vec<usize> {
        let mut levels = alloc::vec![0usize; self.entries.len()];
        for k in (0..self.entries.len()).rev() {
            let dim = self.entries[k].1;
            levels[k] = idx % dim;
            idx /= dim;
        }
        levels
    }

    /// Disjoint union with another registry (used by tensor products).
    pub fn merge(&self, other: &Self) -> Result<Self> {
        for &(id, _) in &other.entries {
            if self.contains(id) {
                return Err(Error::OverlappingSubsystems(id));
            }
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Self::new(&entries)
    }

    /// Registry restricted to `keep` (every id must be present).
    pub fn subset(&self, keep: &[SubsystemId]) -> Result<Self> {
        let mut entries = Vec::with_capacity(keep.len());
        for &id in keep {
            entries.push((id, self.dim_of(id)?));
        }
        Self::new(&entries)
    }

    /// Registry of all subsystems not in `drop`.
    pub fn complement(&self, drop: &[SubsystemId]) -> Result<Self> {
        let entries: Vec<_> = self
            .entries
            .iter()
            .copied()
            .filter(|(id, _)| !drop.contains(id))
            .collect();
        Self::new(&entries)
    }
}

/// A full product-basis label: one (subsystem, level) factor per declared
/// subsystem, held in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisLabel {
    factors: Vec<(SubsystemId, usize)>,
}

impl BasisLabel {
    /// Build a label from factors in any order; duplicates are rejected.
    pub fn new(factors: &[(SubsystemId, usize)]) -> Result<Self> {
        let mut factors: Vec<_> = factors.to_vec();
        factors.sort_by_key(|(id, _)| *id);
        for pair in factors.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::DuplicateSubsystem(pair[0].0));
            }
        }
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &[(SubsystemId, usize)] {
        &self.factors
    }

    /// Flat index of this label in `registry`. The label must cover exactly
    /// the registry's subsystems, with each level in range.
    pub fn index_in(&self, registry: &SubsystemRegistry) -> Result<usize> {
        if self.factors.len() != registry.len() {
            return Err(Error::IncompleteLabel);
        }
        let mut levels = Vec::with_capacity(self.factors.len());
        for (&(id, level), &(rid, _)) in self.factors.iter().zip(registry.entries()) {
            if id != rid {
                return Err(Error::UnknownSubsystem(id));
            }
            levels.push(level);
        }
        registry.flatten(&levels)
    }
}

/// Precomputed split of a registry into a "left" subsystem group and its
/// complement, with index maps between the full flat index and the
/// (left, right) pair. Shared by partial trace, Schmidt reshaping,
/// projections, and element application.
#[derive(Debug, Clone)]
pub struct Bipartition {
    left: SubsystemRegistry,
    right: SubsystemRegistry,
    /// full flat index -> (left flat, right flat)
    split: Vec<(usize, usize)>,
    /// left * right_dim + right -> full flat index
    join: Vec<usize>,
}

impl Bipartition {
    /// Split `registry` into `left_ids` and the rest. `left_ids` must be a
    /// nonempty proper subset of the registry.
    pub fn new(registry: &SubsystemRegistry, left_ids: &[SubsystemId]) -> Result<Self> {
        if left_ids.is_empty() || left_ids.len() >= registry.len() {
            return Err(Error::InvalidPartition);
        }
        let left = registry.subset(left_ids)?;
        let right = registry.complement(left_ids)?;

        let total = registry.total_dim();
        let (ldim, rdim) = (left.total_dim(), right.total_dim());
        let mut split = alloc::vec![(0usize, 0usize); total];
        let mut join = alloc::vec![0usize; total];

        let lstrides = left.strides();
        let rstrides = right.strides();
        for (full, slot) in split.iter_mut().enumerate() {
            let levels = registry.unflatten(full);
            let (mut l, mut r) = (0usize, 0usize);
            for (k, &(id, _)) in registry.entries().iter().enumerate() {
                if let Some(pos) = left.position(id) {
                    l += levels[k] * lstrides[pos];
                } else {
                    let pos = right.position(id).expect("complement covers the rest");
                    r += levels[k] * rstrides[pos];
                }
            }
            *slot = (l, r);
            join[l * rdim + r] = full;
        }
        debug_assert_eq!(ldim * rdim, total);
        Ok(Self {
            left,
            right,
            split,
            join,
        })
    }

    pub fn left(&self) -> &SubsystemRegistry {
        &self.left
    }

    pub fn right(&self) -> &SubsystemRegistry {
        &self.right
    }

    pub fn left_dim(&self) -> usize {
        self.left.total_dim()
    }

    pub fn right_dim(&self) -> usize {
        self.right.total_dim()
    }

    pub fn split_index(&self, full: usize) -> (usize, usize) {
        self.split[full]
    }

    pub fn full_index(&self, left: usize, right: usize) -> usize {
        self.join[left * self.right_dim() + right]
    }
}
