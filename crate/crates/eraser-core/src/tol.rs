//! Repo-wide numeric tolerances.
//!
//! Two grades cover almost everything: identities that hold to rounding
//! error in f64 (`EXACT`) and quantities that pass through an iterative
//! decomposition (`DECOMP`). The few remaining constants are floors and
//! agreement bounds used by specific operations; nothing else in the
//! workspace introduces its own magic numbers.

/// Algebraic identities evaluated in f64: norms, traces, Hermiticity,
/// elementwise equality of two construction orders.
pub const EXACT: f64 = 1e-12;

/// Results of eigen/Schmidt decompositions: orthonormality, reconstruction,
/// coefficient values.
pub const DECOMP: f64 = 1e-10;

/// Allowed eigenvalue negativity when checking positive semidefiniteness.
pub const PSD_FLOOR: f64 = -1e-10;

/// Squared-norm floor below which a projected state must not be
/// renormalized.
pub const ZERO_PROJECTION: f64 = 1e-14;

/// Agreement bound for unit-visibility fringes and unit overlaps, where the
/// compared quantity is itself a ratio of decomposition outputs.
pub const UNIT_AGREEMENT: f64 = 1e-9;

/// A probability mass treated as structurally absent (empty detector rows).
pub const NEGLIGIBLE_PROBABILITY: f64 = 1e-30;
