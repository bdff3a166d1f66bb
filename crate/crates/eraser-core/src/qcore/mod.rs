//! Dense complex linear-algebra substrate: labeled tensor-product state
//! vectors, density operators, partial trace, and Schmidt decomposition.
//!
//! All values are immutable after construction and every operation is a
//! pure function, so the whole module is safe to use from multiple threads
//! without qualification.

mod density;
pub mod linalg;
mod registry;
mod schmidt;
mod state;

pub use density::{partial_trace, DensityOperator};
pub use registry::{BasisLabel, Bipartition, SubsystemId, SubsystemRegistry};
pub use schmidt::{schmidt, SchmidtDecomposition};
pub use state::StateVector;
