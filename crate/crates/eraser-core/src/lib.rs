//! Numerical model of a two-photon delayed-choice quantum eraser.
//!
//! An entangled photon pair is emitted from one of two sites (coherently
//! added possibilities). One photon is position-detected on a scanned
//! detector; the other meets a randomized beam-splitter network that either
//! reveals its emission path or erases it. This crate builds the joint state
//! exactly, evolves it through the optics, and exposes the statistics that
//! make the standard claims checkable: coincidence fringes and anti-fringes,
//! a structureless unconditioned marginal, no-signalling under local
//! operations, and the Schmidt structure of the erased branch.
//!
//! The crate is `no_std` (with `alloc`); everything here is pure math over
//! immutable values. IO, file formats, and the command-line front end live
//! in the companion `eraser-cli` crate.
//!
//! Module map:
//!
//! - [`qcore`] — labeled tensor-product state vectors, density operators,
//!   partial trace, Schmidt decomposition.
//! - [`optics`] — beam-splitter, mirror, and relabeling elements acting on
//!   one subsystem's modes.
//! - [`eraser`] — the experiment itself: dressed detector states, layouts,
//!   evolution, conditioned states, coincidence tables.
//! - [`montecarlo`] — photon-by-photon sampling, chi-square goodness of fit.
//! - [`expdsl`] — the `.exp` experiment-description format.
//!
//! Running the default experiment takes a few lines:
//!
//! ```
//! use eraser_core::eraser::{DetectorId, Experiment};
//! use eraser_core::expdsl::ExperimentConfig;
//!
//! let experiment = Experiment::from_config(&ExperimentConfig::default())?;
//! let state = experiment.run()?;
//! let table = state.coincidence_table()?;
//!
//! // Each detector fires a quarter of the time, but only the rows behind
//! // the central splitter carry fringes.
//! assert!((state.detector_marginal(DetectorId::B) - 0.25).abs() < 1e-12);
//! assert!(table.row_visibility(DetectorId::B)? > 1.0 - 1e-9);
//! assert!(table.row_visibility(DetectorId::A)? < 1e-12);
//! # Ok::<(), eraser_core::Error>(())
//! ```

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod eraser;
pub mod error;
pub mod expdsl;
pub mod montecarlo;
pub mod optics;
pub mod qcore;
pub mod rng;
pub mod tol;

pub use error::{Error, Result};
