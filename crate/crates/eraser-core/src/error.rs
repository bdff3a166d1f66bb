//! Crate-wide error type.
//!
//! The experiment-description parser has its own [`crate::expdsl::ParseError`]
//! carrying line/column information; everything else reports through
//! [`Error`].

use core::fmt;

use crate::qcore::SubsystemId;

/// Errors raised by state construction, optics, and statistics operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two values built over different subsystem registries were combined.
    RegistryMismatch,
    /// Tensor factors declare the same subsystem id.
    OverlappingSubsystems(SubsystemId),
    /// A subsystem id is not declared in the registry at hand.
    UnknownSubsystem(SubsystemId),
    /// A basis level index is not below its subsystem's dimension.
    LevelOutOfRange {
        subsystem: SubsystemId,
        level: usize,
        dim: usize,
    },
    /// A label or registry declares the same subsystem twice.
    DuplicateSubsystem(SubsystemId),
    /// A registry entry declares dimension zero.
    ZeroDimension(SubsystemId),
    /// A label does not cover exactly the subsystems of the registry.
    IncompleteLabel,
    /// The operation requires a normalized state.
    NotNormalized { squared_norm: f64 },
    /// A kept-subsystem set must be a nonempty proper subset.
    InvalidPartition,
    /// The supplied subspace vectors are not orthonormal.
    NotOrthonormal { deviation: f64 },
    /// A projection left no amplitude to renormalize.
    ZeroProjection { squared_norm: f64 },
    /// An optical element lists the same mode twice on one side.
    DuplicateMode(usize),
    /// An element transfer matrix is not an isometry.
    NotIsometry { deviation: f64 },
    /// Element application would overwrite amplitude already present on an
    /// output-only mode.
    ModeCollision(usize),
    /// The operation needs a square (unitary) element.
    NotSquare,
    /// Transfer matrix shape disagrees with the mode lists.
    ShapeMismatch,
    /// A detector model must have at least one bin.
    EmptyDetector,
    /// Envelope/phase vectors disagree in length or the envelope is invalid.
    InvalidDetectorModel,
    /// A sampling run needs at least one trial.
    ZeroTrials,
    /// A partitioned run needs at least one partition.
    ZeroPartitions,
    /// The requested detector row carries no probability or no counts.
    EmptyRow,
    /// Chi-square needs at least two cells after pooling.
    DegenerateTable,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::RegistryMismatch => write!(f, "subsystem registries do not match"),
            Error::OverlappingSubsystems(id) => {
                write!(f, "tensor factors both declare subsystem {}", id.0)
            }
            Error::UnknownSubsystem(id) => write!(f, "subsystem {} is not declared", id.0),
            Error::LevelOutOfRange {
                subsystem,
                level,
                dim,
            } => write!(
                f,
                "level {} out of range for subsystem {} (dimension {})",
                level, subsystem.0, dim
            ),
            Error::DuplicateSubsystem(id) => write!(f, "subsystem {} declared twice", id.0),
            Error::ZeroDimension(id) => {
                write!(f, "subsystem {} declared with dimension zero", id.0)
            }
            Error::IncompleteLabel => write!(f, "label does not cover the registry"),
            Error::NotNormalized { squared_norm } => {
                write!(f, "state is not normalized (squared norm {squared_norm})")
            }
            Error::InvalidPartition => {
                write!(f, "kept subsystems must form a nonempty proper subset")
            }
            Error::NotOrthonormal { deviation } => {
                write!(
                    f,
                    "subspace vectors not orthonormal (deviation {deviation})"
                )
            }
            Error::ZeroProjection { squared_norm } => write!(
                f,
                "projection has negligible probability ({squared_norm}); cannot renormalize"
            ),
            Error::DuplicateMode(m) => write!(f, "mode {m} listed twice"),
            Error::NotIsometry { deviation } => {
                write!(
                    f,
                    "transfer matrix is not an isometry (deviation {deviation})"
                )
            }
            Error::ModeCollision(m) => write!(
                f,
                "output mode {m} already carries amplitude and is not an input"
            ),
            Error::NotSquare => write!(f, "operation requires a square element"),
            Error::ShapeMismatch => write!(f, "matrix shape disagrees with mode lists"),
            Error::EmptyDetector => write!(f, "detector model must have at least one bin"),
            Error::InvalidDetectorModel => write!(f, "invalid detector model"),
            Error::ZeroTrials => write!(f, "trials must be at least 1"),
            Error::ZeroPartitions => write!(f, "partitions must be at least 1"),
            Error::EmptyRow => write!(f, "detector row carries no probability"),
            Error::DegenerateTable => {
                write!(f, "fewer than two cells remain after pooling")
            }
        }
    }
}

impl core::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
