//! Multipartite entropic correlation measures for finite-dimensional quantum
//! states, and the optimization machinery that turns them into computable
//! entanglement and secrecy bounds.
//!
//! The crate is organized around a small set of ideas:
//!
//! * [`state`] — labeled multipartite density matrices, pure states and
//!   channels, with the linear-algebra primitives (tensor, partial trace,
//!   entropy, purification) everything else consumes.
//! * [`entropic`] — two multipartite mutual informations (`I` and `S_m`),
//!   their conditional forms via entropy subtraction, and a numeric verifier
//!   for the algebraic identities they satisfy.
//! * [`catalog`] — constructors for the canonical states used throughout:
//!   GHZ states, flower states with their purifications, private dits and
//!   ideal key states.
//! * [`squashed`] — classical and quantum extensions of a state and the
//!   optimizers that compute upper bounds on squashed entanglement and mixed
//!   convex roofs.
//! * [`harness`] — axiom-checking probes (local unitary invariance, flags,
//!   convexity, continuity) for arbitrary state functionals, plus key-rate
//!   bounds and the lockability demonstration.
//! * [`classical`] — joint probability distributions, intrinsic information
//!   and its chained variant, with a diagonal embedding bridging back to the
//!   quantum modules.
//!
//! All logarithms are base 2; every information quantity is reported in bits.
//! Operations are pure functions of immutable inputs; randomized procedures
//! take explicit seeds and are fully deterministic.

use thiserror::Error;

pub mod catalog;
pub mod classical;
pub mod entropic;
pub mod harness;
pub mod io;
mod linalg;
pub mod optim;
pub mod par;
pub mod sample;
pub mod squashed;
pub mod state;

pub use state::{DensityMatrix, KrausChannel, PureState, SystemLayout};

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not Hermitian (asymmetry {0:.3e} exceeds tolerance)")]
    NotHermitian(f64),
    #[error("matrix is not positive semidefinite (minimum eigenvalue {0:.3e})")]
    NotPositive(f64),
    #[error("trace is {0}, expected 1 within tolerance")]
    TraceNotOne(f64),
    #[error("vector norm is {0}, expected 1 within tolerance")]
    NotNormalized(f64),
    #[error("Kraus operators violate completeness (deviation {0:.3e})")]
    IncompleteChannel(f64),
    #[error("label clash: {0}")]
    LabelClash(String),
    #[error("unknown label: {0}")]
    UnknownLabel(String),
    #[error("cannot trace out every subsystem")]
    EmptyRemainder,
    #[error("bad partition: {0}")]
    BadPartition(String),
    #[error("bad basis: {0}")]
    BadBasis(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("extension does not reproduce its target (deviation {0:.3e})")]
    ExtensionMismatch(f64),
    #[error("problem too large: {0}")]
    TooLarge(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
