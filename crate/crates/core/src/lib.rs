//! Quantum-state calculus and entanglement bounds for finite-dimensional systems.
//!
//! - [`matcore`]: dense complex matrices, Hermitian eigendecomposition, Haar sampling.
//! - [`states`]: density matrices and pure states on labeled subsystems.
//! - [`entropy`]: von Neumann entropy and the entropy inequalities.
//! - [`extremal`]: states saturating the Araki–Lieb triangle inequality and the
//!   extensions built from them.
//! - [`measures`]: numerical upper estimates of entanglement of formation and
//!   squashed entanglement, bracketed by the entropic lower bound and the local
//!   entropy upper bound.

// `!(x <= tol)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod entropy;
pub mod error;
pub mod extremal;
pub mod matcore;
pub mod measures;
pub mod states;

pub use error::{Error, Result};
pub use matcore::{ComplexMatrix, HermitianSpectrum, Isometry};
pub use states::{DensityMatrix, PureState, SubsystemDims};

/// Crate version embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
