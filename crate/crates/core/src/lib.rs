//! Spin-rotor models of a levitated, rapidly spinning nanodiamond that hosts
//! a single NV centre.
//!
//! The crate is organised in four layers:
//!
//! * [`quantum`]: operators, bases, states and propagators in SI units.
//! * [`model`]: physical parameters, derived scales and the Hamiltonian
//!   hierarchy from the full rotor model down to the dispersive limit.
//! * [`analytics`]: closed-form observables (alignment, potential surfaces,
//!   overlaps, interference, decoherence rates, validity ratios).
//! * [`protocol`]: composite experiments built on the two layers below.

pub mod analytics;
pub mod constants;
pub mod error;
pub mod model;
pub mod protocol;
pub mod quantum;

pub use error::{Error, Result};
pub use num_complex::Complex64;
