//! Linear-algebra substrate: bases, operators, states and propagators.
//!
//! Every operator carries SI units (J for Hamiltonians, J s for momenta) and
//! every propagator divides by ħ internally, so callers never rescale.

pub mod basis;
pub mod eigen;
pub mod evolve;
pub mod krylov;
pub mod operator;
pub mod ops;
pub mod sparse;
pub mod split;
pub mod state;

pub use basis::{AngleSpace, BasisSpec, Factor, SpinSpace};
pub use eigen::{hermitian_eig, real_symmetric_eig, Eigen};
pub use evolve::{evolve, propagate, Method, PropagationReport, PropagationSettings, SpectralPropagator, StateTrajectory};
pub use krylov::{KrylovOptions, KrylovPropagator};
pub use operator::{embed, tensor, OperatorMatrix};
pub use ops::{fock_operators, pauli, rotor_operators, spin1_operators, FockOperators, RotorOperators, SpinOperators};
pub use sparse::SparseOperator;
pub use state::{coherent_state, expectation, ground_state, thermal_density, DensityMatrix, QuantumState, StateVector};
