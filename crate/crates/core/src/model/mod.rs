//! Physical inputs, derived scales and the Hamiltonian hierarchy.

pub mod gamma;
pub mod geometry;
pub mod hamiltonians;
pub mod params;
pub mod rotation;

pub use gamma::AngleOperators;
pub use geometry::{gauss_legendre, inertia_from_geometry, quadrupole_moments};
pub use hamiltonians::{
    build_h2, build_h_asym, build_h_disp, build_h_eff, build_h_mag, build_h_misaligned, build_h_rot,
    mag_spin_block, misaligned_spin_block, secular_potential_beta,
};
pub use params::{derive_scales, DerivedScales, Environment, FieldConfig, ParticleGeometry, TrapConfig};
pub use rotation::{principal_axes, rotation_matrix};
