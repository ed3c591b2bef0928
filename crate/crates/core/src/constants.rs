//! CODATA values used throughout, all in SI units.

use std::f64::consts::PI;

/// Reduced Planck constant [J s].
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant [J/K].
pub const K_B: f64 = 1.380_649e-23;
/// Speed of light [m/s].
pub const C: f64 = 299_792_458.0;
/// Vacuum permittivity [F/m].
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Atomic mass unit [kg].
pub const AMU: f64 = 1.660_539_066_60e-27;

/// NV gyromagnetic ratio, 2π × 28.024 GHz/T [rad s⁻¹ T⁻¹].
pub const GAMMA_NV: f64 = 2.0 * PI * 28.024e9;
/// NV zero-field splitting, 2π × 2.87 GHz [rad/s].
pub const D_NV: f64 = 2.0 * PI * 2.87e9;
/// Mass density of diamond [kg/m³].
pub const DIAMOND_DENSITY: f64 = 3500.0;
