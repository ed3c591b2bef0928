//! Closed-form observables, special functions, validity ratios and
//! decoherence-rate estimates.

pub mod alignment;
pub mod decoherence;
pub mod imperfections;
pub mod interference;
pub mod overlap;
pub mod special;
pub mod surfaces;
pub mod validity;

pub use alignment::{barnett_alignment, Alignment};
pub use decoherence::{decoherence_report, DecoherenceReport};
pub use imperfections::{asymmetry_bound, doppler_drift_average, misalignment_angle, DriftAverage};
pub use interference::{
    app_g_coefficient, i_gamma_general, interference_probability, lambda_tau, zeta, InterferenceResult,
};
pub use overlap::{displacement_overlap, displacement_overlap_fock, flip_overlap, overlap_fn, zeeman_overlap};
pub use special::{bessel_i, bessel_i_scaled, bessel_ratio, laguerre};
pub use surfaces::{
    crossing_curvature, potential_surfaces, stability_check, StabilityReport, SurfacePoint, STABILITY_THRESHOLD,
};
pub use validity::{adiabatic_validity, occupation, zeeman_ratio, Occupation, ValidityPoint, VALIDITY_THRESHOLD};
