//! Closed-form visibility of the spin-echo rotational interferometer.

use num_complex::Complex64;
use serde::Serialize;

use crate::constants::HBAR;
use crate::error::{check_finite, Error, Result};
use crate::model::DerivedScales;

/// Outcome of the echo sequence at arm duration τ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InterferenceResult {
    pub tau: f64,
    pub lambda: Complex64,
    pub p_up: f64,
    pub p_down: f64,
}

fn regime(scales: &DerivedScales) -> Result<f64> {
    if !(scales.detuning > 0.0) {
        return Err(Error::RegimeViolation(format!(
            "the interferometer formula needs Δ > 0, got Δ = {:e} rad/s",
            scales.detuning
        )));
    }
    if scales.g == 0.0 {
        return Err(Error::RegimeViolation("the interferometer formula needs g ≠ 0".into()));
    }
    scales.require_omega_gamma()
}

/// Squeezing argument ζ = √ħ g τ/√(I_eff Δ).
pub fn zeta(scales: &DerivedScales, tau: f64) -> Result<f64> {
    regime(scales)?;
    check_finite("tau", tau, false)?;
    Ok(HBAR.sqrt() * scales.g * tau / (scales.inertia_eff * scales.detuning).sqrt())
}

fn inverse_lambda(scales: &DerivedScales, tau: f64, coefficient: f64) -> Result<Complex64> {
    let wg = regime(scales)?;
    let z = zeta(scales, tau)?;
    let phase = Complex64::from_polar(1.0, 2.0 * wg * tau);
    Ok(Complex64::new(1.0, 0.0) + (Complex64::new(1.0, 0.0) - phase) * (coefficient * z.sinh().powi(2)))
}

/// λ_τ from 1/λ_τ = 1 + (1 − e^{2iω_γτ}) sinh²ζ.
pub fn lambda_tau(scales: &DerivedScales, tau: f64) -> Result<Complex64> {
    Ok(inverse_lambda(scales, tau, 1.0)?.inv())
}

/// P↑ = 1/2 + e^{−2τ/T₂} √|λ| cos(arg λ/2)/2 and P↓ = 1 − P↑.
///
/// An infinite `t2` disables dephasing.
pub fn interference_probability(scales: &DerivedScales, tau: f64, t2: f64) -> Result<InterferenceResult> {
    if t2.is_nan() || t2 <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "t2",
            reason: format!("must be positive, got {t2}"),
        });
    }
    let lambda = lambda_tau(scales, tau)?;
    let visibility = (-2.0 * tau / t2).exp();
    let half = 0.5 * visibility * lambda.sqrt().re;
    Ok(InterferenceResult {
        tau,
        lambda,
        p_up: 0.5 + half,
        p_down: 0.5 - half,
    })
}

/// (Δ + 4g)²/(8g(Δ + 2g)); tends to 1 as Δ/g → 0.
pub fn app_g_coefficient(g: f64, detuning: f64) -> f64 {
    (detuning + 4.0 * g).powi(2) / (8.0 * g * (detuning + 2.0 * g))
}

/// Ground-state echo signal 2 Re[(1 + c(1 − e^{2iτω_γ}) sinh²ζ)^{−1/2}]
/// with the full coefficient c of [`app_g_coefficient`].
pub fn i_gamma_general(scales: &DerivedScales, tau: f64) -> Result<f64> {
    let c = app_g_coefficient(scales.g, scales.detuning);
    Ok(2.0 * inverse_lambda(scales, tau, c)?.inv().sqrt().re)
}
