//! Bounds for NV-axis misalignment, shape asymmetry and the Doppler drift of
//! the rotation rate in an asymmetric trap.

use serde::Serialize;
use std::f64::consts::PI;

use crate::constants::HBAR;
use crate::error::{check_finite, invalid, Error, Result};
use crate::model::DerivedScales;

/// θ = arctan(√2 ε D/|Δ|)/2.
pub fn misalignment_angle(epsilon: f64, d_nv: f64, detuning: f64) -> Result<f64> {
    check_finite("epsilon", epsilon, false)?;
    if detuning == 0.0 || !detuning.is_finite() {
        return Err(Error::Undefined {
            quantity: "misalignment_angle",
            reason: "needs finite Δ ≠ 0".into(),
        });
    }
    Ok((2f64.sqrt() * epsilon * d_nv / detuning.abs()).atan() / 2.0)
}

/// ħ(ω − γ0B)/(I₁ω²): the asymmetry δ_I must stay well below this for the
/// Barnett alignment to survive.
pub fn asymmetry_bound(scales: &DerivedScales) -> Result<f64> {
    if scales.omega == 0.0 {
        return Err(invalid("omega", "the asymmetry bound divides by ω²"));
    }
    Ok(HBAR * scales.g / (scales.inertia * scales.omega * scales.omega))
}

/// Time average of the first-order torque on the rotation angle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DriftAverage {
    /// Mean of ṗ_α over the window [kg m²/s²].
    pub mean: f64,
    /// Peak instantaneous magnitude bound prefactor·(ε² + 3|εξ|).
    pub amplitude: f64,
}

const NODES_PER_REVOLUTION: usize = 64;

/// Averages ṗ_α = −(U²(Q − Q₃)²/(18ω_ac²d0⁴I))[ε² sin 4α − 3εξ sin 2α]
/// with α = ωt over `revolutions` full turns.
pub fn doppler_drift_average(
    scales: &DerivedScales,
    trap_asymmetry: f64,
    xi: f64,
    revolutions: usize,
) -> Result<DriftAverage> {
    check_finite("trap_asymmetry", trap_asymmetry, false)?;
    check_finite("xi", xi, false)?;
    if revolutions == 0 {
        return Err(invalid("revolutions", "must be at least 1"));
    }
    if scales.omega == 0.0 {
        return Err(invalid("omega", "a non-rotating particle has no revolution period"));
    }
    let prefactor = scales.beta_potential * 16.0 / 18.0;
    let eps = trap_asymmetry;
    let torque = |t: f64| {
        let a = scales.omega * t;
        -prefactor * (eps * eps * (4.0 * a).sin() - 3.0 * eps * xi * (2.0 * a).sin())
    };
    // The trapezoidal rule is exact for trigonometric polynomials of degree
    // below the node count over whole periods.
    let period = 2.0 * PI / scales.omega.abs();
    let n = NODES_PER_REVOLUTION * revolutions;
    let dt = period * revolutions as f64 / n as f64;
    let mean = (0..n).map(|k| torque(k as f64 * dt)).sum::<f64>() / n as f64;
    Ok(DriftAverage {
        mean,
        amplitude: prefactor * (eps * eps + 3.0 * (eps * xi).abs()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{derive_scales, Environment, FieldConfig, ParticleGeometry, TrapConfig};

    fn scales() -> DerivedScales {
        derive_scales(
            &ParticleGeometry::prolate(200e-9, 0.3),
            &TrapConfig::default(),
            &FieldConfig::new(-0.1, 2.0 * PI * 1e6),
            &Environment::default(),
        )
        .unwrap()
    }

    #[test]
    fn misalignment_limits() {
        assert_eq!(misalignment_angle(0.0, 1.0, 0.3).unwrap(), 0.0);
        let (eps, d, det) = (1e-2, 2.0 * PI * 2.87e9, 2.0 * PI * 2.0e9);
        let small = eps * d / (2f64.sqrt() * det);
        let theta = misalignment_angle(eps, d, det).unwrap();
        assert!((theta - small).abs() < 1e-3 * small);
        assert!(misalignment_angle(eps, d, 0.0).is_err());
    }

    #[test]
    fn asymmetry_bound_value() {
        let s = scales();
        let b = asymmetry_bound(&s).unwrap();
        assert!((b - HBAR * s.g / (s.inertia * s.omega.powi(2))).abs() < 1e-30);
        assert!(b > 0.0 && b < 1e-5);
    }

    #[test]
    fn drift_averages_out() {
        let s = scales();
        for revs in [1, 3, 10] {
            let d = doppler_drift_average(&s, 0.05, 0.01, revs).unwrap();
            assert!(d.amplitude > 0.0);
            assert!(d.mean.abs() <= 1e-10 * d.amplitude, "{d:?}");
        }
        assert!(doppler_drift_average(&s, 0.05, 0.01, 0).is_err());
    }
}
