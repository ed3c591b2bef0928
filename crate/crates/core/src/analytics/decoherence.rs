//! Decoherence and localization rates of the orientational degree of
//! freedom.

use serde::Serialize;
use std::f64::consts::PI;

use crate::constants::{C, EPSILON_0, HBAR, K_B};
use crate::error::{check_finite, Result};
use crate::model::ParticleGeometry;
use crate::model::Environment;

/// Rates in 1/s; the localization entries refer to two orientations
/// γ_ref and γ_ref + γ_sep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DecoherenceReport {
    /// (γ0 A_fl)².
    pub gamma_b: f64,
    /// Gas-collision rate.
    pub gamma_coll: f64,
    /// Black-body photon emission rate.
    pub gamma_ph: f64,
    /// Γ_ph (1 − cos(γ − γ′)).
    pub f_bb: f64,
    /// Γ_B (cos γ − cos γ′)²/2.
    pub f_mag: f64,
}

/// Rates for the given particle, environment and NV gyromagnetic ratio.
pub fn decoherence_report(
    geom: &ParticleGeometry,
    env: &Environment,
    gamma0: f64,
    gamma_ref: f64,
    gamma_sep: f64,
) -> Result<DecoherenceReport> {
    geom.validate()?;
    env.validate()?;
    check_finite("gamma0", gamma0, false)?;
    check_finite("gamma_ref", gamma_ref, false)?;
    check_finite("gamma_sep", gamma_sep, false)?;
    let gamma_b = (gamma0 * env.field_noise).powi(2);
    let thermal = env.gas_mass * K_B * env.temperature;
    let gamma_coll = if thermal > 0.0 {
        geom.l1 * (geom.l1 + geom.l3) * env.gas_pressure * (2.0 * PI / thermal).sqrt()
    } else {
        0.0
    };
    let kt = K_B * env.temperature;
    let gamma_ph =
        2.0 * PI * PI * env.polarizability_im * kt.powi(4) / (45.0 * C.powi(3) * HBAR.powi(4) * EPSILON_0);
    let other = gamma_ref + gamma_sep;
    Ok(DecoherenceReport {
        gamma_b,
        gamma_coll,
        gamma_ph,
        f_bb: gamma_ph * (1.0 - gamma_sep.cos()),
        f_mag: gamma_b * (gamma_ref.cos() - other.cos()).powi(2) / 2.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::GAMMA_NV;
    use std::f64::consts::FRAC_PI_2;

    fn report(env: &Environment, sep: f64) -> DecoherenceReport {
        decoherence_report(&ParticleGeometry::prolate(200e-9, 0.3), env, GAMMA_NV, FRAC_PI_2, sep).unwrap()
    }

    #[test]
    fn reference_rates() {
        let r = report(&Environment::default(), 1e-3);
        assert!((r.gamma_coll - 2.8e3).abs() < 0.05 * 2.8e3, "{}", r.gamma_coll);
        let ph = r.gamma_ph / (2.0 * PI);
        assert!((ph - 7.2e6).abs() < 0.05 * 7.2e6, "{ph}");
        assert!(r.f_bb / (2.0 * PI) <= 30.0);
    }

    #[test]
    fn localization_vanishes_without_separation() {
        let r = report(&Environment::default(), 0.0);
        assert_eq!(r.f_bb, 0.0);
        assert_eq!(r.f_mag, 0.0);
    }

    #[test]
    fn scaling_laws() {
        let base = Environment::default();
        let a = report(&base, 1e-3);
        let b = report(&Environment { gas_pressure: 3.0 * base.gas_pressure, temperature: 2.0 * base.temperature, ..base }, 1e-3);
        let c = report(&Environment { gas_pressure: 3.0 * base.gas_pressure, ..base }, 1e-3);
        assert!((c.gamma_coll / a.gamma_coll - 3.0).abs() < 1e-12);
        assert!((b.gamma_ph / a.gamma_ph - 16.0).abs() < 1e-12);
    }
}
