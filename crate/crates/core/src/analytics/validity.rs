//! Validity ratios of the adiabatic elimination of the fast libration.

use serde::Serialize;

use crate::constants::{HBAR, K_B};
use crate::error::{check_finite, Result};
use crate::model::{derive_scales, DerivedScales, Environment, FieldConfig, ParticleGeometry, TrapConfig};

/// Both ratios must stay below this for a grid point to count as valid.
pub const VALIDITY_THRESHOLD: f64 = 0.01;

/// Mean thermal occupation model for the γ libration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum Occupation {
    /// 1/(e^{ħω/k_BT} − 1).
    #[default]
    Bose,
    /// k_BT/(ħω).
    Classical,
}

/// Thermal occupation of a mode at angular frequency `omega`.
pub fn occupation(omega: f64, temperature: f64, model: Occupation) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    let x = HBAR * omega / (K_B * temperature);
    match model {
        Occupation::Bose => 1.0 / x.exp_m1(),
        Occupation::Classical => 1.0 / x,
    }
}

/// |ħγ0B/(Iω²)|, the Zeeman-induced shift relative to the spin angular
/// momentum scale.
pub fn zeeman_ratio(scales: &DerivedScales) -> f64 {
    (HBAR * scales.zeeman / (scales.inertia * scales.omega * scales.omega)).abs()
}

/// One (ω, l3) grid point of the validity map.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ValidityPoint {
    pub omega: f64,
    pub l3: f64,
    /// |p_γ/(Iω)| with p_γ = √(ħ n_γ I₃ ω_γ); NaN where ω_γ is undefined.
    pub ratio_p: f64,
    /// |ħγ0B/(Iω²)|.
    pub ratio_b: f64,
    pub valid: bool,
}

fn point(
    geom: &ParticleGeometry,
    trap: &TrapConfig,
    fields: &FieldConfig,
    env: &Environment,
    model: Occupation,
) -> ValidityPoint {
    let (omega, l3) = (fields.omega, geom.l3);
    let Ok(s) = derive_scales(geom, trap, fields, env) else {
        return ValidityPoint { omega, l3, ratio_p: f64::NAN, ratio_b: f64::NAN, valid: false };
    };
    let ratio_b = zeeman_ratio(&s);
    let ratio_p = match s.omega_gamma {
        Some(wg) => {
            let n = occupation(wg, env.temperature, model);
            (HBAR * n * s.inertia_sym * wg).sqrt() / (s.inertia * omega)
        }
        None => f64::NAN,
    };
    let valid = ratio_p < VALIDITY_THRESHOLD && ratio_b < VALIDITY_THRESHOLD;
    ValidityPoint { omega, l3, ratio_p, ratio_b, valid }
}

/// Evaluates the validity ratios on the ω × l3 grid (ω-major order).
///
/// Each particle keeps the aspect ratios l1/l3 and l2/l3 of `geom`. Points
/// where the scales cannot be derived or ω_γ is undefined are marked invalid.
pub fn adiabatic_validity(
    geom: &ParticleGeometry,
    trap: &TrapConfig,
    fields: &FieldConfig,
    env: &Environment,
    omegas: &[f64],
    l3s: &[f64],
    model: Occupation,
) -> Result<Vec<ValidityPoint>> {
    geom.validate()?;
    for &l in l3s {
        check_finite("l3", l, true)?;
    }
    let (a1, a2) = (geom.l1 / geom.l3, geom.l2 / geom.l3);
    let mut out = Vec::with_capacity(omegas.len() * l3s.len());
    for &omega in omegas {
        for &l3 in l3s {
            let g = ParticleGeometry { l1: a1 * l3, l2: a2 * l3, l3, ..*geom };
            let f = FieldConfig { omega, ..*fields };
            out.push(point(&g, trap, &f, env, model));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn bose_and_classical_occupation() {
        let w = K_B * 300.0 / HBAR;
        assert!((occupation(w, 300.0, Occupation::Bose) - 1.0 / (std::f64::consts::E - 1.0)).abs() < 1e-15);
        assert_eq!(occupation(w, 300.0, Occupation::Classical), 1.0);
        assert_eq!(occupation(w, 0.0, Occupation::Bose), 0.0);
    }

    #[test]
    fn app_c_zeeman_ratio() {
        let s = derive_scales(
            &ParticleGeometry::prolate(200e-9, 0.3),
            &TrapConfig::default(),
            &FieldConfig::new(-0.1, 2.0 * PI * 1e6),
            &Environment::default(),
        )
        .unwrap();
        let r = zeeman_ratio(&s);
        assert!((r - 5e-7).abs() < 0.2 * 5e-7, "{r}");
    }

    #[test]
    fn zero_field_and_monotonicity() {
        let geom = ParticleGeometry::prolate(100e-9, 0.2);
        let omegas: Vec<f64> = (1..=6).map(|k| 2.0 * PI * 1e5 * k as f64).collect();
        let env = Environment::default();
        let zero = adiabatic_validity(&geom, &TrapConfig::default(), &FieldConfig::new(0.0, 1.0), &env, &omegas, &[100e-9], Occupation::Bose)
            .unwrap();
        assert!(zero.iter().all(|p| p.ratio_b == 0.0));
        let pts = adiabatic_validity(&geom, &TrapConfig::default(), &FieldConfig::new(-0.1, 1.0), &env, &omegas, &[100e-9], Occupation::Bose)
            .unwrap();
        assert!(pts.windows(2).all(|w| w[1].ratio_b < w[0].ratio_b));
    }
}
