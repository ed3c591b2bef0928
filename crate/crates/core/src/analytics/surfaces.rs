//! Spin-dependent potential surfaces of the magnetic two-level model and
//! the stability of the avoided crossing at γ = π/2.

use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::model::DerivedScales;

/// Eigenfrequencies of the fixed-γ spin block; energies are ħΩ±/2.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SurfacePoint {
    pub gamma: f64,
    pub omega_plus: f64,
    pub omega_minus: f64,
}

/// Ω± = δ sin²γ ± √(δ² sin⁴γ + 4g² cos²γ).
pub fn potential_surfaces(delta: f64, g: f64, gamma: f64) -> SurfacePoint {
    let s2 = gamma.sin().powi(2);
    let c = gamma.cos();
    let a = delta * s2;
    let root = (a * a + 4.0 * g * g * c * c).sqrt();
    SurfacePoint {
        gamma,
        omega_plus: a + root,
        omega_minus: a - root,
    }
}

fn require_nonzero(delta: f64, g: f64) -> Result<()> {
    if delta == 0.0 || g == 0.0 || !delta.is_finite() || !g.is_finite() {
        return Err(Error::Undefined {
            quantity: "crossing_curvature",
            reason: format!("needs finite, non-zero δ and g (δ = {delta:e}, g = {g:e})"),
        });
    }
    Ok(())
}

/// Coefficient of (γ − π/2)² in the upper surface Ω₊/2 at the avoided
/// crossing [rad/s per rad²], i.e. half its second derivative there.
///
/// Evaluated by a Richardson-extrapolated central difference. For δ > 0 the
/// exact value is g²/δ − δ, which tends to g²/δ when δ ≪ |g|.
pub fn crossing_curvature(delta: f64, g: f64) -> Result<f64> {
    require_nonzero(delta, g)?;
    let upper = |x: f64| potential_surfaces(delta, g, FRAC_PI_2 + x).omega_plus / 2.0;
    let f0 = upper(0.0);
    let second = |h: f64| (upper(h) - 2.0 * f0 + upper(-h)) / (h * h);
    let h = 0.02 * (delta / g).abs().min(1.0);
    let d2 = (4.0 * second(h / 2.0) - second(h)) / 3.0;
    Ok(d2 / 2.0)
}

/// Width and small parameters governing the trapped |σx = +1⟩ branch.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StabilityReport {
    /// Ground-state width σ_γ of the trapped packet [rad].
    pub sigma_gamma: f64,
    /// |g σ_γ/δ|; stability requires this to be small.
    pub ratio: f64,
    /// (ħg²/(8 I_eff |δ|³))^{1/4}.
    pub small_param: f64,
    /// `ratio` below [`STABILITY_THRESHOLD`].
    pub stable: bool,
}

/// Largest |gσ_γ/δ| counted as stable.
pub const STABILITY_THRESHOLD: f64 = 0.1;

pub fn stability_check(scales: &DerivedScales) -> Result<StabilityReport> {
    require_nonzero(scales.delta, scales.g)?;
    let sigma_gamma = scales.require_sigma_gamma()?;
    let ratio = (scales.g * sigma_gamma / scales.delta).abs();
    let small_param =
        (HBAR * scales.g * scales.g / (8.0 * scales.inertia_eff * scales.delta.abs().powi(3))).powf(0.25);
    Ok(StabilityReport {
        sigma_gamma,
        ratio,
        small_param,
        stable: ratio < STABILITY_THRESHOLD,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{derive_scales, mag_spin_block, Environment, FieldConfig, ParticleGeometry, TrapConfig};
    use crate::quantum::hermitian_eig;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn special_angles() {
        let p = potential_surfaces(0.3, -2.0, 0.0);
        assert_eq!((p.omega_plus, p.omega_minus), (4.0, -4.0));
        let q = potential_surfaces(0.3, 2.0, FRAC_PI_2);
        assert!((q.omega_plus - 0.6).abs() < 1e-15 && q.omega_minus.abs() < 1e-15);
        let r = potential_surfaces(1.0, 1.0, PI / 4.0);
        assert!((r.omega_plus - 2.0).abs() < 1e-15 && (r.omega_minus + 1.0).abs() < 1e-15);
    }

    #[test]
    fn curvature_limit() {
        for &(d, g) in &[(1e-3, 1.0), (0.05, 2.0), (-0.01, 1.0), (2.0, 1.0)] {
            let c = crossing_curvature(d, g).unwrap();
            // For δ < 0 the upper surface touches zero at π/2 instead of 2δ.
            let exact = if d > 0.0 { g * g / d - d } else { g * g / d.abs() };
            assert!(((c - exact) / exact).abs() < 1e-6, "{c} vs {exact}");
            if d > 0.0 && d / g < 0.1 {
                let lead = g * g / d;
                assert!((c / lead - 1.0).abs() <= 2.0 * (d / g).powi(2));
            }
        }
        assert!(crossing_curvature(0.0, 1.0).is_err());
        assert!(crossing_curvature(1.0, 0.0).is_err());
    }

    fn scales(b: f64) -> DerivedScales {
        derive_scales(
            &ParticleGeometry::prolate(200e-9, 0.3),
            &TrapConfig::default(),
            &FieldConfig::new(b, 2.0 * PI * 1e6),
            &Environment::default(),
        )
        .unwrap()
    }

    #[test]
    fn small_parameter_at_minus_100_mt() {
        let r = stability_check(&scales(-0.1)).unwrap();
        assert!((r.small_param - 5e-4).abs() < 0.2 * 5e-4, "{}", r.small_param);
        let comp = scales(2.0 * PI * 1e6 / crate::constants::GAMMA_NV);
        assert!(matches!(stability_check(&comp), Err(Error::Undefined { .. })));
    }

    #[test]
    fn fig2_operating_point_is_stable() {
        let r = stability_check(&scales(-0.5e-3)).unwrap();
        assert!(r.stable, "{r:?}");
    }

    proptest! {
        #[test]
        fn ordered_periodic_even(delta in -5.0f64..5.0, g in -5.0f64..5.0, gamma in -10.0f64..10.0) {
            let p = potential_surfaces(delta, g, gamma);
            prop_assert!(p.omega_plus >= p.omega_minus);
            let q = potential_surfaces(delta, g, gamma + 2.0 * PI);
            let r = potential_surfaces(delta, g, 2.0 * PI - gamma);
            let tol = 1e-12 * (delta.abs() + g.abs() + 1.0);
            prop_assert!((p.omega_plus - q.omega_plus).abs() < tol);
            prop_assert!((p.omega_plus - r.omega_plus).abs() < tol);
            prop_assert!((p.omega_minus - r.omega_minus).abs() < tol);
        }

        #[test]
        fn matches_spin_block_diagonalization(gamma in 0.0f64..(2.0 * PI)) {
            let (delta, g) = (2.0 * PI * 3.1e2, 2.0 * PI * 2.9e6);
            let e = hermitian_eig(&mag_spin_block(delta, g, gamma)).unwrap();
            let p = potential_surfaces(delta, g, gamma);
            let scale = HBAR * g.abs();
            prop_assert!((e.values[1] - HBAR * p.omega_plus / 2.0).abs() <= 1e-12 * scale);
            prop_assert!((e.values[0] - HBAR * p.omega_minus / 2.0).abs() <= 1e-12 * scale);
        }
    }
}
