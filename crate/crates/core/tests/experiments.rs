//! End-to-end runs of the numerical experiments at the reference operating
//! points.

use gyrospin_core::analytics::{adiabatic_validity, Occupation};
use gyrospin_core::model::{derive_scales, DerivedScales, Environment, FieldConfig, ParticleGeometry, TrapConfig};
use gyrospin_core::protocol::{
    interferometer_sweep, model_crosscheck, simulate_stabilization, CrosscheckSettings,
    InterferometerSettings, ModelPair, StabilizationSettings,
};
use std::f64::consts::PI;

fn scales(l3: f64, aspect: f64, b: f64, hz: f64) -> DerivedScales {
    derive_scales(
        &ParticleGeometry::prolate(l3, aspect),
        &TrapConfig::default(),
        &FieldConfig::new(b, 2.0 * PI * hz),
        &Environment::default(),
    )
    .unwrap()
}

#[test]
fn stabilization_contrast_and_field_ordering() {
    let s = scales(200e-9, 0.3, -0.5e-3, 1e6);
    let trapped = simulate_stabilization(&s, &StabilizationSettings { spin: 1, ..Default::default() }).unwrap();
    let escaping = simulate_stabilization(&s, &StabilizationSettings { spin: -1, ..Default::default() }).unwrap();
    assert!(trapped.max_transition < 0.1, "{}", trapped.max_transition);
    assert!(escaping.final_transition > 0.5, "{}", escaping.final_transition);

    let finals: Vec<f64> = [-0.5e-3, -0.3e-3, -0.1e-3]
        .iter()
        .map(|&b| {
            let s = scales(200e-9, 0.3, b, 1e6);
            simulate_stabilization(&s, &StabilizationSettings::default()).unwrap().final_transition
        })
        .collect();
    assert!(finals[0] < finals[1] && finals[1] < finals[2], "{finals:?}");
}

#[test]
fn hierarchy_crosschecks_agree() {
    let a1 = scales(200e-9, 0.4, -0.102, 1e5);
    let settings = CrosscheckSettings::default();
    for pair in [ModelPair::RotVsEff, ModelPair::EffVsDisp] {
        let r = model_crosscheck(&a1, pair, &settings).unwrap();
        assert!(r.max_deviation < 0.05, "{pair:?}: {}", r.max_deviation);
    }
    let c2 = scales(100e-9, 0.2, -0.100, 1e6);
    let r = model_crosscheck(&c2, ModelPair::ZeemanOnOff, &settings).unwrap();
    assert!(r.max_deviation < 0.05, "{}", r.max_deviation);
    let d = scales(200e-9, 0.4, -0.055, 1e5);
    let r = model_crosscheck(&d, ModelPair::EffVsMisaligned { epsilon: 0.01 }, &settings).unwrap();
    assert!(r.max_deviation < 0.05, "{}", r.max_deviation);
}

#[test]
fn interferometer_matches_closed_form() {
    let s = scales(100e-9, 0.2, -0.102, 1e6);
    let wg = s.omega_gamma.unwrap();
    let taus: Vec<f64> = (0..32).map(|k| PI / wg * k as f64 / 31.0).collect();
    for dim in [40, 60] {
        let pts = interferometer_sweep(&s, &taus, &InterferometerSettings { fock_dim: dim, ..Default::default() }).unwrap();
        let worst = pts
            .iter()
            .filter(|p| p.zeta <= 1.0)
            .map(|p| (p.p_up_numeric - p.p_up_analytic).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-3, "dim {dim}: {worst}");
    }
    // Full rephasing at τ = π/ω_γ.
    let r = gyrospin_core::analytics::interference_probability(&s, PI / wg, f64::INFINITY).unwrap();
    assert!((r.lambda.norm() - 1.0).abs() < 1e-12 && (r.p_up - 1.0).abs() < 1e-12);
}

#[test]
fn recurrence_increases_with_spin_rate() {
    let t2 = 10e-6;
    let p: Vec<f64> = [1e6, 50e6, 100e6]
        .iter()
        .map(|&hz| {
            let s = scales(100e-9, 0.2, -0.095, hz);
            let wg = s.omega_gamma.unwrap();
            gyrospin_core::analytics::interference_probability(&s, PI / wg, t2).unwrap().p_up
        })
        .collect();
    assert!(p[0] < p[1] && p[1] < p[2], "{p:?}");
}

#[test]
fn validity_region_is_monotone() {
    let omegas: Vec<f64> = (0..8).map(|k| 2.0 * PI * 1e5 * 2f64.powi(k)).collect();
    let l3s: Vec<f64> = (0..8).map(|k| 20e-9 * 1.6f64.powi(k)).collect();
    let pts = adiabatic_validity(
        &ParticleGeometry::prolate(100e-9, 0.2),
        &TrapConfig::default(),
        &FieldConfig::new(-0.1, 1.0),
        &Environment::default(),
        &omegas,
        &l3s,
        Occupation::Bose,
    )
    .unwrap();
    let at = |i: usize, j: usize| pts[i * l3s.len() + j].valid;
    let mut admitted = 0;
    for i in 0..omegas.len() {
        for j in 0..l3s.len() {
            if at(i, j) {
                admitted += 1;
                if i + 1 < omegas.len() {
                    assert!(at(i + 1, j), "ω index {i}, l3 index {j}");
                }
                if j + 1 < l3s.len() {
                    assert!(at(i, j + 1), "ω index {i}, l3 index {j}");
                }
            }
        }
    }
    assert!(admitted > 0 && admitted < pts.len(), "{admitted} of {}", pts.len());
}
