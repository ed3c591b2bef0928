//! WebAssembly bindings for the browser demo.
//!
//! Each export returns a flat `Float64Array` of row-major tuples. The plain
//! Rust functions behind them are usable (and tested) natively.

use std::f64::consts::PI;

use gyrospin_core::analytics::{interference_probability, potential_surfaces};
use gyrospin_core::model::{derive_scales, DerivedScales, Environment, FieldConfig, ParticleGeometry, TrapConfig};
use gyrospin_core::protocol::alignment_sweep;
use wasm_bindgen::prelude::*;

fn scales(l3_nm: f64, aspect: f64, b_mt: f64, rotation_hz: f64, env: &Environment) -> Result<DerivedScales, String> {
    let geom = ParticleGeometry::prolate(l3_nm * 1e-9, aspect);
    let fields = FieldConfig::new(b_mt * 1e-3, 2.0 * PI * rotation_hz);
    derive_scales(&geom, &TrapConfig::default(), &fields, env).map_err(|e| e.to_string())
}

fn check_points(points: usize) -> Result<(), String> {
    if (2..=100_000).contains(&points) {
        Ok(())
    } else {
        Err(format!("points must lie in 2..=100000, got {points}"))
    }
}

/// (γ, Ω₊, Ω₋) triples over γ ∈ [0, π], frequencies in rad/s.
pub fn surfaces_table(l3_nm: f64, aspect: f64, b_mt: f64, rotation_hz: f64, points: usize) -> Result<Vec<f64>, String> {
    check_points(points)?;
    let s = scales(l3_nm, aspect, b_mt, rotation_hz, &Environment::default())?;
    let mut out = Vec::with_capacity(3 * points);
    for k in 0..points {
        let gamma = PI * k as f64 / (points - 1) as f64;
        let p = potential_surfaces(s.delta, s.g, gamma);
        out.extend([gamma, p.omega_plus, p.omega_minus]);
    }
    Ok(out)
}

/// (B [mT], ⟨cos γ⟩, variance) triples at one temperature.
#[allow(clippy::too_many_arguments)]
pub fn alignment_table(
    l3_nm: f64,
    aspect: f64,
    rotation_hz: f64,
    temperature_k: f64,
    m: i32,
    b_min_mt: f64,
    b_max_mt: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    check_points(points)?;
    let geom = ParticleGeometry::prolate(l3_nm * 1e-9, aspect);
    let fields = FieldConfig::new(0.0, 2.0 * PI * rotation_hz);
    let bs: Vec<f64> = (0..points)
        .map(|k| (b_min_mt + (b_max_mt - b_min_mt) * k as f64 / (points - 1) as f64) * 1e-3)
        .collect();
    let table = alignment_sweep(&geom, &TrapConfig::default(), &fields, &bs, &[temperature_k], m).map_err(|e| e.to_string())?;
    Ok(table.rows.iter().flat_map(|r| [r[0], r[2], r[3]]).collect())
}

/// (τ [s], P_up) pairs over τ ∈ [0, 2π/ω_γ] from the closed form.
pub fn interference_table(
    l3_nm: f64,
    aspect: f64,
    b_mt: f64,
    rotation_hz: f64,
    t2_us: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    check_points(points)?;
    let t2 = if t2_us > 0.0 { t2_us * 1e-6 } else { f64::INFINITY };
    let env = Environment { t2, ..Environment::default() };
    let s = scales(l3_nm, aspect, b_mt, rotation_hz, &env)?;
    let wg = s.require_omega_gamma().map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(2 * points);
    for k in 0..points {
        let tau = 2.0 * PI / wg * k as f64 / (points - 1) as f64;
        let r = interference_probability(&s, tau, t2).map_err(|e| e.to_string())?;
        out.extend([tau, r.p_up]);
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn surfaces(l3_nm: f64, aspect: f64, b_mt: f64, rotation_hz: f64, points: usize) -> Result<Vec<f64>, JsError> {
    surfaces_table(l3_nm, aspect, b_mt, rotation_hz, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = alignmentCurve)]
#[allow(clippy::too_many_arguments)]
pub fn alignment_curve(
    l3_nm: f64,
    aspect: f64,
    rotation_hz: f64,
    temperature_k: f64,
    m: i32,
    b_min_mt: f64,
    b_max_mt: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    alignment_table(l3_nm, aspect, rotation_hz, temperature_k, m, b_min_mt, b_max_mt, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = interferenceCurve)]
pub fn interference_curve(
    l3_nm: f64,
    aspect: f64,
    b_mt: f64,
    rotation_hz: f64,
    t2_us: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    interference_table(l3_nm, aspect, b_mt, rotation_hz, t2_us, points).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surfaces_meet_at_the_poles() {
        let t = surfaces_table(200.0, 0.3, -0.5, 1e6, 11).unwrap();
        assert_eq!(t.len(), 33);
        // γ = 0: Ω± = ±2|g|.
        assert!((t[1] + t[2]).abs() < 1e-6 * t[1].abs());
        // γ = π/2 lies at index 5: the branches are split by 2δ.
        assert!(t[5 * 3 + 1] > t[5 * 3 + 2]);
    }

    #[test]
    fn alignment_crosses_zero_at_compensation() {
        let comp = 1e6 / 28.024e9 * 1e3;
        let t = alignment_table(200.0, 0.3, 1e6, 1e-3, 1, comp - 0.1, comp + 0.1, 3).unwrap();
        assert!(t[4].abs() < 1e-12);
        assert!(t[1] * t[7] < 0.0);
    }

    #[test]
    fn interference_starts_and_rephases_at_unity() {
        let t = interference_table(100.0, 0.2, -102.0, 1e6, 0.0, 5).unwrap();
        assert!((t[1] - 1.0).abs() < 1e-12);
        assert!((t[5] - 1.0).abs() < 1e-9, "{}", t[5]);
        assert!(interference_table(100.0, 0.2, -102.0, 1e6, 0.0, 1).is_err());
    }
}
