//! Trapping of a spin superposition at the avoided crossing γ = π/2 of the
//! magnetic two-level model.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use super::series::{Column, Trajectory};
use crate::constants::HBAR;
use crate::error::{check_finite, invalid, Error, Result};
use crate::model::DerivedScales;
use crate::quantum::split::{RotorSplitStep, SpinPotential};

/// Numerical settings; `None` fields fall back to the scales.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StabilizationSettings {
    /// Rotor cutoff L.
    pub cutoff: usize,
    /// Packet width [rad]; defaults to σ_γ.
    pub packet_width: Option<f64>,
    /// Initial σx eigenvalue, +1 or −1.
    pub spin: i32,
    /// Duration [s]; defaults to ten periods 2π/ω_η.
    pub t_max: Option<f64>,
    /// Split steps per reference period.
    pub steps_per_period: usize,
    /// Number of output samples after t = 0.
    pub samples: usize,
    /// Absorbing fraction of the momentum range.
    pub absorber: f64,
}

impl Default for StabilizationSettings {
    fn default() -> Self {
        Self {
            cutoff: 12_000,
            packet_width: None,
            spin: 1,
            t_max: None,
            steps_per_period: 200,
            samples: 100,
            absorber: 0.1,
        }
    }
}

/// Output of [`simulate_stabilization`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilizationRun {
    pub trajectory: Trajectory,
    /// Transition probability at the final time.
    pub final_transition: f64,
    /// Largest transition probability over the run.
    pub max_transition: f64,
    /// Weight absorbed at the momentum cutoff (counted as transitioned).
    pub escaped_weight: f64,
    pub omega_eta: Option<f64>,
    pub omega_gamma: Option<f64>,
    pub dt: f64,
    pub steps: usize,
}

/// Gaussian packet of width σ at γ = π/2: c_m ∝ exp(−σ²m²) e^{imπ/2}.
fn packet(cutoff: usize, width: f64, spin: i32) -> Vec<Complex64> {
    let l = cutoff as i64;
    let mut block: Vec<Complex64> = (-l..=l)
        .map(|m| {
            let mf = m as f64;
            Complex64::from_polar((-(width * mf).powi(2)).exp(), mf * FRAC_PI_2)
        })
        .collect();
    let norm = block.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    for c in &mut block {
        *c /= norm;
    }
    let sign = spin as f64;
    let mut out: Vec<Complex64> = block.iter().map(|c| c * FRAC_1_SQRT_2).collect();
    out.extend(block.iter().map(|c| c * (sign * FRAC_1_SQRT_2)));
    out
}

/// Evolves a packet centred at γ = π/2 in the spin state |σx = ±1⟩ under
/// the magnetic two-level model and records the probability of leaving
/// that spin state.
pub fn simulate_stabilization(scales: &DerivedScales, settings: &StabilizationSettings) -> Result<StabilizationRun> {
    if settings.spin != 1 && settings.spin != -1 {
        return Err(invalid("spin", format!("σx eigenvalue must be ±1, got {}", settings.spin)));
    }
    if settings.steps_per_period == 0 || settings.samples == 0 {
        return Err(invalid("steps_per_period", "step and sample counts must be positive"));
    }
    let width = match settings.packet_width {
        Some(w) => check_finite("packet_width", w, true)?,
        None => scales.require_sigma_gamma()?,
    };
    let t_max = match (settings.t_max, scales.omega_eta) {
        (Some(t), _) => check_finite("t_max", t, true)?,
        (None, Some(w)) => 10.0 * 2.0 * PI / w,
        (None, None) => {
            return Err(Error::Undefined {
                quantity: "t_max",
                reason: "ω_η is undefined at g = 0; give the duration explicitly".into(),
            })
        }
    };
    let period = scales.omega_eta.map_or(t_max / 10.0, |w| 2.0 * PI / w);
    let raw_steps = (t_max / period * settings.steps_per_period as f64).ceil() as usize;
    let per_sample = raw_steps.div_ceil(settings.samples).max(1);
    let steps = per_sample * settings.samples;
    let dt = t_max / steps as f64;

    let ie = scales.inertia_eff;
    let (delta, g) = (scales.delta, scales.g);
    let mut prop = RotorSplitStep::new(
        settings.cutoff,
        dt,
        |m| HBAR * m * m / (2.0 * ie),
        |gamma| {
            let s2 = gamma.sin().powi(2);
            SpinPotential { a: delta / 2.0 * s2, bx: delta / 2.0 * s2, by: 0.0, bz: g * gamma.cos() }
        },
        settings.absorber,
    )?;
    let mut state = prop.to_grid(&packet(settings.cutoff, width, settings.spin))?;
    let chi = [
        Complex64::new(FRAC_1_SQRT_2, 0.0),
        Complex64::new(settings.spin as f64 * FRAC_1_SQRT_2, 0.0),
    ];
    let mut times = Vec::with_capacity(settings.samples + 1);
    let (mut trans, mut escaped, mut mean_gamma) = (Vec::new(), Vec::new(), Vec::new());
    let mut record = |prop: &RotorSplitStep, state: &_, t: f64| {
        let kept = prop.norm_sqr(state);
        times.push(t);
        trans.push((1.0 - prop.spin_projection(state, chi)).clamp(0.0, 1.0));
        escaped.push(prop.escaped_weight());
        mean_gamma.push(if kept > 0.0 { prop.angle_expectation(state, |x| x) / kept } else { f64::NAN });
    };
    record(&prop, &state, 0.0);
    for k in 1..=settings.samples {
        for _ in 0..per_sample {
            prop.step(&mut state);
        }
        record(&prop, &state, (k * per_sample) as f64 * dt);
    }
    let scaled = |w: Option<f64>| times.iter().map(|t| w.map_or(f64::NAN, |w| w * t)).collect::<Vec<_>>();
    let mut trajectory = Trajectory::new(times.clone());
    trajectory.add(Column::new("omega_eta_t", "rad"), scaled(scales.omega_eta))?;
    trajectory.add(Column::new("omega_gamma_t", "rad"), scaled(scales.omega_gamma))?;
    trajectory.add(Column::new("p_transition", "1"), trans.clone())?;
    trajectory.add(Column::new("escaped_weight", "1"), escaped)?;
    trajectory.add(Column::new("mean_gamma", "rad"), mean_gamma)?;
    Ok(StabilizationRun {
        final_transition: *trans.last().expect("at least one sample"),
        max_transition: trans.iter().copied().fold(0.0, f64::max),
        escaped_weight: prop.escaped_weight(),
        omega_eta: scales.omega_eta,
        omega_gamma: scales.omega_gamma,
        dt,
        steps,
        trajectory,
    })
}
