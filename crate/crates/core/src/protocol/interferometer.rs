//! Spin-echo rotational interferometer in the dispersive regime.
//!
//! The γ libration is represented in a Fock basis of the |↑⟩ oscillator.
//! Between pulses each spin component evolves under its own quadratic
//! Hamiltonian; the thermal initial state is sampled as an ensemble of
//! |↑⟩-oscillator eigenstates.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use super::pulses::PulseSequence;
use super::series::{Column, SweepTable, Trajectory};
use crate::analytics::{interference_probability, zeta};
use crate::constants::{HBAR, K_B};
use crate::error::{check_finite, Error, Result};
use crate::model::{derive_scales, DerivedScales, Environment, FieldConfig, ParticleGeometry, TrapConfig};
use crate::quantum::eigen::real_symmetric_eig;
use crate::quantum::evolve::EDGE_LIMIT;
use crate::quantum::ops::quadrature_squared;
use crate::quantum::OperatorMatrix;

/// Numerical settings of the interferometer run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InterferometerSettings {
    pub fock_dim: usize,
    /// Oscillator temperature [K]; 0 selects the ground state.
    pub temperature: f64,
    /// Spin dephasing time [s]; infinity disables the visibility factor.
    pub t2: f64,
    /// Equatorial phase of the pulse axis [rad].
    pub axis_phase: f64,
    /// Trajectory samples per interferometer arm.
    pub samples_per_arm: usize,
}

impl Default for InterferometerSettings {
    fn default() -> Self {
        Self { fock_dim: 60, temperature: 0.0, t2: f64::INFINITY, axis_phase: 0.0, samples_per_arm: 32 }
    }
}

/// Result of one echo sequence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InterferometerRun {
    pub tau: f64,
    pub zeta: f64,
    pub p_up_numeric: f64,
    pub p_up_analytic: f64,
    pub max_edge_weight: f64,
    pub trajectory: Trajectory,
    pub warnings: Vec<String>,
}

/// One delay of [`interferometer_sweep`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepPoint {
    pub tau: f64,
    pub zeta: f64,
    pub p_up_numeric: f64,
    pub p_up_analytic: f64,
    /// Weight in the top two Fock levels at the end of the sequence; above
    /// the truncation limit the numeric value is unreliable.
    pub edge_weight: f64,
}

/// Thermal population below which ensemble members are dropped.
const WEIGHT_FLOOR: f64 = 1e-14;

/// Spectral data of the two spin-conditioned oscillators.
struct Echo {
    d: usize,
    up: (DVector<f64>, DMatrix<f64>),
    down: (DVector<f64>, DMatrix<f64>),
    gamma2: DMatrix<f64>,
    ensemble: Vec<(f64, DVector<Complex64>)>,
}

impl Echo {
    fn new(scales: &DerivedScales, settings: &InterferometerSettings) -> Result<Self> {
        let d = settings.fock_dim;
        if d < 4 {
            return Err(Error::InvalidBasis(format!("fock_dim must be at least 4, got {d}")));
        }
        check_finite("temperature", settings.temperature, false)?;
        if settings.temperature < 0.0 {
            return Err(Error::InvalidParameter { name: "temperature", reason: "must be non-negative".into() });
        }
        let wg = scales.require_omega_gamma()?;
        let w = scales.gamma_zero_point()?;
        let ie = scales.inertia_eff;
        let g2 = quadrature_squared(d, 1.0).to_dense().as_matrix().map(|z| z.re) * (w * w);
        let p2 = quadrature_squared(d, -1.0).to_dense().as_matrix().map(|z| z.re) * (HBAR / (2.0 * w)).powi(2);
        let h_up = &p2 / (2.0 * ie) + &g2 * (ie * wg * wg / 2.0);
        let shift = HBAR * scales.g / 4.0 * (1.0 + 4.0 * scales.g / scales.detuning);
        let h_down = &h_up - &g2 * shift;
        let up = real_symmetric_eig(&h_up)?;
        let down = real_symmetric_eig(&h_down)?;
        let e0 = up.0[0];
        let weights: Vec<f64> = if settings.temperature == 0.0 {
            (0..d).map(|k| if k == 0 { 1.0 } else { 0.0 }).collect()
        } else {
            up.0.iter().map(|e| (-(e - e0) / (K_B * settings.temperature)).exp()).collect()
        };
        let z: f64 = weights.iter().sum();
        let ensemble = weights
            .iter()
            .enumerate()
            .filter(|(_, &p)| p / z > WEIGHT_FLOOR)
            .map(|(k, &p)| (p / z, up.1.column(k).map(|x| Complex64::new(x, 0.0))))
            .collect();
        Ok(Self { d, up, down, gamma2: g2, ensemble })
    }

    fn evolve_block(spec: &(DVector<f64>, DMatrix<f64>), psi: &DVector<Complex64>, t: f64) -> DVector<Complex64> {
        let (vals, vecs) = spec;
        let mut coeff = vecs.transpose().map(|x| Complex64::new(x, 0.0)) * psi;
        for (c, e) in coeff.iter_mut().zip(vals.iter()) {
            *c *= Complex64::from_polar(1.0, -e * t / HBAR);
        }
        vecs.map(|x| Complex64::new(x, 0.0)) * coeff
    }

    fn evolve(&self, state: &mut (DVector<Complex64>, DVector<Complex64>), t: f64) {
        if t > 0.0 {
            state.0 = Self::evolve_block(&self.up, &state.0, t);
            state.1 = Self::evolve_block(&self.down, &state.1, t);
        }
    }

    fn pulse(u: &OperatorMatrix, state: &mut (DVector<Complex64>, DVector<Complex64>)) {
        let (a, b) = (&state.0, &state.1);
        let na = a * u.get(0, 0) + b * u.get(0, 1);
        let nb = a * u.get(1, 0) + b * u.get(1, 1);
        *state = (na, nb);
    }

    fn edge(&self, state: &(DVector<Complex64>, DVector<Complex64>)) -> f64 {
        (self.d - 2..self.d).map(|k| state.0[k].norm_sqr() + state.1[k].norm_sqr()).sum()
    }

    /// Runs the sequence, sampling observables at `times` (ascending, within
    /// the sequence); returns per-sample (p_up, ⟨γ²⟩, edge) averaged over
    /// the ensemble.
    fn run(&self, seq: &PulseSequence, times: &[f64]) -> Vec<[f64; 3]> {
        let mut out = vec![[0.0; 3]; times.len()];
        for (weight, chi) in &self.ensemble {
            let mut state = (chi.clone(), DVector::zeros(self.d));
            let mut now = 0.0;
            let mut pulses = seq.pulses().iter().peekable();
            for (k, &t) in times.iter().enumerate() {
                while let Some(p) = pulses.peek() {
                    if p.time > t {
                        break;
                    }
                    self.evolve(&mut state, p.time - now);
                    now = p.time;
                    Self::pulse(&p.unitary(), &mut state);
                    pulses.next();
                }
                self.evolve(&mut state, t - now);
                now = t;
                let p_up = state.0.norm_squared();
                let g2 = |v: &DVector<Complex64>| (v.adjoint() * self.gamma2.map(|x| Complex64::new(x, 0.0)) * v)[(0, 0)].re;
                out[k][0] += weight * p_up;
                out[k][1] += weight * (g2(&state.0) + g2(&state.1));
                out[k][2] += weight * self.edge(&state);
            }
        }
        out
    }
}

fn visibility(tau: f64, t2: f64) -> f64 {
    (-2.0 * tau / t2).exp()
}

fn warnings_for(scales: &DerivedScales, z: f64, settings: &InterferometerSettings) -> Result<Vec<String>> {
    let mut w = Vec::new();
    if z > 1.0 {
        w.push(format!("zeta = {z:.3} exceeds 1; numeric and closed-form results may differ beyond 1e-3"));
    }
    let zp = scales.gamma_zero_point()?;
    let n = if settings.temperature > 0.0 {
        let x = HBAR * scales.require_omega_gamma()? / (K_B * settings.temperature);
        1.0 / x.exp_m1()
    } else {
        0.0
    };
    let gamma2 = zp * zp * (2.0 * n + 1.0);
    let disp = 2.0 * scales.g * scales.g * gamma2 / scales.detuning.powi(2);
    if disp > 0.1 {
        w.push(format!("dispersive condition 2g²⟨γ²⟩/Δ² = {disp:.3e} is not small"));
    }
    Ok(w)
}

/// Runs the π/2–π–π/2 echo with arm duration τ and compares the final
/// |↑⟩ population with the closed form.
pub fn run_interferometer(scales: &DerivedScales, tau: f64, settings: &InterferometerSettings) -> Result<InterferometerRun> {
    check_finite("tau", tau, false)?;
    if tau < 0.0 {
        return Err(Error::InvalidParameter { name: "tau", reason: "must be non-negative".into() });
    }
    let analytic = interference_probability(scales, tau, settings.t2)?;
    let z = zeta(scales, tau)?;
    let echo = Echo::new(scales, settings)?;
    let seq = PulseSequence::echo(tau, settings.axis_phase)?;
    let n = settings.samples_per_arm.max(1);
    let times: Vec<f64> = (0..=2 * n).map(|k| 2.0 * tau * k as f64 / (2 * n) as f64).collect();
    let samples = echo.run(&seq, &times);
    let max_edge = samples.iter().map(|s| s[2]).fold(0.0, f64::max);
    if max_edge > EDGE_LIMIT {
        let k = samples.iter().position(|s| s[2] > EDGE_LIMIT).unwrap_or(0);
        return Err(Error::TruncationLoss { time: times[k], weight: max_edge, limit: EDGE_LIMIT });
    }
    let raw = samples.last().map(|s| s[0]).unwrap_or(1.0);
    let p_up_numeric = 0.5 + visibility(tau, settings.t2) * (raw - 0.5);
    let mut trajectory = Trajectory::new(times.clone());
    trajectory.add(Column::new("p_up", "1"), samples.iter().map(|s| s[0]).collect())?;
    trajectory.add(Column::new("p_down", "1"), samples.iter().map(|s| 1.0 - s[0]).collect())?;
    trajectory.add(Column::new("gamma_sq", "rad2"), samples.iter().map(|s| s[1]).collect())?;
    trajectory.add(Column::new("edge_weight", "1"), samples.iter().map(|s| s[2]).collect())?;
    Ok(InterferometerRun {
        tau,
        zeta: z,
        p_up_numeric,
        p_up_analytic: analytic.p_up,
        max_edge_weight: max_edge,
        trajectory,
        warnings: warnings_for(scales, z, settings)?,
    })
}

/// Final |↑⟩ population for each arm duration, sharing one diagonalization.
/// Truncation is reported per point rather than treated as an error.
pub fn interferometer_sweep(scales: &DerivedScales, taus: &[f64], settings: &InterferometerSettings) -> Result<Vec<SweepPoint>> {
    let echo = Echo::new(scales, settings)?;
    taus.iter()
        .map(|&tau| {
            check_finite("tau", tau, false)?;
            let seq = PulseSequence::echo(tau, settings.axis_phase)?;
            let s = echo.run(&seq, &[2.0 * tau])[0];
            Ok(SweepPoint {
                tau,
                zeta: zeta(scales, tau)?,
                p_up_numeric: 0.5 + visibility(tau, settings.t2) * (s[0] - 0.5),
                p_up_analytic: interference_probability(scales, tau, settings.t2)?.p_up,
                edge_weight: s[2],
            })
        })
        .collect()
}

/// Recurrence probability at τ = π/ω_γ and protocol duration 2τ for each
/// field, with the coupling ratio g/D and a flag for T₂ > 2τ.
pub fn recurrence_sweep(
    geom: &ParticleGeometry,
    trap: &TrapConfig,
    fields: &FieldConfig,
    env: &Environment,
    b_values: &[f64],
) -> Result<SweepTable> {
    let mut table = SweepTable::new(vec![
        Column::new("g_over_D", "1"),
        Column::new("B", "mT"),
        Column::new("duration", "s"),
        Column::new("p_recurrence", "1"),
        Column::new("t2_exceeds_duration", "1"),
    ]);
    for &b in b_values {
        let s = derive_scales(geom, trap, &FieldConfig { b, ..*fields }, env)?;
        let (duration, p) = match s.omega_gamma {
            Some(wg) if s.detuning > 0.0 && s.g != 0.0 => {
                let tau = PI / wg;
                (2.0 * tau, interference_probability(&s, tau, env.t2)?.p_up)
            }
            _ => (f64::NAN, f64::NAN),
        };
        let feasible = if env.t2 > duration { 1.0 } else { 0.0 };
        table.push(vec![s.g / s.d_nv, b * 1e3, duration, p, feasible])?;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scales(b: f64, omega_hz: f64) -> DerivedScales {
        derive_scales(
            &ParticleGeometry::prolate(100e-9, 0.2),
            &TrapConfig::default(),
            &FieldConfig::new(b, 2.0 * PI * omega_hz),
            &Environment::default(),
        )
        .unwrap()
    }

    #[test]
    fn zero_delay_returns_up() {
        let s = scales(-0.102, 1e6);
        let r = run_interferometer(&s, 0.0, &InterferometerSettings::default()).unwrap();
        assert!((r.p_up_numeric - 1.0).abs() < 1e-12);
        assert!((r.p_up_analytic - 1.0).abs() < 1e-15);
    }

    #[test]
    fn numeric_matches_closed_form_at_zero_temperature() {
        let s = scales(-0.102, 1e6);
        let wg = s.omega_gamma.unwrap();
        let taus: Vec<f64> = (0..32).map(|k| PI / wg * k as f64 / 31.0).collect();
        let pts = interferometer_sweep(&s, &taus, &InterferometerSettings::default()).unwrap();
        let mut checked = 0;
        for p in pts.iter().filter(|p| p.zeta <= 1.0) {
            assert!(p.edge_weight < EDGE_LIMIT, "{p:?}");
            assert!((p.p_up_numeric - p.p_up_analytic).abs() < 1e-3, "{p:?}");
            checked += 1;
        }
        assert!(checked >= 8, "{checked}");
        let mid = run_interferometer(&s, 0.3 * PI / wg, &InterferometerSettings::default()).unwrap();
        assert!(mid.zeta <= 1.0);
        assert!((mid.p_up_numeric - mid.p_up_analytic).abs() < 1e-3);
    }

    #[test]
    fn populations_sum_to_one_and_thermal_runs() {
        let s = scales(-0.102, 1e6);
        let settings = InterferometerSettings { temperature: 1e-6, samples_per_arm: 4, ..Default::default() };
        let wg = s.omega_gamma.unwrap();
        let r = run_interferometer(&s, 0.2 / wg, &settings).unwrap();
        let up = r.trajectory.get("p_up").unwrap();
        let dn = r.trajectory.get("p_down").unwrap();
        assert!(up.iter().zip(dn).all(|(a, b)| (a + b - 1.0).abs() < 1e-8));
        assert!((0.0..=1.0).contains(&r.p_up_numeric));
    }

    #[test]
    fn truncation_is_reported() {
        let s = scales(-0.102, 1e6);
        let wg = s.omega_gamma.unwrap();
        let settings = InterferometerSettings { fock_dim: 6, ..Default::default() };
        assert!(matches!(
            run_interferometer(&s, 3.0 / wg, &settings),
            Err(Error::TruncationLoss { .. })
        ));
    }
}
