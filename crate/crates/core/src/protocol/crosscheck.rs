//! Paired runs of two members of the Hamiltonian hierarchy from a shared
//! initial state, compared through the γ dynamics of each spin sector.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use super::series::{normalized_deviation, Column, Trajectory};
use crate::error::{check_finite, invalid, Error, Result};
use crate::model::{
    build_h_disp, build_h_eff, build_h_misaligned, build_h_rot, AngleOperators, DerivedScales,
};
use crate::quantum::basis::{AngleSpace, BasisSpec, Factor, SpinSpace};
use crate::quantum::evolve::{propagate, PropagationSettings};
use crate::quantum::ops::fock_operators;
use crate::quantum::state::coherent_state;
use crate::quantum::{SparseOperator, StateVector};

/// Which two models to compare.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelPair {
    /// Full linearized rotor model against the adiabatic effective model.
    RotVsEff,
    /// Adiabatic effective model against the dispersive model.
    EffVsDisp,
    /// Effective model with and without the Zeeman S3 p term.
    ZeemanOnOff,
    /// Effective model against an NV axis tilted by ε.
    EffVsMisaligned { epsilon: f64 },
}

impl ModelPair {
    pub fn labels(&self) -> (&'static str, &'static str) {
        match self {
            ModelPair::RotVsEff => ("h_rot", "h_eff"),
            ModelPair::EffVsDisp => ("h_eff", "h_disp"),
            ModelPair::ZeemanOnOff => ("h_eff_zeeman", "h_eff"),
            ModelPair::EffVsMisaligned { .. } => ("h_eff", "h_misaligned"),
        }
    }
}

/// Initial spin state in the {|↑⟩ = |S1 = −ħ⟩, |↓⟩ = |S1 = 0⟩} doublet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinInit {
    Up,
    Superposition,
}

/// Default edge tolerance for paired runs.
pub const CROSSCHECK_EDGE_LIMIT: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CrosscheckSettings {
    /// Fock dimension of the harmonic γ representation.
    pub angle_dim: usize,
    /// Fock dimension of the ξ libration (full rotor model only).
    pub libration_dim: usize,
    /// Coherent amplitude of the initial γ (and ξ) packet.
    pub alpha: f64,
    /// Duration in periods 2π/ω_γ.
    pub periods: f64,
    pub samples: usize,
    /// Factor applied to δ and g before building either model.
    pub rescale: f64,
    /// Defaults to |↑⟩ for the hierarchy pairs and the superposition for
    /// the Zeeman and misalignment pairs.
    pub spin: Option<SpinInit>,
    /// Tolerated weight in the outermost basis states. The |↓⟩ branch is
    /// inverted near γ = 0 at strong coupling, so its packet spreads in any
    /// finite basis; convergence is judged from the deviation instead.
    pub edge_limit: f64,
}

impl Default for CrosscheckSettings {
    fn default() -> Self {
        Self {
            angle_dim: 16,
            libration_dim: 10,
            alpha: 0.1,
            periods: 2.0,
            samples: 100,
            rescale: 1.0,
            spin: None,
            edge_limit: CROSSCHECK_EDGE_LIMIT,
        }
    }
}

/// Paired trajectories and their normalized deviation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrosscheckRun {
    pub pair: ModelPair,
    pub reference: Trajectory,
    pub candidate: Trajectory,
    /// max|Δ⟨γ⟩↑| / peak-to-peak of the reference ⟨γ⟩↑.
    pub deviation_up: f64,
    /// Same for the |↓⟩ sector when it is populated initially.
    pub deviation_down: Option<f64>,
    pub max_deviation: f64,
}

/// A model ready to propagate, with its sector observables.
struct Prepared {
    h: SparseOperator,
    basis: BasisSpec,
    psi0: StateVector,
    /// (projector, projector·γ_obs) per sector ↑, ↓.
    sectors: [(SparseOperator, SparseOperator); 2],
}

#[derive(Clone, Copy)]
enum Kind {
    Rot,
    Eff { zeeman: bool },
    Misaligned(f64),
    Disp,
}

fn spin_amplitudes(init: SpinInit) -> (f64, f64) {
    match init {
        SpinInit::Up => (1.0, 0.0),
        SpinInit::Superposition => (std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2),
    }
}

fn prepare(kind: Kind, scales: &DerivedScales, settings: &CrosscheckSettings, init: SpinInit) -> Result<Prepared> {
    let width = scales.gamma_zero_point()?;
    let angle = AngleSpace::Harmonic { dim: settings.angle_dim, width };
    let ops = AngleOperators::new(angle)?;
    let gamma = ops.gamma()?.clone();
    let (spin, libration) = match kind {
        Kind::Disp => (SpinSpace::Doublet, None),
        Kind::Rot => (SpinSpace::Triplet, Some(settings.libration_dim)),
        _ => (SpinSpace::Triplet, None),
    };
    let basis = BasisSpec::new(Some(spin), Some(angle), libration)?;
    let h = match kind {
        Kind::Rot => build_h_rot(scales, &basis)?,
        Kind::Eff { zeeman } => build_h_eff(scales, &basis, zeeman)?,
        Kind::Misaligned(eps) => build_h_misaligned(scales, eps, &basis)?,
        Kind::Disp => build_h_disp(scales, &basis)?,
    };
    // |↑⟩ = |S1 = −ħ⟩ and |↓⟩ = |S1 = 0⟩; on the doublet σz = +1 is |↑⟩.
    let (up_idx, down_idx) = match spin {
        SpinSpace::Triplet => (2, 1),
        SpinSpace::Doublet => (0, 1),
    };
    let (a_up, a_down) = spin_amplitudes(init);
    let mut spin_amp = vec![Complex64::new(0.0, 0.0); spin.dim()];
    spin_amp[up_idx] = Complex64::new(a_up, 0.0);
    spin_amp[down_idx] = Complex64::new(a_down, 0.0);
    let mut psi0 = StateVector::from_amplitudes(spin_amp)
        .tensor(&coherent_state(settings.angle_dim, Complex64::new(settings.alpha, 0.0))?);
    let mut gamma_obs = SparseOperator::embed(&gamma, Factor::Angle, &basis)?;
    if let Some(d) = libration {
        psi0 = psi0.tensor(&coherent_state(d, Complex64::new(settings.alpha, 0.0))?);
        // Adiabatic-frame angle γ − p_ξ/(Iω), which removes the fast
        // libration-driven wobble absent from the reduced models.
        let fock = fock_operators(d, scales.inertia, scales.omega_xi)?;
        let shift = SparseOperator::embed(&fock.p, Factor::Libration, &basis)?;
        gamma_obs = gamma_obs.add_scaled(&shift, Complex64::new(-1.0 / (scales.inertia * scales.omega), 0.0))?;
    }
    let projector = |idx: usize| -> Result<SparseOperator> {
        let mut diag = vec![0.0; spin.dim()];
        diag[idx] = 1.0;
        SparseOperator::embed(&SparseOperator::from_real_diagonal(&diag), Factor::Spin, &basis)
    };
    let pu = projector(up_idx)?;
    let pd = projector(down_idx)?;
    let sectors = [(pu.clone(), pu.matmul(&gamma_obs)?), (pd.clone(), pd.matmul(&gamma_obs)?)];
    Ok(Prepared { h, basis, psi0, sectors })
}

fn run(model: &Prepared, times: &[f64], settings: &CrosscheckSettings) -> Result<Trajectory> {
    let n = times.len();
    let mut cols = vec![vec![0.0; n]; 5];
    let prop = PropagationSettings { edge_limit: settings.edge_limit, ..Default::default() };
    let report = propagate(&model.h, &model.basis, &model.psi0, times, &prop, |k, _, psi| {
        for (s, (proj, obs)) in model.sectors.iter().enumerate() {
            let p = psi.expectation_sparse(proj)?.re;
            let g = psi.expectation_sparse(obs)?.re;
            cols[2 * s][k] = p;
            cols[2 * s + 1][k] = if p > 1e-12 { g / p } else { f64::NAN };
        }
        Ok(())
    })?;
    cols[4] = vec![report.max_edge_weight; n];
    let mut tr = Trajectory::new(times.to_vec());
    let names = [("p_up", "1"), ("gamma_up", "rad"), ("p_down", "1"), ("gamma_down", "rad"), ("max_edge_weight", "1")];
    for ((name, unit), v) in names.iter().zip(cols.into_iter()) {
        tr.add(Column::new(name, unit), v)?;
    }
    Ok(tr)
}

/// Propagates both models of `pair` from the same coherent packet and
/// compares the conditional mean angle of each populated spin sector.
pub fn model_crosscheck(scales: &DerivedScales, pair: ModelPair, settings: &CrosscheckSettings) -> Result<CrosscheckRun> {
    check_finite("rescale", settings.rescale, true)?;
    check_finite("periods", settings.periods, true)?;
    if settings.samples == 0 {
        return Err(invalid("samples", "must be positive"));
    }
    let scales = if settings.rescale == 1.0 { *scales } else { scales.with_coupling_rescaled(settings.rescale)? };
    let (a, b, default_init) = match pair {
        ModelPair::RotVsEff => (Kind::Rot, Kind::Eff { zeeman: false }, SpinInit::Up),
        ModelPair::EffVsDisp => (Kind::Eff { zeeman: false }, Kind::Disp, SpinInit::Up),
        ModelPair::ZeemanOnOff => (Kind::Eff { zeeman: true }, Kind::Eff { zeeman: false }, SpinInit::Superposition),
        ModelPair::EffVsMisaligned { epsilon } => {
            (Kind::Eff { zeeman: false }, Kind::Misaligned(epsilon), SpinInit::Superposition)
        }
    };
    let init = settings.spin.unwrap_or(default_init);
    let wg = scales.require_omega_gamma()?;
    let t_end = settings.periods * 2.0 * PI / wg;
    let times: Vec<f64> = (0..=settings.samples).map(|k| t_end * k as f64 / settings.samples as f64).collect();
    let reference = run(&prepare(a, &scales, settings, init)?, &times, settings)?;
    let candidate = run(&prepare(b, &scales, settings, init)?, &times, settings)?;
    let dev = |name: &str| -> Result<f64> {
        let r = reference.get(name).ok_or_else(|| Error::Numerical(format!("missing series {name}")))?;
        let c = candidate.get(name).ok_or_else(|| Error::Numerical(format!("missing series {name}")))?;
        Ok(normalized_deviation(r, c))
    };
    let deviation_up = dev("gamma_up")?;
    let deviation_down = match init {
        SpinInit::Superposition => Some(dev("gamma_down")?),
        SpinInit::Up => None,
    };
    Ok(CrosscheckRun {
        pair,
        max_deviation: deviation_down.map_or(deviation_up, |d| d.max(deviation_up)),
        reference,
        candidate,
        deviation_up,
        deviation_down,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{derive_scales, Environment, FieldConfig, ParticleGeometry, TrapConfig};

    fn scales(l3: f64, ratio: f64, b: f64, hz: f64) -> DerivedScales {
        derive_scales(
            &ParticleGeometry::prolate(l3, ratio),
            &TrapConfig::default(),
            &FieldConfig::new(b, 2.0 * PI * hz),
            &Environment::default(),
        )
        .unwrap()
    }

    #[test]
    fn identical_models_agree_exactly() {
        let s = scales(200e-9, 0.4, -0.102, 1e5);
        let settings = CrosscheckSettings { samples: 16, periods: 0.5, ..Default::default() };
        let a = prepare(Kind::Eff { zeeman: false }, &s, &settings, SpinInit::Up).unwrap();
        let times: Vec<f64> = (0..5).map(|k| k as f64 * 1e-7).collect();
        let r1 = run(&a, &times, &settings).unwrap();
        let r2 = run(&a, &times, &settings).unwrap();
        assert_eq!(normalized_deviation(r1.get("gamma_up").unwrap(), r2.get("gamma_up").unwrap()), 0.0);
    }

    #[test]
    fn dispersive_limit_tracks_effective_model() {
        let s = scales(200e-9, 0.4, -0.102, 1e5);
        let r = model_crosscheck(&s, ModelPair::EffVsDisp, &CrosscheckSettings::default()).unwrap();
        assert!(r.max_deviation < 0.05, "{}", r.max_deviation);
        assert!(r.deviation_down.is_none());
        let p = r.reference.get("p_up").unwrap();
        assert!((p[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zeeman_term_is_a_small_correction() {
        let s = scales(100e-9, 0.2, -0.100, 1e6);
        let r = model_crosscheck(&s, ModelPair::ZeemanOnOff, &CrosscheckSettings::default()).unwrap();
        assert!(r.deviation_down.is_some());
        assert!(r.max_deviation < 0.05, "{}", r.max_deviation);
    }

    #[test]
    fn rejects_bad_settings() {
        let s = scales(200e-9, 0.4, -0.102, 1e5);
        let bad = CrosscheckSettings { samples: 0, ..Default::default() };
        assert!(model_crosscheck(&s, ModelPair::EffVsDisp, &bad).is_err());
        let bad = CrosscheckSettings { rescale: f64::NAN, ..Default::default() };
        assert!(model_crosscheck(&s, ModelPair::EffVsDisp, &bad).is_err());
    }
}
