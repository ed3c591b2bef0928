//! Run configuration: a sectioned JSON document in laboratory units.
//!
//! Frequencies are cyclic in the file and become angular exactly once, in
//! [`RunConfig::resolve`].

#![allow(non_snake_case)]

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::path::Path;

use gyrospin_core::constants::AMU;
use gyrospin_core::model::{Environment, FieldConfig, ParticleGeometry, TrapConfig};
use gyrospin_core::protocol::ModelPair;

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub particle: ParticleSection,
    #[serde(default)]
    pub trap: TrapSection,
    pub fields: FieldsSection,
    #[serde(default)]
    pub environment: EnvironmentSection,
    #[serde(default)]
    pub simulation: SimulationSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParticleSection {
    pub l1_nm: f64,
    /// Defaults to `l1_nm`.
    #[serde(default)]
    pub l2_nm: Option<f64>,
    pub l3_nm: f64,
    #[serde(default = "default_density")]
    pub density_kg_m3: f64,
    #[serde(default = "default_sigma")]
    pub sigma_uC_m2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrapSection {
    #[serde(rename = "U_ac_V")]
    pub u_ac_v: f64,
    pub omega_ac_Hz: f64,
    pub d0_um: f64,
    pub epsilon: f64,
}

impl Default for TrapSection {
    fn default() -> Self {
        Self { u_ac_v: 2.5e3, omega_ac_Hz: 0.5e6, d0_um: 350.0, epsilon: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldsSection {
    #[serde(rename = "B_mT")]
    pub b_mt: f64,
    pub rotation_Hz: f64,
    #[serde(default = "default_gamma0")]
    pub gamma0_GHz_per_T: f64,
    #[serde(default = "default_dnv", rename = "Dnv_GHz")]
    pub dnv_ghz: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnvironmentSection {
    #[serde(rename = "T_K")]
    pub t_k: f64,
    pub pressure_mbar: f64,
    pub gas_mass_amu: f64,
    /// `null` disables dephasing.
    #[serde(rename = "T2_us")]
    pub t2_us: Option<f64>,
    #[serde(rename = "A_fl_nT_sqrtHz")]
    pub a_fl_nt_sqrthz: f64,
    /// Imaginary transverse polarizability [C m²/V].
    pub alpha_im: f64,
}

impl Default for EnvironmentSection {
    fn default() -> Self {
        Self { t_k: 300.0, pressure_mbar: 1e-8, gas_mass_amu: 28.0, t2_us: Some(10.0), a_fl_nt_sqrthz: 1.0, alpha_im: 1e-32 }
    }
}

/// Either an explicit list or an evenly spaced range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Values(Vec<f64>),
    Range(GridRange),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridRange {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    /// Geometric instead of linear spacing.
    #[serde(default)]
    pub log: bool,
}

impl Grid {
    pub fn range(start: f64, stop: f64, points: usize) -> Self {
        Grid::Range(GridRange { start, stop, points, log: false })
    }

    pub fn values(&self, name: &str) -> Result<Vec<f64>, CliError> {
        let out = match self {
            Grid::Values(v) => v.clone(),
            Grid::Range(r) => {
                if r.points == 0 {
                    return Err(CliError::range(name, "grid needs at least one point"));
                }
                if r.log && (r.start <= 0.0 || r.stop <= 0.0) {
                    return Err(CliError::range(name, "logarithmic grid bounds must be positive"));
                }
                let n = r.points;
                (0..n)
                    .map(|k| {
                        let f = if n == 1 { 0.0 } else { k as f64 / (n - 1) as f64 };
                        if r.log {
                            r.start * (r.stop / r.start).powf(f)
                        } else {
                            r.start + (r.stop - r.start) * f
                        }
                    })
                    .collect()
            }
        };
        if out.is_empty() {
            return Err(CliError::range(name, "grid is empty"));
        }
        if let Some(x) = out.iter().find(|x| !x.is_finite()) {
            return Err(CliError::range(name, format!("grid value {x} is not finite")));
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulationSection {
    /// Fock dimension of the interferometer oscillator.
    pub fock_dim: usize,
    /// Rotor momentum cutoff for the stabilization run.
    pub rotor_L: usize,
    /// Factor applied to δ and g in the crosschecks.
    pub rescale: f64,
    /// Rotor spin projection for the alignment sweep.
    pub m: i32,
    #[serde(rename = "B_grid_mT")]
    pub b_grid_mt: Grid,
    /// Temperatures of the alignment sweep; defaults to the environment.
    #[serde(rename = "temperatures_K")]
    pub temperatures_k: Option<Vec<f64>>,
    pub gamma_points: usize,
    pub stabilization: StabilizationSection,
    pub interferometer: InterferometerSection,
    pub crosscheck: CrosscheckSection,
    pub validity: ValiditySection,
    pub decoherence: DecoherenceSection,
}

impl Default for SimulationSection {
    fn default() -> Self {
        Self {
            fock_dim: 60,
            rotor_L: 12000,
            rescale: 1.0,
            m: 1,
            b_grid_mt: Grid::range(-1.0, 1.0, 201),
            temperatures_k: None,
            gamma_points: 721,
            stabilization: StabilizationSection::default(),
            interferometer: InterferometerSection::default(),
            crosscheck: CrosscheckSection::default(),
            validity: ValiditySection::default(),
            decoherence: DecoherenceSection::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StabilizationSection {
    /// Initial σx eigenvalues to run.
    pub spins: Vec<i32>,
    /// Duration in periods 2π/ω_η.
    pub periods: f64,
    pub steps_per_period: usize,
    pub samples: usize,
    /// Packet width in γ; defaults to σ_γ.
    pub packet_width_rad: Option<f64>,
    pub absorber: f64,
}

impl Default for StabilizationSection {
    fn default() -> Self {
        Self { spins: vec![1, -1], periods: 10.0, steps_per_period: 200, samples: 100, packet_width_rad: None, absorber: 0.1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InterferometerSection {
    /// Number of arm durations on [0, tau_max_fraction·π/ω_γ].
    pub tau_points: usize,
    pub tau_max_fraction: f64,
    /// Oscillator temperature of the numeric run; 0 is the ground state.
    #[serde(rename = "temperature_K")]
    pub temperature_k: f64,
    pub axis_phase_rad: f64,
    /// Fields of the recurrence sweep; omitted skips the sweep.
    #[serde(rename = "recurrence_B_mT")]
    pub recurrence_b_mt: Option<Grid>,
}

impl Default for InterferometerSection {
    fn default() -> Self {
        Self { tau_points: 32, tau_max_fraction: 1.0, temperature_k: 0.0, axis_phase_rad: 0.0, recurrence_b_mt: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairName {
    RotVsEff,
    EffVsDisp,
    ZeemanOnOff,
    EffVsMisaligned,
}

impl PairName {
    pub fn label(self) -> &'static str {
        match self {
            PairName::RotVsEff => "rot_vs_eff",
            PairName::EffVsDisp => "eff_vs_disp",
            PairName::ZeemanOnOff => "zeeman_on_off",
            PairName::EffVsMisaligned => "eff_vs_misaligned",
        }
    }

    pub fn pair(self, epsilon: f64) -> ModelPair {
        match self {
            PairName::RotVsEff => ModelPair::RotVsEff,
            PairName::EffVsDisp => ModelPair::EffVsDisp,
            PairName::ZeemanOnOff => ModelPair::ZeemanOnOff,
            PairName::EffVsMisaligned => ModelPair::EffVsMisaligned { epsilon },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CrosscheckSection {
    pub pairs: Vec<PairName>,
    pub angle_dim: usize,
    pub libration_dim: usize,
    pub alpha: f64,
    /// Duration in periods 2π/ω_γ.
    pub periods: f64,
    pub samples: usize,
    /// NV-axis tilt for the misalignment pair [rad].
    pub epsilon_rad: f64,
}

impl Default for CrosscheckSection {
    fn default() -> Self {
        Self {
            pairs: vec![PairName::RotVsEff, PairName::EffVsDisp],
            angle_dim: 16,
            libration_dim: 10,
            alpha: 0.1,
            periods: 2.0,
            samples: 100,
            epsilon_rad: 0.01,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OccupationName {
    Bose,
    Classical,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ValiditySection {
    pub rotation_Hz: Grid,
    pub l3_nm: Grid,
    pub occupation: OccupationName,
}

impl Default for ValiditySection {
    fn default() -> Self {
        Self {
            rotation_Hz: Grid::Range(GridRange { start: 1e4, stop: 1e8, points: 41, log: true }),
            l3_nm: Grid::Range(GridRange { start: 10.0, stop: 1000.0, points: 41, log: true }),
            occupation: OccupationName::Bose,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DecoherenceSection {
    /// Angular separation of the superposed branches [rad].
    pub gamma_sep_rad: f64,
    /// Mean angle at which the field-gradient rate is evaluated [rad].
    pub gamma_ref_rad: f64,
}

impl Default for DecoherenceSection {
    fn default() -> Self {
        Self { gamma_sep_rad: 1e-3, gamma_ref_rad: PI / 2.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub directory: String,
    pub format: OutputFormat,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { directory: "out".into(), format: OutputFormat::Csv }
    }
}

fn default_density() -> f64 {
    3500.0
}
fn default_sigma() -> f64 {
    3.5
}
fn default_gamma0() -> f64 {
    28.024
}
fn default_dnv() -> f64 {
    2.87
}

/// Physical inputs in SI units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Physical {
    pub geometry: ParticleGeometry,
    pub trap: TrapConfig,
    pub fields: FieldConfig,
    pub environment: Environment,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(CliError::from_json)?;
        cfg.resolve()?;
        Ok(cfg)
    }

    /// Reads and validates a configuration file.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Missing(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Converts to SI units and checks every value.
    pub fn resolve(&self) -> Result<Physical, CliError> {
        let p = &self.particle;
        let l1 = p.l1_nm * 1e-9;
        let geometry = ParticleGeometry {
            l1,
            l2: p.l2_nm.map_or(l1, |v| v * 1e-9),
            l3: p.l3_nm * 1e-9,
            density: p.density_kg_m3,
            surface_charge: p.sigma_uC_m2 * 1e-6,
        };
        let t = &self.trap;
        let trap = TrapConfig { u_ac: t.u_ac_v, omega_ac: 2.0 * PI * t.omega_ac_Hz, d0: t.d0_um * 1e-6, asymmetry: t.epsilon };
        let f = &self.fields;
        let fields = FieldConfig {
            b: f.b_mt * 1e-3,
            omega: 2.0 * PI * f.rotation_Hz,
            gamma0: 2.0 * PI * (f.gamma0_GHz_per_T * 1e9),
            d_nv: 2.0 * PI * (f.dnv_ghz * 1e9),
        };
        let e = &self.environment;
        let environment = Environment {
            temperature: e.t_k,
            gas_pressure: e.pressure_mbar * 100.0,
            gas_mass: e.gas_mass_amu * AMU,
            t2: e.t2_us.map_or(f64::INFINITY, |v| v * 1e-6),
            field_noise: e.a_fl_nt_sqrthz * 1e-9,
            polarizability_im: e.alpha_im,
        };
        geometry.validate()?;
        trap.validate()?;
        fields.validate()?;
        environment.validate()?;
        self.check_simulation()?;
        Ok(Physical { geometry, trap, fields, environment })
    }

    fn check_simulation(&self) -> Result<(), CliError> {
        let s = &self.simulation;
        if s.fock_dim < 4 {
            return Err(CliError::range("simulation.fock_dim", "must be at least 4"));
        }
        if s.rotor_L < 2 {
            return Err(CliError::range("simulation.rotor_L", "must be at least 2"));
        }
        if !(s.rescale.is_finite() && s.rescale > 0.0) {
            return Err(CliError::range("simulation.rescale", "must be positive"));
        }
        if !(-1..=1).contains(&s.m) {
            return Err(CliError::range("simulation.m", "must be -1, 0 or 1"));
        }
        if s.gamma_points < 2 {
            return Err(CliError::range("simulation.gamma_points", "must be at least 2"));
        }
        if let Some(ts) = &s.temperatures_k {
            if ts.is_empty() || ts.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
                return Err(CliError::range("simulation.temperatures_K", "must be a non-empty list of non-negative values"));
            }
        }
        s.b_grid_mt.values("simulation.B_grid_mT")?;
        let st = &s.stabilization;
        if st.spins.is_empty() || st.spins.iter().any(|x| x.abs() != 1) {
            return Err(CliError::range("simulation.stabilization.spins", "entries must be +1 or -1"));
        }
        if !(st.periods.is_finite() && st.periods > 0.0) || st.steps_per_period == 0 || st.samples == 0 {
            return Err(CliError::range("simulation.stabilization", "periods, steps_per_period and samples must be positive"));
        }
        if !(0.0..0.5).contains(&st.absorber) {
            return Err(CliError::range("simulation.stabilization.absorber", "must lie in [0, 0.5)"));
        }
        let it = &s.interferometer;
        if it.tau_points == 0 || !(it.tau_max_fraction.is_finite() && it.tau_max_fraction >= 0.0) {
            return Err(CliError::range("simulation.interferometer", "tau_points must be positive and tau_max_fraction non-negative"));
        }
        if !(it.temperature_k.is_finite() && it.temperature_k >= 0.0) {
            return Err(CliError::range("simulation.interferometer.temperature_K", "must be non-negative"));
        }
        if let Some(g) = &it.recurrence_b_mt {
            g.values("simulation.interferometer.recurrence_B_mT")?;
        }
        let c = &s.crosscheck;
        if c.angle_dim < 4 || c.libration_dim < 2 || c.samples == 0 || !(c.periods > 0.0) || !c.alpha.is_finite() {
            return Err(CliError::range("simulation.crosscheck", "dimensions, samples and periods out of range"));
        }
        let v = &s.validity;
        let hz = v.rotation_Hz.values("simulation.validity.rotation_Hz")?;
        let l3 = v.l3_nm.values("simulation.validity.l3_nm")?;
        if hz.iter().chain(&l3).any(|x| *x <= 0.0) {
            return Err(CliError::range("simulation.validity", "grid values must be positive"));
        }
        let d = &s.decoherence;
        if !(d.gamma_sep_rad.is_finite() && d.gamma_ref_rad.is_finite()) {
            return Err(CliError::range("simulation.decoherence", "angles must be finite"));
        }
        if self.output.directory.is_empty() {
            return Err(CliError::range("output.directory", "must not be empty"));
        }
        Ok(())
    }
}
