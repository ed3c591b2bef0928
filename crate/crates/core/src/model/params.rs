//! Input parameter sets and the scales derived from them.

use serde::{Deserialize, Serialize};

use super::geometry::{inertia_from_geometry, quadrupole_moments};
use crate::constants::{DIAMOND_DENSITY, D_NV, GAMMA_NV, HBAR, K_B};
use crate::error::{check_finite, invalid, Error, Result};

/// Semiaxes and surface charge of a uniform ellipsoid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParticleGeometry {
    /// Semiaxes [m]; the symmetry axis is l3.
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    /// Mass density [kg/m³].
    pub density: f64,
    /// Surface charge density [C/m²].
    pub surface_charge: f64,
}

impl ParticleGeometry {
    /// Symmetric particle with l1 = l2 = `aspect`·l3, diamond density and
    /// σ = 3.5 µC/m².
    pub fn prolate(l3: f64, aspect: f64) -> Self {
        Self {
            l1: aspect * l3,
            l2: aspect * l3,
            l3,
            density: DIAMOND_DENSITY,
            surface_charge: 3.5e-6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_finite("l1", self.l1, true)?;
        check_finite("l2", self.l2, true)?;
        check_finite("l3", self.l3, true)?;
        check_finite("density", self.density, true)?;
        check_finite("surface_charge", self.surface_charge, false)?;
        if self.l3 < self.l1 || self.l3 < self.l2 {
            return Err(Error::UnsupportedShape(format!(
                "oblate particle (l1 = {:e}, l2 = {:e}, l3 = {:e}); l3 must be the longest semiaxis",
                self.l1, self.l2, self.l3
            )));
        }
        Ok(())
    }
}

/// Linear Paul trap driving the quadrupole torque.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrapConfig {
    /// Drive amplitude [V].
    pub u_ac: f64,
    /// Drive frequency [rad/s].
    pub omega_ac: f64,
    /// Electrode distance scale [m].
    pub d0: f64,
    /// Trap asymmetry ε with A₁ = −1/2 − ε, A₂ = −1/2 + ε.
    pub asymmetry: f64,
}

impl TrapConfig {
    pub fn validate(&self) -> Result<()> {
        check_finite("u_ac", self.u_ac, true)?;
        check_finite("omega_ac", self.omega_ac, true)?;
        check_finite("d0", self.d0, true)?;
        check_finite("asymmetry", self.asymmetry, false)?;
        Ok(())
    }
}

impl Default for TrapConfig {
    fn default() -> Self {
        Self {
            u_ac: 2.5e3,
            omega_ac: 2.0 * std::f64::consts::PI * 0.5e6,
            d0: 350e-6,
            asymmetry: 0.0,
        }
    }
}

/// Magnetic field, rotation rate and NV constants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldConfig {
    /// Signed field along the rotation axis [T].
    pub b: f64,
    /// Rotation rate [rad/s].
    pub omega: f64,
    /// Gyromagnetic ratio [rad s⁻¹ T⁻¹].
    pub gamma0: f64,
    /// Zero-field splitting [rad/s].
    pub d_nv: f64,
}

impl FieldConfig {
    /// Field and rotation rate with the NV default constants.
    pub fn new(b: f64, omega: f64) -> Self {
        Self {
            b,
            omega,
            gamma0: GAMMA_NV,
            d_nv: D_NV,
        }
    }

    /// Field at which the Barnett term is exactly compensated, ω/γ0.
    pub fn compensation_field(&self) -> f64 {
        self.omega / self.gamma0
    }

    /// g = ω − γ0B, written as γ0(ω/γ0 − B) so that it vanishes exactly at
    /// the compensation field.
    pub fn coupling(&self) -> f64 {
        self.gamma0 * (self.compensation_field() - self.b)
    }

    pub fn validate(&self) -> Result<()> {
        check_finite("b", self.b, false)?;
        check_finite("omega", self.omega, false)?;
        check_finite("gamma0", self.gamma0, true)?;
        check_finite("d_nv", self.d_nv, true)?;
        Ok(())
    }
}

/// Thermal and noise environment.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    /// Temperature [K].
    pub temperature: f64,
    /// Gas pressure [Pa].
    pub gas_pressure: f64,
    /// Gas molecule mass [kg].
    pub gas_mass: f64,
    /// Spin dephasing time [s]; may be infinite.
    pub t2: f64,
    /// Field-noise amplitude [T/√Hz].
    pub field_noise: f64,
    /// Imaginary part of the transverse polarizability [C m²/V].
    pub polarizability_im: f64,
}

impl Default for Environment {
    fn default() -> Self {
        Self {
            temperature: 300.0,
            gas_pressure: 1e-6,
            gas_mass: 28.0 * crate::constants::AMU,
            t2: 10e-6,
            field_noise: 1e-9,
            polarizability_im: 1e-32,
        }
    }
}

impl Environment {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("temperature", self.temperature),
            ("gas_pressure", self.gas_pressure),
            ("gas_mass", self.gas_mass),
            ("field_noise", self.field_noise),
            ("polarizability_im", self.polarizability_im),
        ] {
            check_finite(name, v, false)?;
            if v < 0.0 {
                return Err(invalid(name, format!("must be non-negative, got {v}")));
            }
        }
        if self.t2.is_nan() || self.t2 <= 0.0 {
            return Err(invalid("t2", format!("must be positive, got {}", self.t2)));
        }
        Ok(())
    }
}

/// Scales entering every Hamiltonian and closed-form observable, in SI units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DerivedScales {
    pub mass: f64,
    /// Transverse moment of inertia I = I₁ = I₂.
    pub inertia: f64,
    /// Symmetry-axis moment I₃.
    pub inertia_sym: f64,
    /// I·I₃/(I − I₃).
    pub inertia_eff: f64,
    pub quadrupole: f64,
    pub quadrupole_sym: f64,
    /// Rotation rate ω.
    pub omega: f64,
    /// Zeeman rate γ0B.
    pub zeeman: f64,
    pub d_nv: f64,
    /// √(ω² + ω_β²).
    pub omega_xi: f64,
    pub omega_beta: f64,
    /// U²(Q − Q₃)²/(16 I ω_ac² d0⁴), prefactor of the secular β potential [J].
    pub beta_potential: f64,
    /// g = ω − γ0B.
    pub g: f64,
    /// δ = g²/D.
    pub delta: f64,
    /// Δ = D − g.
    pub detuning: f64,
    /// δ̃ = g²/(D + g).
    pub delta_tilde: f64,
    /// √(ħg(1 + g/Δ)/I_eff); None when Δ = 0 or the radicand is negative.
    pub omega_gamma: Option<f64>,
    /// √(2ħg²/(I_eff|δ|)); None when g = 0.
    pub omega_eta: Option<f64>,
    /// (ħδ/(8 I_eff g²))^{1/4}; None when g = 0.
    pub sigma_gamma: Option<f64>,
    /// ħg/(k_B T); None at T = 0.
    pub kappa: Option<f64>,
}

impl DerivedScales {
    pub fn require_omega_gamma(&self) -> Result<f64> {
        self.omega_gamma.ok_or_else(|| Error::Undefined {
            quantity: "omega_gamma",
            reason: format!(
                "requires Δ ≠ 0 and g(1 + g/Δ) > 0 (g = {:e}, Δ = {:e})",
                self.g, self.detuning
            ),
        })
    }

    pub fn require_sigma_gamma(&self) -> Result<f64> {
        self.sigma_gamma.ok_or_else(|| Error::Undefined {
            quantity: "sigma_gamma",
            reason: "requires g ≠ 0".into(),
        })
    }

    pub fn require_omega_eta(&self) -> Result<f64> {
        self.omega_eta.ok_or_else(|| Error::Undefined {
            quantity: "omega_eta",
            reason: "requires g ≠ 0".into(),
        })
    }

    /// Zero-point width √(ħ/(2 I_eff ω_γ)) of the γ libration.
    pub fn gamma_zero_point(&self) -> Result<f64> {
        Ok((HBAR / (2.0 * self.inertia_eff * self.require_omega_gamma()?)).sqrt())
    }

    /// Copy with δ and g multiplied by `factor` and the dependent scales
    /// recomputed.
    pub fn with_coupling_rescaled(&self, factor: f64) -> Result<Self> {
        check_finite("rescale", factor, true)?;
        let mut s = *self;
        s.g = self.g * factor;
        s.delta = self.delta * factor;
        s.fill_spin_rotor(None);
        s.kappa = self.kappa.map(|k| k * factor);
        Ok(s)
    }

    fn fill_spin_rotor(&mut self, recompute_delta: Option<f64>) {
        let g = self.g;
        if let Some(d) = recompute_delta {
            self.delta = g * g / d;
            self.detuning = d - g;
            self.delta_tilde = g * g / (d + g);
        }
        let ie = self.inertia_eff;
        self.omega_gamma = if self.detuning != 0.0 {
            let rad = HBAR * g * (1.0 + g / self.detuning) / ie;
            (rad > 0.0 && rad.is_finite()).then(|| rad.sqrt())
        } else {
            None
        };
        if g != 0.0 && self.delta != 0.0 {
            self.omega_eta = Some((2.0 * HBAR * g * g / (ie * self.delta.abs())).sqrt());
            self.sigma_gamma = Some((HBAR * self.delta.abs() / (8.0 * ie * g * g)).powf(0.25));
        } else {
            self.omega_eta = None;
            self.sigma_gamma = None;
        }
    }
}

/// Evaluates every derived scale from the physical inputs.
pub fn derive_scales(
    geom: &ParticleGeometry,
    trap: &TrapConfig,
    fields: &FieldConfig,
    env: &Environment,
) -> Result<DerivedScales> {
    trap.validate()?;
    fields.validate()?;
    env.validate()?;
    let (mass, inertia, inertia_sym) = inertia_from_geometry(geom)?;
    if !(inertia_sym < inertia) {
        return Err(Error::UnsupportedShape(
            "effective inertia requires a strictly prolate particle (I₃ < I)".into(),
        ));
    }
    let inertia_eff = inertia * inertia_sym / (inertia - inertia_sym);
    let (q, q3) = quadrupole_moments(geom)?;
    let beta_potential = trap.u_ac.powi(2) * (q - q3).powi(2)
        / (16.0 * inertia * trap.omega_ac.powi(2) * trap.d0.powi(4));
    let omega_beta = (2.0 * beta_potential / inertia).sqrt();
    let omega = fields.omega;
    let g = fields.coupling();
    let kappa = (env.temperature > 0.0).then(|| HBAR * g / (K_B * env.temperature));
    let mut s = DerivedScales {
        mass,
        inertia,
        inertia_sym,
        inertia_eff,
        quadrupole: q,
        quadrupole_sym: q3,
        omega,
        zeeman: fields.gamma0 * fields.b,
        d_nv: fields.d_nv,
        omega_xi: (omega * omega + omega_beta * omega_beta).sqrt(),
        omega_beta,
        beta_potential,
        g,
        delta: 0.0,
        detuning: 0.0,
        delta_tilde: 0.0,
        omega_gamma: None,
        omega_eta: None,
        sigma_gamma: None,
        kappa,
    };
    s.fill_spin_rotor(Some(fields.d_nv));
    Ok(s)
}
