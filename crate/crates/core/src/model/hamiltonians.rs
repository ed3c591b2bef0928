//! The model hierarchy: full linearized rotor model, adiabatic effective
//! model, magnetic two-level model, App.-style second-order and dispersive
//! models, and the imperfection corrections.
//!
//! Every builder returns a sparse Hermitian operator in joules on the
//! supplied basis.

use num_complex::Complex64;

use super::gamma::AngleOperators;
use super::params::DerivedScales;
use crate::constants::HBAR;
use crate::error::{check_finite, invalid, Error, Result};
use crate::quantum::basis::{AngleSpace, BasisSpec, SpinSpace};
use crate::quantum::ops::{fock_operators, pauli, quadrature_squared, spin1_operators};
use crate::quantum::operator::HERMITIAN_TOL;
use crate::quantum::{OperatorMatrix, SparseOperator};

/// Accumulates Σ c · (spin ⊗ angle ⊗ libration) over the factors present.
struct Assembler<'a> {
    basis: &'a BasisSpec,
    total: SparseOperator,
}

impl<'a> Assembler<'a> {
    fn new(basis: &'a BasisSpec) -> Self {
        Self {
            basis,
            total: SparseOperator::zeros(basis.dim()),
        }
    }

    fn add(
        &mut self,
        coeff: f64,
        spin: Option<&SparseOperator>,
        angle: Option<&SparseOperator>,
        libration: Option<&SparseOperator>,
    ) -> Result<()> {
        let mut parts = Vec::with_capacity(3);
        for (op, dim, name) in [
            (spin, self.basis.spin().map(|s| s.dim()), "spin"),
            (angle, self.basis.angle().map(|a| a.dim()), "angle"),
            (libration, self.basis.libration(), "libration"),
        ] {
            match (op, dim) {
                (Some(o), Some(d)) if o.dim() == d => parts.push(o.clone()),
                (Some(o), Some(d)) => {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        found: o.dim(),
                    })
                }
                (None, Some(d)) => parts.push(SparseOperator::identity(d)),
                (Some(_), None) => {
                    return Err(Error::InvalidBasis(format!("basis has no {name} factor")))
                }
                (None, None) => {}
            }
        }
        let mut prod = parts[0].clone();
        for p in &parts[1..] {
            prod = prod.kron(p);
        }
        self.total = self.total.add_scaled(&prod, Complex64::new(coeff, 0.0))?;
        Ok(())
    }

    fn finish(self) -> Result<SparseOperator> {
        let dev = self.total.hermiticity_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        Ok(self.total)
    }
}

fn sparse(op: &OperatorMatrix) -> SparseOperator {
    SparseOperator::from_dense(op)
}

fn require(basis: &BasisSpec, spin: SpinSpace, angle: bool, libration: bool) -> Result<AngleOperators> {
    if basis.spin() != Some(spin) {
        return Err(Error::InvalidBasis(format!("expected a {spin:?} spin factor")));
    }
    if libration != basis.libration().is_some() {
        return Err(Error::InvalidBasis(if libration {
            "a libration (ξ) factor is required".into()
        } else {
            "unexpected libration (ξ) factor".into()
        }));
    }
    match (angle, basis.angle()) {
        (true, Some(a)) => AngleOperators::new(a),
        _ => Err(Error::InvalidBasis("an angle (γ) factor is required".into())),
    }
}

fn require_harmonic(basis: &BasisSpec) -> Result<AngleOperators> {
    let ops = require(basis, SpinSpace::Doublet, true, false)?;
    if !matches!(ops.space, AngleSpace::Harmonic { .. }) {
        return Err(Error::InvalidBasis(
            "this model needs the harmonic angle representation".into(),
        ));
    }
    Ok(ops)
}

/// H_rot = H_ξ + p²/2I₃ + D S1²/ħ + (γ0B S3 − ω p)ξ + g(S1 cos γ − S2 sin γ)
/// on spin(3) ⊗ angle ⊗ libration.
pub fn build_h_rot(scales: &DerivedScales, basis: &BasisSpec) -> Result<SparseOperator> {
    let ang = require(basis, SpinSpace::Triplet, true, true)?;
    let d = basis.libration().expect("checked");
    let fock = fock_operators(d, scales.inertia, scales.omega_xi)?;
    let s = spin1_operators();
    let (s1, s2, s3) = (sparse(&s.s1), sparse(&s.s2), sparse(&s.s3));
    let s1sq = &s1 * &s1;
    let mut h = Assembler::new(basis);
    h.add(1.0, None, None, Some(&fock.h))?;
    h.add(1.0 / (2.0 * scales.inertia_sym), None, Some(&ang.p2), None)?;
    h.add(scales.d_nv / HBAR, Some(&s1sq), None, None)?;
    h.add(scales.zeeman, Some(&s3), None, Some(&fock.x))?;
    h.add(-scales.omega, None, Some(&ang.p), Some(&fock.x))?;
    h.add(scales.g, Some(&s1), Some(&ang.cos), None)?;
    h.add(-scales.g, Some(&s2), Some(&ang.sin), None)?;
    h.finish()
}

/// H_eff = p²/2I_eff + D S1²/ħ + g(S1 cos γ − S2 sin γ), optionally with the
/// Zeeman correction (γ0B/ω) S3 p/I, on spin(3) ⊗ angle.
pub fn build_h_eff(scales: &DerivedScales, basis: &BasisSpec, include_zeeman: bool) -> Result<SparseOperator> {
    let ang = require(basis, SpinSpace::Triplet, true, false)?;
    let s = spin1_operators();
    let (s1, s2, s3) = (sparse(&s.s1), sparse(&s.s2), sparse(&s.s3));
    let mut h = Assembler::new(basis);
    h.add(1.0 / (2.0 * scales.inertia_eff), None, Some(&ang.p2), None)?;
    h.add(scales.d_nv / HBAR, Some(&(&s1 * &s1)), None, None)?;
    if include_zeeman {
        if scales.omega == 0.0 {
            return Err(invalid("omega", "the Zeeman correction divides by ω, which is zero"));
        }
        h.add(scales.zeeman / (scales.omega * scales.inertia), Some(&s3), Some(&ang.p), None)?;
    }
    h.add(scales.g, Some(&s1), Some(&ang.cos), None)?;
    h.add(-scales.g, Some(&s2), Some(&ang.sin), None)?;
    h.finish()
}

/// H_mag = p²/2I_eff + (ħδ/2)(1 + σx) sin²γ + ħg σz cos γ on the
/// {S1 = +ħ, S1 = −ħ} doublet ⊗ angle.
pub fn build_h_mag(scales: &DerivedScales, basis: &BasisSpec) -> Result<SparseOperator> {
    check_finite("delta", scales.delta, false)?;
    check_finite("g", scales.g, false)?;
    let ang = require(basis, SpinSpace::Doublet, true, false)?;
    let (sx, _, sz) = pauli();
    let one_plus_sx = &sparse(&sx) + &SparseOperator::identity(2);
    let mut h = Assembler::new(basis);
    h.add(1.0 / (2.0 * scales.inertia_eff), None, Some(&ang.p2), None)?;
    h.add(HBAR * scales.delta / 2.0, Some(&one_plus_sx), Some(&ang.sin2), None)?;
    h.add(HBAR * scales.g, Some(&sparse(&sz)), Some(&ang.cos), None)?;
    h.finish()
}

/// Fixed-angle spin block of H_mag, (ħδ/2)(1 + σx) sin²γ + ħg σz cos γ.
pub fn mag_spin_block(delta: f64, g: f64, gamma: f64) -> OperatorMatrix {
    let (sx, _, sz) = pauli();
    let s2 = gamma.sin().powi(2);
    let a = &(&OperatorMatrix::identity(2) + &sx) * (HBAR * delta * s2 / 2.0);
    &a + &(&sz * (HBAR * g * gamma.cos()))
}

/// H₂ = p²/2I_eff + (ħ/4)(g − δ̃)γ² + (ħ/2)[Δ + (g + δ̃)γ²/2]σz − (ħg/√2)σx γ
/// on doublet ⊗ harmonic angle.
pub fn build_h2(scales: &DerivedScales, basis: &BasisSpec) -> Result<SparseOperator> {
    let ang = require_harmonic(basis)?;
    let (sx, _, sz) = pauli();
    let (sx, sz) = (sparse(&sx), sparse(&sz));
    let (g, dt, det) = (scales.g, scales.delta_tilde, scales.detuning);
    let mut h = Assembler::new(basis);
    h.add(1.0 / (2.0 * scales.inertia_eff), None, Some(&ang.p2), None)?;
    h.add(HBAR * (g - dt) / 4.0, None, Some(ang.gamma2()?), None)?;
    h.add(HBAR * det / 2.0, Some(&sz), None, None)?;
    h.add(HBAR * (g + dt) / 4.0, Some(&sz), Some(ang.gamma2()?), None)?;
    h.add(-HBAR * g / 2f64.sqrt(), Some(&sx), Some(ang.gamma()?), None)?;
    h.finish()
}

/// H_d = p²/2I_eff + ħgγ²/8 + (ħΔ/2)σz + (3ħg/8)(1 + 4g/3Δ)γ²σz on
/// doublet ⊗ harmonic angle.
pub fn build_h_disp(scales: &DerivedScales, basis: &BasisSpec) -> Result<SparseOperator> {
    if scales.detuning == 0.0 {
        return Err(invalid("detuning", "the dispersive model needs Δ ≠ 0"));
    }
    let ang = require_harmonic(basis)?;
    let (_, _, sz) = pauli();
    let sz = sparse(&sz);
    let (g, det) = (scales.g, scales.detuning);
    let mut h = Assembler::new(basis);
    h.add(1.0 / (2.0 * scales.inertia_eff), None, Some(&ang.p2), None)?;
    h.add(HBAR * g / 8.0, None, Some(ang.gamma2()?), None)?;
    h.add(HBAR * det / 2.0, Some(&sz), None, None)?;
    h.add(3.0 * HBAR * g / 8.0 * (1.0 + 4.0 * g / (3.0 * det)), Some(&sz), Some(ang.gamma2()?), None)?;
    h.finish()
}

/// H_eff (without Zeeman term) plus ε D {S1, S3}/ħ for an NV axis tilted by
/// a small angle ε from the symmetry axis.
pub fn build_h_misaligned(scales: &DerivedScales, epsilon: f64, basis: &BasisSpec) -> Result<SparseOperator> {
    check_finite("epsilon", epsilon, false)?;
    let base = build_h_eff(scales, basis, false)?;
    if epsilon == 0.0 {
        return Ok(base);
    }
    let s = spin1_operators();
    let anti = sparse(&s.s1.anticommutator(&s.s3));
    let mut h = Assembler::new(basis);
    h.total = base;
    h.add(epsilon * scales.d_nv / HBAR, Some(&anti), None, None)?;
    h.finish()
}

/// Fixed-angle spin block of the misaligned model,
/// D S1²/ħ + g(S1 cos γ − S2 sin γ) + εD{S1, S3}/ħ.
pub fn misaligned_spin_block(scales: &DerivedScales, epsilon: f64, gamma: f64) -> OperatorMatrix {
    let s = spin1_operators();
    let mut h = &(&s.s1 * &s.s1) * (scales.d_nv / HBAR);
    h = &h + &(&s.s1 * (scales.g * gamma.cos()));
    h = &h - &(&s.s2 * (scales.g * gamma.sin()));
    &h + &(&s.s1.anticommutator(&s.s3) * (epsilon * scales.d_nv / HBAR))
}

/// H_rot plus the first-order shape-asymmetry correction for I₂ = I₁(1 − δ_I).
/// Non-commuting products are symmetrized.
pub fn build_h_asym(scales: &DerivedScales, delta_i: f64, basis: &BasisSpec) -> Result<SparseOperator> {
    check_finite("delta_i", delta_i, false)?;
    let base = build_h_rot(scales, basis)?;
    if delta_i == 0.0 {
        return Ok(base);
    }
    let ang = require(basis, SpinSpace::Triplet, true, true)?;
    let d = basis.libration().expect("checked");
    let fock = fock_operators(d, scales.inertia, scales.omega_xi)?;
    let x0 = fock.zero_point;
    let p0sq = HBAR * scales.inertia * scales.omega_xi / 2.0;
    let pxi2 = &quadrature_squared(d, -1.0) * p0sq;
    let one_plus_xi2 = &SparseOperator::identity(d) + &(&quadrature_squared(d, 1.0) * (x0 * x0));
    let s2 = sparse(&spin1_operators().s2);
    let (i1, w) = (scales.inertia, scales.omega);
    let p_sin2 = ang.p.symmetrized_product(&ang.sin2)?;
    let mut h = Assembler::new(basis);
    h.total = base;
    h.add(delta_i / (2.0 * i1), None, Some(&ang.cos2), Some(&pxi2))?;
    h.add(i1 * delta_i * w * w / 2.0, None, Some(&ang.sin2), Some(&one_plus_xi2))?;
    h.add(-delta_i * w, Some(&s2), Some(&ang.sin), None)?;
    h.add(-delta_i * w, None, Some(&p_sin2), Some(&fock.x))?;
    h.add(delta_i * w, None, Some(&ang.sin_cos), Some(&fock.p))?;
    h.finish()
}

/// Secular quadrupole potential U²(Q − Q₃)²/(16Iω_ac²d0⁴)·sin²β cos²β [J].
pub fn secular_potential_beta(scales: &DerivedScales, betas: &[f64]) -> Vec<f64> {
    betas
        .iter()
        .map(|b| scales.beta_potential * (b.sin() * b.cos()).powi(2))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::params::{derive_scales, Environment, FieldConfig, ParticleGeometry, TrapConfig};
    use crate::quantum::{hermitian_eig, Factor};
    use std::f64::consts::PI;

    fn scales(b: f64, omega_hz: f64, l3: f64, aspect: f64) -> DerivedScales {
        derive_scales(
            &ParticleGeometry::prolate(l3, aspect),
            &TrapConfig::default(),
            &FieldConfig::new(b, 2.0 * PI * omega_hz),
            &Environment::default(),
        )
        .unwrap()
    }

    fn triplet_rotor(l: usize) -> BasisSpec {
        BasisSpec::new(Some(SpinSpace::Triplet), Some(AngleSpace::Rotor { cutoff: l }), None).unwrap()
    }

    #[test]
    fn h_eff_decoupled_spectrum_at_compensation() {
        let omega = 2.0 * PI * 1e6;
        let s = scales(omega / crate::constants::GAMMA_NV, 1e6, 200e-9, 0.3);
        assert_eq!(s.g, 0.0);
        let basis = triplet_rotor(3);
        let h = build_h_eff(&s, &basis, false).unwrap().to_dense();
        let mut expect = Vec::new();
        for spin in [HBAR * s.d_nv, 0.0, HBAR * s.d_nv] {
            for m in -3i32..=3 {
                expect.push(spin + (HBAR * m as f64).powi(2) / (2.0 * s.inertia_eff));
            }
        }
        expect.sort_by(f64::total_cmp);
        let e = hermitian_eig(&h).unwrap();
        for (a, b) in e.values.iter().zip(&expect) {
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-30));
        }
    }

    #[test]
    fn hard_magnet_block() {
        let s = scales(-0.1, 1e6, 200e-9, 0.3);
        let basis = triplet_rotor(4);
        let h = build_h_eff(&s, &basis, false).unwrap();
        let ang = AngleOperators::new(AngleSpace::Rotor { cutoff: 4 }).unwrap();
        let n = 9;
        for i in 0..n {
            for j in 0..n {
                let expect = ang.p2.get(i, j) / (2.0 * s.inertia_eff)
                    + if i == j { Complex64::new(HBAR * s.d_nv, 0.0) } else { Complex64::new(0.0, 0.0) }
                    + ang.cos.get(i, j) * (HBAR * s.g);
                assert!((h.get(i, j) - expect).norm() <= 1e-12 * HBAR * s.d_nv);
            }
        }
    }

    #[test]
    fn zeeman_guard() {
        let s = scales(-0.1, 0.0, 200e-9, 0.3);
        assert!(build_h_eff(&s, &triplet_rotor(2), true).is_err());
    }

    #[test]
    fn h_rot_commutes_with_s1_except_xi_term_at_compensation() {
        let omega = 2.0 * PI * 1e6;
        let s = scales(omega / crate::constants::GAMMA_NV, 1e6, 200e-9, 0.3);
        let basis = BasisSpec::new(Some(SpinSpace::Triplet), Some(AngleSpace::Rotor { cutoff: 2 }), Some(4)).unwrap();
        let h = build_h_rot(&s, &basis).unwrap().to_dense();
        let sp = spin1_operators();
        let s1 = crate::quantum::embed(&sp.s1, Factor::Spin, &basis).unwrap();
        let fock = fock_operators(4, s.inertia, s.omega_xi).unwrap();
        let xi_term = crate::quantum::embed(&sp.s3, Factor::Spin, &basis).unwrap();
        let xi = crate::quantum::embed(&fock.x.to_dense(), Factor::Libration, &basis).unwrap();
        let coupling = &(&xi_term * &xi) * s.zeeman;
        let lhs = h.commutator(&s1);
        let rhs = coupling.commutator(&s1);
        assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * rhs.max_abs());
    }

    #[test]
    fn h_rot_ground_state_second_order() {
        let omega = 2.0 * PI * 1e5;
        let comp = omega / crate::constants::GAMMA_NV;
        let mut s = scales(comp, 1e5, 200e-9, 0.3);
        // Keep every coupling far below the rotor spacing ħ/2I₃ so that the
        // ground level is non-degenerate.
        s.g = 0.5;
        s.d_nv = 2.0 * PI * 1e4;
        let basis = BasisSpec::new(Some(SpinSpace::Triplet), Some(AngleSpace::Rotor { cutoff: 2 }), Some(8)).unwrap();
        let h = build_h_rot(&s, &basis).unwrap().to_dense();
        // Unperturbed part: everything diagonal in the product basis.
        let n = h.dim();
        let diag: Vec<f64> = (0..n).map(|k| h.get(k, k).re).collect();
        let h0 = OperatorMatrix::from_real_diagonal(&diag);
        let v = &h - &h0;
        let k0 = (0..n).min_by(|&a, &b| diag[a].total_cmp(&diag[b])).unwrap();
        let e2: f64 = (0..n)
            .filter(|&k| k != k0)
            .map(|k| v.get(k, k0).norm_sqr() / (diag[k0] - diag[k]))
            .sum();
        let exact = hermitian_eig(&h).unwrap().values[0];
        let shift = exact - diag[k0];
        assert!(e2 < 0.0);
        assert!((shift - e2).abs() < 1e-3 * e2.abs(), "{shift} vs {e2}");
    }

    #[test]
    fn h_mag_sector_decoupling_and_surfaces() {
        let mut s = scales(-0.5e-3, 1e6, 200e-9, 0.3);
        s.delta = 0.0;
        let basis = BasisSpec::new(Some(SpinSpace::Doublet), Some(AngleSpace::Rotor { cutoff: 3 }), None).unwrap();
        let h = build_h_mag(&s, &basis).unwrap();
        for i in 0..7 {
            for j in 7..14 {
                assert_eq!(h.get(i, j), Complex64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn h_disp_upper_block_oscillates_at_omega_gamma() {
        let s = scales(-0.102, 1e5, 200e-9, 0.4);
        let w = s.gamma_zero_point().unwrap();
        let basis = BasisSpec::new(Some(SpinSpace::Doublet), Some(AngleSpace::Harmonic { dim: 12, width: w }), None).unwrap();
        let h = build_h_disp(&s, &basis).unwrap();
        let wg = s.omega_gamma.unwrap();
        for n in 0..12 {
            let expect = HBAR * s.detuning / 2.0 + HBAR * wg * (n as f64 + 0.5);
            assert!((h.get(n, n).re - expect).abs() <= 1e-10 * expect);
            for m in 0..12 {
                if m != n {
                    assert!(h.get(n, m).norm() <= 1e-10 * expect);
                }
            }
        }
    }

    #[test]
    fn h2_free_limit() {
        let omega = 2.0 * PI * 1e6;
        let s = scales(omega / crate::constants::GAMMA_NV, 1e6, 200e-9, 0.3);
        let basis = BasisSpec::new(Some(SpinSpace::Doublet), Some(AngleSpace::Harmonic { dim: 6, width: 1e-3 }), None).unwrap();
        let h = build_h2(&s, &basis).unwrap();
        let ang = AngleOperators::new(basis.angle().unwrap()).unwrap();
        for i in 0..12 {
            for j in 0..12 {
                let (si, sj) = (i / 6, j / 6);
                let mut expect = Complex64::new(0.0, 0.0);
                if si == sj {
                    expect += ang.p2.get(i % 6, j % 6) / (2.0 * s.inertia_eff);
                    if i == j {
                        expect += HBAR * s.detuning / 2.0 * if si == 0 { 1.0 } else { -1.0 };
                    }
                }
                assert!((h.get(i, j) - expect).norm() <= 1e-12 * HBAR * s.detuning);
            }
        }
    }

    #[test]
    fn h2_and_h_disp_low_spectra_agree() {
        let s = scales(-0.102, 1e5, 200e-9, 0.4);
        assert!(s.detuning / s.g < 0.05);
        let w = s.gamma_zero_point().unwrap();
        let d = 40;
        let basis = BasisSpec::new(Some(SpinSpace::Doublet), Some(AngleSpace::Harmonic { dim: d, width: w }), None).unwrap();
        let e2 = hermitian_eig(&build_h2(&s, &basis).unwrap().to_dense()).unwrap();
        let ed = hermitian_eig(&build_h_disp(&s, &basis).unwrap().to_dense()).unwrap();
        // Upper branch: the H_d levels ħΔ/2 + ħω_γ(n + 1/2); match each to the
        // closest H₂ eigenvector by overlap and compare excitation energies.
        let upper: Vec<usize> = (0..2 * d)
            .filter(|&k| (0..d).map(|i| ed.vectors.get(i, k).norm_sqr()).sum::<f64>() > 0.5)
            .collect();
        let best = |k: usize| -> usize {
            (0..2 * d)
                .max_by(|&a, &b| {
                    let ov = |c: usize| -> f64 {
                        (0..2 * d)
                            .map(|i| ed.vectors.get(i, k).conj() * e2.vectors.get(i, c))
                            .sum::<Complex64>()
                            .norm()
                    };
                    ov(a).total_cmp(&ov(b))
                })
                .unwrap()
        };
        let base_d = ed.values[upper[0]];
        let base_2 = e2.values[best(upper[0])];
        for &k in &upper[1..4] {
            let ex_d = ed.values[k] - base_d;
            let ex_2 = e2.values[best(k)] - base_2;
            assert!((ex_2 - ex_d).abs() <= 1e-2 * ex_d, "{ex_2} vs {ex_d}");
        }
    }

    #[test]
    fn misalignment_mixing_angle() {
        let s = scales(-0.055, 1e6, 200e-9, 0.3);
        let eps = 0.01;
        let block = misaligned_spin_block(&s, eps, 0.0);
        let e = hermitian_eig(&block).unwrap();
        // The |0⟩/|−1⟩ pair: find the eigenvector dominated by |0⟩.
        let k = (0..3).max_by(|&a, &b| e.vectors.get(1, a).norm().total_cmp(&e.vectors.get(1, b).norm())).unwrap();
        let theta = e.vectors.get(2, k).norm().atan2(e.vectors.get(1, k).norm());
        let expect = (2f64.sqrt() * eps * s.d_nv / s.detuning.abs()).atan() / 2.0;
        assert!((theta - expect).abs() < 1e-3 * expect, "{theta} vs {expect}");
        let basis = triplet_rotor(2);
        assert_eq!(build_h_misaligned(&s, 0.0, &basis).unwrap(), build_h_eff(&s, &basis, false).unwrap());
    }

    #[test]
    fn asymmetry_zero_is_identity_and_builders_hermitian() {
        let s = scales(-0.1, 1e6, 200e-9, 0.3);
        let basis = BasisSpec::new(Some(SpinSpace::Triplet), Some(AngleSpace::Rotor { cutoff: 2 }), Some(4)).unwrap();
        assert_eq!(build_h_asym(&s, 0.0, &basis).unwrap(), build_h_rot(&s, &basis).unwrap());
        let h = build_h_asym(&s, 1e-8, &basis).unwrap();
        assert!(h.hermiticity_deviation() <= HERMITIAN_TOL);
    }

    #[test]
    fn asymmetry_first_order_shift() {
        let omega = 2.0 * PI * 1e5;
        let mut s = scales(omega / crate::constants::GAMMA_NV, 1e5, 200e-9, 0.3);
        s.g = 0.5;
        s.d_nv = 2.0 * PI * 1e4;
        let basis = BasisSpec::new(Some(SpinSpace::Triplet), Some(AngleSpace::Rotor { cutoff: 3 }), Some(6)).unwrap();
        let h0 = build_h_rot(&s, &basis).unwrap().to_dense();
        let eig0 = hermitian_eig(&h0).unwrap();
        let psi = crate::quantum::StateVector::from_amplitudes(eig0.vectors.as_matrix().column(0).iter().copied().collect());
        let delta_i = 1e-19;
        let h1 = build_h_asym(&s, delta_i, &basis).unwrap();
        let dh = (&h1 - &build_h_rot(&s, &basis).unwrap()).to_dense();
        let first = crate::quantum::expectation(&dh, &psi).unwrap().re;
        let exact = hermitian_eig(&h1.to_dense()).unwrap().values[0] - eig0.values[0];
        // The leading term is the I ω² δ_I sin²γ/2 potential averaged over m = 0.
        let leading = s.inertia * delta_i * omega * omega / 4.0;
        assert!((first - leading).abs() < 0.1 * leading, "{first} vs {leading}");
        assert!((exact - first).abs() < 0.1 * first, "{exact} vs {first}");
    }

    #[test]
    fn secular_potential_shape_and_curvature() {
        let s = scales(0.0, 1e6, 200e-9, 0.3);
        let v = secular_potential_beta(&s, &[0.0, PI / 4.0, PI / 2.0]);
        assert_eq!(v[0], 0.0);
        assert!(v[2].abs() < 1e-30 * s.beta_potential.max(1.0));
        assert!((v[1] - s.beta_potential / 4.0).abs() < 1e-15 * s.beta_potential);
        let h = 1e-4;
        let f = secular_potential_beta(&s, &[PI / 2.0 - h, PI / 2.0, PI / 2.0 + h]);
        let curv = (f[0] - 2.0 * f[1] + f[2]) / (h * h);
        let expect = s.inertia * s.omega_beta.powi(2);
        assert!((curv - expect).abs() < 1e-6 * expect);
    }

    #[test]
    fn missing_factor_rejected() {
        let s = scales(-0.1, 1e6, 200e-9, 0.3);
        assert!(build_h_rot(&s, &triplet_rotor(2)).is_err());
        assert!(build_h2(&s, &triplet_rotor(2)).is_err());
    }
}
