//! Algebraic identities of the elementary operators, unitarity of the
//! propagators and accuracy of the eigensolver. Commutator tolerances are
//! relative to the product of the operators' largest entries.

use gyrospin_core::constants::HBAR;
use gyrospin_core::model::{build_h_eff, build_h_mag, derive_scales, Environment, FieldConfig, ParticleGeometry, TrapConfig};
use gyrospin_core::quantum::{
    fock_operators, hermitian_eig, pauli, rotor_operators, spin1_operators, AngleSpace, BasisSpec, OperatorMatrix,
    SpectralPropagator, SpinSpace,
};
use gyrospin_core::Complex64;
use std::f64::consts::PI;

fn i() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

#[test]
fn spin_one_algebra() {
    let s = spin1_operators();
    let ops = [&s.s1, &s.s2, &s.s3];
    let scale = HBAR * HBAR;
    for k in 0..3 {
        let (a, b, c) = (ops[k], ops[(k + 1) % 3], ops[(k + 2) % 3]);
        let lhs = a.commutator(b);
        let rhs = c.scale(i() * HBAR);
        assert!(lhs.max_abs_diff(&rhs) <= 1e-15 * scale);
    }
    let casimir = s.s1.as_matrix() * s.s1.as_matrix() + s.s2.as_matrix() * s.s2.as_matrix() + s.s3.as_matrix() * s.s3.as_matrix();
    let target = OperatorMatrix::identity(3).scale(Complex64::new(2.0 * scale, 0.0));
    assert!(OperatorMatrix::from_matrix(casimir).unwrap().max_abs_diff(&target) <= 1e-15 * scale);
}

#[test]
fn pauli_algebra() {
    let (x, y, z) = pauli();
    assert!(x.commutator(&y).max_abs_diff(&z.scale(2.0 * i())) <= 1e-15);
    assert!(y.commutator(&z).max_abs_diff(&x.scale(2.0 * i())) <= 1e-15);
    assert!(x.anticommutator(&x).max_abs_diff(&OperatorMatrix::identity(2).scale(Complex64::new(2.0, 0.0))) <= 1e-15);
}

#[test]
fn rotor_shift_commutator() {
    let r = rotor_operators(12).unwrap();
    let p = r.p.to_dense();
    let e = r.exp_i.to_dense();
    let lhs = p.commutator(&e);
    let scale = p.max_abs() * e.max_abs();
    assert!(lhs.max_abs_diff(&e.scale(Complex64::new(-HBAR, 0.0))) <= 1e-15 * scale);
    // cos² + sin² = 1 away from the truncation edge.
    let c = r.cos.to_dense();
    let s = r.sin.to_dense();
    let sum = c.as_matrix() * c.as_matrix() + s.as_matrix() * s.as_matrix();
    let n = c.dim();
    for k in 1..n - 1 {
        assert!((sum[(k, k)] - Complex64::new(1.0, 0.0)).norm() <= 1e-15);
    }
}

#[test]
fn canonical_pair_in_fock_basis() {
    let (inertia, omega) = (1e-33, 2.0 * PI * 1e5);
    let f = fock_operators(20, inertia, omega).unwrap();
    let (x, p) = (f.x.to_dense(), f.p.to_dense());
    let c = x.commutator(&p);
    let scale = x.max_abs() * p.max_abs();
    // Exact except on the last level, where truncation breaks the algebra.
    for k in 0..19 {
        assert!((c.get(k, k) - i() * HBAR).norm() <= 1e-15 * scale);
    }
}

fn scales() -> gyrospin_core::model::DerivedScales {
    derive_scales(
        &ParticleGeometry::prolate(200e-9, 0.3),
        &TrapConfig::default(),
        &FieldConfig::new(-0.5e-3, 2.0 * PI * 1e6),
        &Environment::default(),
    )
    .unwrap()
}

#[test]
fn propagators_are_unitary() {
    let s = scales();
    let basis = BasisSpec::new(Some(SpinSpace::Doublet), Some(AngleSpace::Rotor { cutoff: 30 }), None).unwrap();
    let h = build_h_mag(&s, &basis).unwrap().to_dense();
    let prop = SpectralPropagator::new(&h).unwrap();
    for t in [1e-9, 1e-6, 1e-4] {
        assert!(prop.unitary(t).unitarity_deviation() <= 1e-10, "t = {t}");
    }
}

#[test]
fn eigensolver_residual() {
    let s = derive_scales(
        &ParticleGeometry::prolate(200e-9, 0.4),
        &TrapConfig::default(),
        &FieldConfig::new(-0.102, 2.0 * PI * 1e5),
        &Environment::default(),
    )
    .unwrap();
    let w = s.gamma_zero_point().unwrap();
    let basis = BasisSpec::new(Some(SpinSpace::Triplet), Some(AngleSpace::Harmonic { dim: 24, width: w }), None).unwrap();
    let h = build_h_eff(&s, &basis, true).unwrap().to_dense();
    let e = hermitian_eig(&h).unwrap();
    assert!(e.residual(&h) <= 1e-9);
    assert!(e.values.windows(2).all(|p| p[0] <= p[1]));
    assert!(e.vectors.unitarity_deviation() <= 1e-10);
}
