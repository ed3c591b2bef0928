//! Elementary operators for each tensor factor.

use num_complex::Complex64;

use super::operator::OperatorMatrix;
use super::sparse::SparseOperator;
use crate::constants::HBAR;
use crate::error::{check_finite, Error, Result};

/// Spin-1 operators in the S1 eigenbasis ordered (+ħ, 0, −ħ).
#[derive(Clone, Debug)]
pub struct SpinOperators {
    pub s1: OperatorMatrix,
    pub s2: OperatorMatrix,
    pub s3: OperatorMatrix,
}

pub fn spin1_operators() -> SpinOperators {
    let z = Complex64::new(0.0, 0.0);
    let r = Complex64::new(HBAR / 2f64.sqrt(), 0.0);
    let i = Complex64::new(0.0, HBAR / 2f64.sqrt());
    let s1 = OperatorMatrix::from_real_diagonal(&[HBAR, 0.0, -HBAR]);
    let s2 = OperatorMatrix::from_rows(3, &[z, r, z, r, z, r, z, r, z]).expect("3x3");
    let s3 = OperatorMatrix::from_rows(3, &[z, -i, z, i, z, -i, z, i, z]).expect("3x3");
    SpinOperators { s1, s2, s3 }
}

/// Dimensionless Pauli matrices (σx, σy, σz).
pub fn pauli() -> (OperatorMatrix, OperatorMatrix, OperatorMatrix) {
    let z = Complex64::new(0.0, 0.0);
    let o = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    (
        OperatorMatrix::from_rows(2, &[z, o, o, z]).expect("2x2"),
        OperatorMatrix::from_rows(2, &[z, -i, i, z]).expect("2x2"),
        OperatorMatrix::from_real_diagonal(&[1.0, -1.0]),
    )
}

/// Planar-rotor operators on |m⟩, m = −L..=L.
///
/// `exp_i` lowers the momentum label, `exp_i|m⟩ = |m−1⟩`, so that
/// `[p, exp_i] = −ħ exp_i`.
#[derive(Clone, Debug)]
pub struct RotorOperators {
    pub p: SparseOperator,
    pub exp_i: SparseOperator,
    pub cos: SparseOperator,
    pub sin: SparseOperator,
}

pub fn rotor_operators(cutoff: usize) -> Result<RotorOperators> {
    if cutoff < 1 {
        return Err(Error::InvalidBasis(format!(
            "rotor cutoff must be at least 1, got {cutoff}"
        )));
    }
    let n = 2 * cutoff + 1;
    let p = SparseOperator::from_real_diagonal(&momentum_labels(cutoff).map(|m| HBAR * m).collect::<Vec<_>>());
    let exp_i = rotor_shift(cutoff, 1);
    let exp_mi = exp_i.adjoint();
    let half = Complex64::new(0.5, 0.0);
    let cos = (&exp_i + &exp_mi).scale(half);
    let sin = (&exp_i - &exp_mi).scale(Complex64::new(0.0, -0.5));
    debug_assert_eq!(cos.dim(), n);
    Ok(RotorOperators { p, exp_i, cos, sin })
}

/// Momentum labels m = −L..=L as floats.
pub fn momentum_labels(cutoff: usize) -> impl Iterator<Item = f64> {
    let l = cutoff as i64;
    (-l..=l).map(|m| m as f64)
}

/// e^{ikγ} on the rotor basis: |m⟩ → |m−k⟩, truncated at the edges.
pub fn rotor_shift(cutoff: usize, k: usize) -> SparseOperator {
    let n = 2 * cutoff + 1;
    let one = Complex64::new(1.0, 0.0);
    let entries = (k..n).map(|j| (j - k, j, one)).collect();
    SparseOperator::from_triplets(n, entries).expect("indices in range")
}

/// Oscillator operators on a truncated Fock space.
#[derive(Clone, Debug)]
pub struct FockOperators {
    /// Position-like coordinate x₀(a + a†).
    pub x: SparseOperator,
    /// Conjugate momentum i√(ħIω/2)(a† − a).
    pub p: SparseOperator,
    /// ħω(n + 1/2), exactly diagonal.
    pub h: SparseOperator,
    /// Zero-point length x₀ = √(ħ/2Iω).
    pub zero_point: f64,
}

pub fn fock_operators(dim: usize, inertia: f64, frequency: f64) -> Result<FockOperators> {
    if dim < 2 {
        return Err(Error::InvalidBasis(format!(
            "Fock dimension must be at least 2, got {dim}"
        )));
    }
    check_finite("inertia", inertia, true)?;
    check_finite("frequency", frequency, true)?;
    let x0 = (HBAR / (2.0 * inertia * frequency)).sqrt();
    let p0 = (HBAR * inertia * frequency / 2.0).sqrt();
    let a = annihilation(dim);
    let ad = a.adjoint();
    let x = (&a + &ad).scale(Complex64::new(x0, 0.0));
    let p = (&ad - &a).scale(Complex64::new(0.0, p0));
    let h = SparseOperator::from_real_diagonal(
        &(0..dim).map(|n| HBAR * frequency * (n as f64 + 0.5)).collect::<Vec<_>>(),
    );
    Ok(FockOperators {
        x,
        p,
        h,
        zero_point: x0,
    })
}

/// Truncated annihilation operator, a|n⟩ = √n |n−1⟩.
pub fn annihilation(dim: usize) -> SparseOperator {
    let entries = (1..dim)
        .map(|n| (n - 1, n, Complex64::new((n as f64).sqrt(), 0.0)))
        .collect();
    SparseOperator::from_triplets(dim, entries).expect("indices in range")
}

/// Number operator diag(0, 1, …, d−1).
pub fn number(dim: usize) -> SparseOperator {
    SparseOperator::from_real_diagonal(&(0..dim).map(|n| n as f64).collect::<Vec<_>>())
}

/// (a + a†)² evaluated from ladder algebra, free of truncation artefacts
/// in the last row.
pub fn quadrature_squared(dim: usize, sign: f64) -> SparseOperator {
    let mut entries = Vec::with_capacity(3 * dim);
    for n in 0..dim {
        entries.push((n, n, Complex64::new(2.0 * n as f64 + 1.0, 0.0)));
        if n + 2 < dim {
            let v = Complex64::new(sign * ((n + 1) as f64 * (n + 2) as f64).sqrt(), 0.0);
            entries.push((n, n + 2, v));
            entries.push((n + 2, n, v));
        }
    }
    SparseOperator::from_triplets(dim, entries).expect("indices in range")
}
