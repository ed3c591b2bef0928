//! Dense complex operators.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::basis::{BasisSpec, Factor};
use crate::error::{Error, Result};

/// Relative tolerance for the Hermitian check, max|A − A†| ≤ tol·max|A|.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Absolute tolerance for the unitary check, max|A†A − 1| ≤ tol.
pub const UNITARY_TOL: f64 = 1e-10;

/// Square complex matrix acting on a product basis.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix(DMatrix<Complex64>);

impl OperatorMatrix {
    /// Wraps a square matrix.
    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        Ok(Self(m))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    /// Builds a matrix from row-major entries.
    pub fn from_rows(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Ok(Self(DMatrix::from_row_slice(dim, dim, entries)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Largest entry modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    /// max|A − A†| / max|A|, or 0 for the zero matrix.
    pub fn hermiticity_deviation(&self) -> f64 {
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst / scale
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_deviation() <= HERMITIAN_TOL
    }

    /// max|A†A − 1|.
    pub fn unitarity_deviation(&self) -> f64 {
        let prod = self.0.adjoint() * &self.0;
        Self(prod).max_abs_diff(&Self::identity(self.dim()))
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_deviation() <= UNITARY_TOL
    }

    /// AB − BA.
    pub fn commutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }

    /// AB + BA.
    pub fn anticommutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 + &other.0 * &self.0)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self(&self.0 * c)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }
}

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &OperatorMatrix, b: &OperatorMatrix) -> OperatorMatrix {
    a.tensor(b)
}

/// Places `op` on `factor` of `basis`, padding every other factor with the
/// identity.
pub fn embed(op: &OperatorMatrix, factor: Factor, basis: &BasisSpec) -> Result<OperatorMatrix> {
    let (left, n, right) = basis.strides(factor)?;
    if op.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: op.dim(),
        });
    }
    Ok(OperatorMatrix::identity(left)
        .tensor(op)
        .tensor(&OperatorMatrix::identity(right)))
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    /// # Panics
    /// If the dimensions differ.
    fn add(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix(&self.0 - &rhs.0)
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix(&self.0 * &rhs.0)
    }
}

impl Mul<f64> for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: f64) -> OperatorMatrix {
        OperatorMatrix(&self.0 * Complex64::new(rhs, 0.0))
    }
}

impl Mul<Complex64> for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: Complex64) -> OperatorMatrix {
        OperatorMatrix(&self.0 * rhs)
    }
}

impl Neg for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn neg(self) -> OperatorMatrix {
        OperatorMatrix(-&self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::basis::{AngleSpace, SpinSpace};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let t = tensor(&OperatorMatrix::identity(3), &OperatorMatrix::identity(5));
        assert_eq!(t, OperatorMatrix::identity(15));
    }

    #[test]
    fn tensor_of_diagonals_by_hand() {
        let a = OperatorMatrix::from_real_diagonal(&[1.0, 2.0]);
        let b = OperatorMatrix::from_real_diagonal(&[3.0, 4.0]);
        assert_eq!(tensor(&a, &b), OperatorMatrix::from_real_diagonal(&[3.0, 4.0, 6.0, 8.0]));
    }

    #[test]
    fn embed_checks_dimension() {
        let basis = BasisSpec::new(
            Some(SpinSpace::Triplet),
            Some(AngleSpace::Rotor { cutoff: 2 }),
            None,
        )
        .unwrap();
        let bad = OperatorMatrix::identity(4);
        assert!(matches!(
            embed(&bad, Factor::Angle, &basis),
            Err(Error::DimensionMismatch { expected: 5, found: 4 })
        ));
        assert_eq!(embed(&OperatorMatrix::identity(3), Factor::Spin, &basis).unwrap().dim(), 15);
    }

    #[test]
    fn hermiticity_flags() {
        let h = OperatorMatrix::from_rows(2, &[c(1.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0), c(2.0)])
            .unwrap();
        assert!(h.is_hermitian());
        let nh = OperatorMatrix::from_rows(2, &[c(1.0), c(1.0), c(0.0), c(2.0)]).unwrap();
        assert!(!nh.is_hermitian());
        assert!(OperatorMatrix::identity(4).is_unitary());
    }
}
