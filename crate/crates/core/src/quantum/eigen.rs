//! Hermitian eigensolver backed by nalgebra's Householder tridiagonalization
//! and implicit symmetric QR sweeps.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::operator::{OperatorMatrix, HERMITIAN_TOL};
use crate::error::{Error, Result};

/// Residual bound, max|HV − VΛ| ≤ tol·max|Λ|.
pub const EIGEN_RESIDUAL_TOL: f64 = 1e-9;
const MAX_SWEEPS: usize = 100_000;

/// Spectral decomposition H = V Λ V† with ascending eigenvalues.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: OperatorMatrix,
}

impl Eigen {
    /// max|HV − VΛ| / max|Λ|.
    pub fn residual(&self, h: &OperatorMatrix) -> f64 {
        let v = self.vectors.as_matrix();
        let mut vl = v.clone();
        for (j, &lam) in self.values.iter().enumerate() {
            vl.column_mut(j).scale_mut(lam);
        }
        let r = h.as_matrix() * v - vl;
        let scale = self.values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let worst = r.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if scale == 0.0 {
            worst
        } else {
            worst / scale
        }
    }

    /// f(H) = V f(Λ) V†.
    pub fn map(&self, f: impl Fn(f64) -> Complex64) -> OperatorMatrix {
        let v = self.vectors.as_matrix();
        let mut vf = v.clone();
        for (j, &lam) in self.values.iter().enumerate() {
            let fj = f(lam);
            for x in vf.column_mut(j).iter_mut() {
                *x *= fj;
            }
        }
        OperatorMatrix::from_matrix(vf * v.adjoint()).expect("square")
    }
}

/// Diagonalizes a Hermitian operator, eigenvalues ascending.
pub fn hermitian_eig(h: &OperatorMatrix) -> Result<Eigen> {
    let dev = h.hermiticity_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let m = h.as_matrix();
    let sym = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, MAX_SWEEPS)
        .ok_or_else(|| Error::Numerical("Hermitian eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let n = m.nrows();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    let out = Eigen {
        values,
        vectors: OperatorMatrix::from_matrix(vectors)?,
    };
    let res = out.residual(h);
    if res > EIGEN_RESIDUAL_TOL {
        return Err(Error::Numerical(format!(
            "eigen-decomposition residual {res:e} exceeds {EIGEN_RESIDUAL_TOL:e}"
        )));
    }
    Ok(out)
}

/// Real symmetric counterpart returning (ascending values, orthogonal vectors).
pub fn real_symmetric_eig(m: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let n = m.nrows();
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, MAX_SWEEPS)
        .ok_or_else(|| Error::Numerical("symmetric eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((values, vectors))
}
