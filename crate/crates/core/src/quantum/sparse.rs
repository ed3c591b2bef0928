//! Compressed-sparse-row operators for the large rotor bases.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::basis::{BasisSpec, Factor};
use super::operator::OperatorMatrix;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Square complex matrix in CSR layout with sorted column indices per row.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
}

impl SparseOperator {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            row_ptr: vec![0; dim + 1],
            cols: Vec::new(),
            vals: Vec::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal(vec![Complex64::new(1.0, 0.0); dim])
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self::from_diagonal(diag.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn from_diagonal(diag: Vec<Complex64>) -> Self {
        let dim = diag.len();
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::with_capacity(dim);
        let mut vals = Vec::with_capacity(dim);
        row_ptr.push(0);
        for (i, v) in diag.into_iter().enumerate() {
            if v != ZERO {
                cols.push(i);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        Self {
            dim,
            row_ptr,
            cols,
            vals,
        }
    }

    /// Assembles from (row, col, value) entries, summing duplicates and
    /// dropping exact zeros.
    pub fn from_triplets(dim: usize, mut entries: Vec<(usize, usize, Complex64)>) -> Result<Self> {
        if let Some(&(r, c, _)) = entries.iter().find(|(r, c, _)| *r >= dim || *c >= dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: r.max(c) + 1,
            });
        }
        entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(entries.len());
        let mut vals: Vec<Complex64> = Vec::with_capacity(entries.len());
        let mut rows = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            if rows.last() == Some(&r) && cols.last() == Some(&c) {
                *vals.last_mut().expect("non-empty") += v;
            } else {
                rows.push(r);
                cols.push(c);
                vals.push(v);
            }
        }
        let mut out_cols = Vec::with_capacity(cols.len());
        let mut out_vals = Vec::with_capacity(vals.len());
        for ((r, c), v) in rows.into_iter().zip(cols).zip(vals) {
            if v != ZERO {
                row_ptr[r + 1] += 1;
                out_cols.push(c);
                out_vals.push(v);
            }
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(Self {
            dim,
            row_ptr,
            cols: out_cols,
            vals: out_vals,
        })
    }

    pub fn from_dense(op: &OperatorMatrix) -> Self {
        let n = op.dim();
        let m = op.as_matrix();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for i in 0..n {
            for j in 0..n {
                let v = m[(i, j)];
                if v != ZERO {
                    cols.push(j);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        Self {
            dim: n,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn to_dense(&self) -> OperatorMatrix {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (i, j, v) in self.iter() {
            m[(i, j)] = v;
        }
        OperatorMatrix::from_matrix(m).expect("square by construction")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Iterates over stored (row, col, value) entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.dim).flat_map(move |i| {
            (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (i, self.cols[k], self.vals[k]))
        })
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        let range = self.row_ptr[row]..self.row_ptr[row + 1];
        match self.cols[range.clone()].binary_search(&col) {
            Ok(k) => self.vals[range.start + k],
            Err(_) => ZERO,
        }
    }

    /// Diagonal entries.
    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn adjoint(&self) -> Self {
        let entries = self.iter().map(|(i, j, v)| (j, i, v.conj())).collect();
        Self::from_triplets(self.dim, entries).expect("indices in range")
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        out.vals.iter_mut().for_each(|v| *v *= c);
        out
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, other: &Self, c: Complex64) -> Result<Self> {
        self.check_dim(other)?;
        let mut row_ptr = Vec::with_capacity(self.dim + 1);
        let mut cols = Vec::with_capacity(self.nnz() + other.nnz());
        let mut vals = Vec::with_capacity(self.nnz() + other.nnz());
        row_ptr.push(0);
        for i in 0..self.dim {
            let (mut a, ae) = (self.row_ptr[i], self.row_ptr[i + 1]);
            let (mut b, be) = (other.row_ptr[i], other.row_ptr[i + 1]);
            while a < ae || b < be {
                let ca = if a < ae { self.cols[a] } else { usize::MAX };
                let cb = if b < be { other.cols[b] } else { usize::MAX };
                let (col, v) = if ca < cb {
                    a += 1;
                    (ca, self.vals[a - 1])
                } else if cb < ca {
                    b += 1;
                    (cb, c * other.vals[b - 1])
                } else {
                    a += 1;
                    b += 1;
                    (ca, self.vals[a - 1] + c * other.vals[b - 1])
                };
                if v != ZERO {
                    cols.push(col);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        Ok(Self {
            dim: self.dim,
            row_ptr,
            cols,
            vals,
        })
    }

    /// Sparse matrix product `self · other`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut acc = vec![ZERO; n];
        let mut touched = vec![false; n];
        let mut pattern = Vec::new();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for i in 0..n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let (j, a) = (self.cols[k], self.vals[k]);
                for l in other.row_ptr[j]..other.row_ptr[j + 1] {
                    let c = other.cols[l];
                    if !touched[c] {
                        touched[c] = true;
                        pattern.push(c);
                    }
                    acc[c] += a * other.vals[l];
                }
            }
            pattern.sort_unstable();
            for &c in &pattern {
                if acc[c] != ZERO {
                    cols.push(c);
                    vals.push(acc[c]);
                }
                acc[c] = ZERO;
                touched[c] = false;
            }
            pattern.clear();
            row_ptr.push(cols.len());
        }
        Ok(Self {
            dim: n,
            row_ptr,
            cols,
            vals,
        })
    }

    /// (AB + BA)/2, the symmetrized product of two operators.
    pub fn symmetrized_product(&self, other: &Self) -> Result<Self> {
        let ab = self.matmul(other)?;
        let ba = other.matmul(self)?;
        Ok(ab.add_scaled(&ba, Complex64::new(1.0, 0.0))?.scale(Complex64::new(0.5, 0.0)))
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let n = self.dim * other.dim;
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::with_capacity(self.nnz() * other.nnz());
        let mut vals = Vec::with_capacity(self.nnz() * other.nnz());
        row_ptr.push(0);
        for i in 0..self.dim {
            for p in 0..other.dim {
                for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                    let (j, a) = (self.cols[k], self.vals[k]);
                    for l in other.row_ptr[p]..other.row_ptr[p + 1] {
                        cols.push(j * other.dim + other.cols[l]);
                        vals.push(a * other.vals[l]);
                    }
                }
                row_ptr.push(cols.len());
            }
        }
        Self {
            dim: n,
            row_ptr,
            cols,
            vals,
        }
    }

    /// Places `op` on `factor` of `basis`, padding with identities.
    pub fn embed(op: &Self, factor: Factor, basis: &BasisSpec) -> Result<Self> {
        let (left, n, right) = basis.strides(factor)?;
        if op.dim != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: op.dim,
            });
        }
        Ok(Self::identity(left).kron(op).kron(&Self::identity(right)))
    }

    /// y = A x.
    pub fn matvec(&self, x: &[Complex64], y: &mut [Complex64]) {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(y.len(), self.dim);
        for (i, yi) in y.iter_mut().enumerate() {
            let mut s = ZERO;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.vals[k] * x[self.cols[k]];
            }
            *yi = s;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.vals.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// Largest absolute row sum, an upper bound on the spectral radius.
    pub fn row_sum_norm(&self) -> f64 {
        (0..self.dim)
            .map(|i| {
                (self.row_ptr[i]..self.row_ptr[i + 1])
                    .map(|k| self.vals[k].norm())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// max|A − A†| / max|A|.
    pub fn hermiticity_deviation(&self) -> f64 {
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        let diff = self
            .add_scaled(&self.adjoint(), Complex64::new(-1.0, 0.0))
            .expect("same dimension");
        diff.max_abs() / scale
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }
}

impl Add for &SparseOperator {
    type Output = SparseOperator;
    /// # Panics
    /// If the dimensions differ.
    fn add(self, rhs: Self) -> SparseOperator {
        self.add_scaled(rhs, Complex64::new(1.0, 0.0))
            .expect("operator dimensions must agree")
    }
}

impl Sub for &SparseOperator {
    type Output = SparseOperator;
    fn sub(self, rhs: Self) -> SparseOperator {
        self.add_scaled(rhs, Complex64::new(-1.0, 0.0))
            .expect("operator dimensions must agree")
    }
}

impl Mul for &SparseOperator {
    type Output = SparseOperator;
    fn mul(self, rhs: Self) -> SparseOperator {
        self.matmul(rhs).expect("operator dimensions must agree")
    }
}

impl Mul<f64> for &SparseOperator {
    type Output = SparseOperator;
    fn mul(self, rhs: f64) -> SparseOperator {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

impl Mul<Complex64> for &SparseOperator {
    type Output = SparseOperator;
    fn mul(self, rhs: Complex64) -> SparseOperator {
        self.scale(rhs)
    }
}

impl Neg for &SparseOperator {
    type Output = SparseOperator;
    fn neg(self) -> SparseOperator {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rand_dense(n: usize, seed: u64) -> OperatorMatrix {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let x = ((s >> 33) as f64) / (1u64 << 31) as f64 - 0.5;
            if x.abs() < 0.2 {
                0.0
            } else {
                x
            }
        };
        let entries: Vec<Complex64> = (0..n * n).map(|_| Complex64::new(next(), next())).collect();
        OperatorMatrix::from_rows(n, &entries).unwrap()
    }

    #[test]
    fn dense_round_trip() {
        let a = rand_dense(5, 1);
        assert_eq!(SparseOperator::from_dense(&a).to_dense(), a);
    }

    #[test]
    fn products_match_dense() {
        let a = rand_dense(4, 2);
        let b = rand_dense(4, 3);
        let (sa, sb) = (SparseOperator::from_dense(&a), SparseOperator::from_dense(&b));
        assert!(sa.matmul(&sb).unwrap().to_dense().max_abs_diff(&(&a * &b)) < 1e-14);
        assert!(sa.kron(&sb).to_dense().max_abs_diff(&a.tensor(&b)) < 1e-14);
        assert!((&sa - &sb).to_dense().max_abs_diff(&(&a - &b)) < 1e-14);
        assert!(sa.adjoint().to_dense().max_abs_diff(&a.adjoint()) < 1e-15);
    }

    #[test]
    fn matvec_matches_dense() {
        let a = rand_dense(6, 4);
        let x: Vec<Complex64> = (0..6).map(|k| Complex64::new(k as f64, 1.0 - k as f64)).collect();
        let mut y = vec![ZERO; 6];
        SparseOperator::from_dense(&a).matvec(&x, &mut y);
        for i in 0..6 {
            let expect: Complex64 = (0..6).map(|j| a.get(i, j) * x[j]).sum();
            assert!((y[i] - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn triplets_sum_duplicates_and_drop_zeros() {
        let one = Complex64::new(1.0, 0.0);
        let op = SparseOperator::from_triplets(2, vec![(0, 1, one), (0, 1, one), (1, 0, one), (1, 0, -one)]).unwrap();
        assert_eq!(op.nnz(), 1);
        assert_eq!(op.get(0, 1), Complex64::new(2.0, 0.0));
        assert!(SparseOperator::from_triplets(2, vec![(2, 0, one)]).is_err());
    }
}
