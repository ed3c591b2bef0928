//! Pure and mixed states.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::eigen::hermitian_eig;
use super::operator::OperatorMatrix;
use super::sparse::SparseOperator;
use crate::constants::K_B;
use crate::error::{check_finite, Error, Result};

/// Tolerance on state normalization and density-matrix trace.
pub const NORM_TOL: f64 = 1e-10;
/// Largest weight a truncated coherent state may lose.
pub const COHERENT_LOSS_LIMIT: f64 = 1e-8;

/// Complex amplitude vector.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector(DVector<Complex64>);

impl StateVector {
    /// Wraps amplitudes without renormalizing.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Self {
        Self(DVector::from_vec(amplitudes))
    }

    /// Wraps amplitudes and divides by their norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let v = DVector::from_vec(amplitudes);
        let n = v.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::Numerical(format!("cannot normalize a vector of norm {n}")));
        }
        Ok(Self(v / Complex64::new(n, 0.0)))
    }

    /// Basis state |k⟩ in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: k + 1,
            });
        }
        let mut v = DVector::zeros(dim);
        v[k] = Complex64::new(1.0, 0.0);
        Ok(Self(v))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        self.0.as_slice()
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        self.0.as_mut_slice()
    }

    pub fn as_vector(&self) -> &DVector<Complex64> {
        &self.0
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.0.dotc(&other.0))
    }

    /// |a_k|² for every basis state.
    pub fn populations(&self) -> Vec<f64> {
        self.0.iter().map(|z| z.norm_sqr()).collect()
    }

    /// self ⊗ other.
    pub fn tensor(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    /// Applies a dense operator.
    pub fn apply(&self, op: &OperatorMatrix) -> Result<Self> {
        check_dim(op.dim(), self.dim())?;
        Ok(Self(op.as_matrix() * &self.0))
    }

    /// Applies a sparse operator.
    pub fn apply_sparse(&self, op: &SparseOperator) -> Result<Self> {
        check_dim(op.dim(), self.dim())?;
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        op.matvec(self.amplitudes(), &mut out);
        Ok(Self::from_amplitudes(out))
    }

    /// ⟨ψ|A|ψ⟩ for a sparse operator.
    pub fn expectation_sparse(&self, op: &SparseOperator) -> Result<Complex64> {
        let applied = self.apply_sparse(op)?;
        self.inner(&applied)
    }
}

/// Density operator ρ, Hermitian with unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(OperatorMatrix);

impl DensityMatrix {
    /// Validates hermiticity, trace and positivity.
    pub fn new(rho: OperatorMatrix) -> Result<Self> {
        if !rho.is_hermitian() {
            return Err(Error::NotHermitian {
                deviation: rho.hermiticity_deviation(),
            });
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(Error::Numerical(format!("density matrix trace {tr} differs from 1")));
        }
        let eig = hermitian_eig(&rho)?;
        if eig.values[0] < -NORM_TOL {
            return Err(Error::Numerical(format!(
                "density matrix has negative eigenvalue {:e}",
                eig.values[0]
            )));
        }
        Ok(Self(rho))
    }

    /// |ψ⟩⟨ψ|.
    pub fn pure(psi: &StateVector) -> Self {
        let v = psi.as_vector();
        Self(OperatorMatrix::from_matrix(v * v.adjoint()).expect("square"))
    }

    pub(crate) fn from_trusted(rho: OperatorMatrix) -> Self {
        Self(rho)
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_operator(&self) -> &OperatorMatrix {
        &self.0
    }

    /// Diagonal populations ρ_kk.
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.0.get(k, k).re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// ρ ⊗ σ.
    pub fn tensor(&self, other: &Self) -> Self {
        Self(self.0.tensor(&other.0))
    }

    /// U ρ U†.
    pub fn conjugate(&self, u: &OperatorMatrix) -> Result<Self> {
        check_dim(u.dim(), self.dim())?;
        let m = u.as_matrix() * self.0.as_matrix() * u.as_matrix().adjoint();
        Ok(Self(OperatorMatrix::from_matrix(m)?))
    }
}

/// States that support expectation values.
pub trait QuantumState {
    fn expectation(&self, op: &OperatorMatrix) -> Result<Complex64>;
}

impl QuantumState for StateVector {
    fn expectation(&self, op: &OperatorMatrix) -> Result<Complex64> {
        let applied = self.apply(op)?;
        self.inner(&applied)
    }
}

impl QuantumState for DensityMatrix {
    fn expectation(&self, op: &OperatorMatrix) -> Result<Complex64> {
        check_dim(op.dim(), self.dim())?;
        let a = self.0.as_matrix();
        let b = op.as_matrix();
        let n = self.dim();
        let mut tr = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                tr += a[(i, k)] * b[(k, i)];
            }
        }
        Ok(tr)
    }
}

/// ⟨ψ|A|ψ⟩ or Tr(ρA).
pub fn expectation<S: QuantumState>(op: &OperatorMatrix, state: &S) -> Result<Complex64> {
    state.expectation(op)
}

/// Truncated coherent state |α⟩ in a Fock space of dimension `dim`.
pub fn coherent_state(dim: usize, alpha: Complex64) -> Result<StateVector> {
    if dim < 1 {
        return Err(Error::InvalidBasis("Fock dimension must be positive".into()));
    }
    if !(alpha.re.is_finite() && alpha.im.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            reason: "must be finite".into(),
        });
    }
    let mut amps = Vec::with_capacity(dim);
    let mut c = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..dim {
        if n > 0 {
            c *= alpha / (n as f64).sqrt();
        }
        amps.push(c);
    }
    let kept: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    let lost = 1.0 - kept;
    if lost > COHERENT_LOSS_LIMIT {
        return Err(Error::TruncationLoss {
            time: 0.0,
            weight: lost,
            limit: COHERENT_LOSS_LIMIT,
        });
    }
    StateVector::normalized(amps)
}

/// Lowest eigenvector of a Hermitian operator.
pub fn ground_state(h: &OperatorMatrix) -> Result<StateVector> {
    let eig = hermitian_eig(h)?;
    let v = eig.vectors.as_matrix().column(0).clone_owned();
    StateVector::normalized(v.iter().copied().collect())
}

/// Gibbs state exp(−H/k_BT)/Z; T = 0 gives the ground-state projector.
pub fn thermal_density(h: &OperatorMatrix, temperature: f64) -> Result<DensityMatrix> {
    check_finite("temperature", temperature, false)?;
    if temperature < 0.0 {
        return Err(Error::InvalidParameter {
            name: "temperature",
            reason: format!("must be non-negative, got {temperature}"),
        });
    }
    if temperature == 0.0 {
        return Ok(DensityMatrix::pure(&ground_state(h)?));
    }
    let eig = hermitian_eig(h)?;
    let e0 = eig.values[0];
    let beta = 1.0 / (K_B * temperature);
    let weights: Vec<f64> = eig.values.iter().map(|e| (-(e - e0) * beta).exp()).collect();
    let z: f64 = weights.iter().sum();
    let v = eig.vectors.as_matrix();
    let n = v.nrows();
    let mut vw = v.clone();
    for (j, w) in weights.iter().enumerate() {
        for x in vw.column_mut(j).iter_mut() {
            *x *= w / z;
        }
    }
    let rho: DMatrix<Complex64> = vw * v.adjoint();
    let rho = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
    debug_assert_eq!(rho.nrows(), n);
    Ok(DensityMatrix::from_trusted(OperatorMatrix::from_matrix(rho)?))
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::HBAR;
    use crate::quantum::ops::{fock_operators, number, spin1_operators};

    #[test]
    fn coherent_zero_is_vacuum() {
        let psi = coherent_state(5, Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(psi, StateVector::basis(5, 0).unwrap());
    }

    #[test]
    fn coherent_truncation_loss_reported() {
        assert!(matches!(
            coherent_state(4, Complex64::new(3.0, 0.0)),
            Err(Error::TruncationLoss { .. })
        ));
    }

    #[test]
    fn thermal_occupation_matches_bose_einstein() {
        let omega = 1.0e9;
        let t = HBAR * omega / K_B;
        let f = fock_operators(80, 1e-30, omega).unwrap();
        let rho = thermal_density(&f.h.to_dense(), t).unwrap();
        let n = expectation(&number(80).to_dense(), &rho).unwrap().re;
        let expect = 1.0 / (std::f64::consts::E - 1.0);
        assert!((n - expect).abs() < 1e-10, "{n} vs {expect}");
        assert!((rho.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn thermal_zero_temperature_is_ground_projector() {
        let f = fock_operators(6, 1e-30, 1e6).unwrap();
        let rho = thermal_density(&f.h.to_dense(), 0.0).unwrap();
        assert!((rho.populations()[0] - 1.0).abs() < 1e-12);
        assert!(thermal_density(&f.h.to_dense(), -1.0).is_err());
    }

    #[test]
    fn expectation_examples() {
        let s = spin1_operators();
        let up = StateVector::basis(3, 0).unwrap();
        assert!((expectation(&s.s1, &up).unwrap().re - HBAR).abs() < 1e-40);
        let id = OperatorMatrix::identity(3);
        assert_eq!(expectation(&id, &DensityMatrix::pure(&up)).unwrap().re, 1.0);
        assert!(expectation(&OperatorMatrix::identity(2), &up).is_err());
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::new(OperatorMatrix::from_real_diagonal(&[0.5, 0.5])).is_ok());
        assert!(DensityMatrix::new(OperatorMatrix::from_real_diagonal(&[1.5, -0.5])).is_err());
        assert!(DensityMatrix::new(OperatorMatrix::from_real_diagonal(&[0.5, 0.6])).is_err());
    }
}
