//! Unitary propagation with automatic dense/Krylov dispatch and truncation
//! diagnostics.

use num_complex::Complex64;

use super::basis::BasisSpec;
use super::eigen::{hermitian_eig, Eigen};
use super::krylov::{KrylovOptions, KrylovPropagator};
use super::operator::OperatorMatrix;
use super::sparse::SparseOperator;
use super::state::{StateVector, NORM_TOL};
use crate::constants::HBAR;
use crate::error::{Error, Result};

/// Largest dimension propagated by dense diagonalization under `Method::Auto`.
pub const DENSE_LIMIT: usize = 2000;
/// Default bound on the population in the outermost truncation layers.
pub const EDGE_LIMIT: f64 = 1e-6;

/// Sampled states ψ(t_k).
#[derive(Clone, Debug)]
pub struct StateTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<StateVector>,
}

/// exp(−iHt/ħ) through a cached eigendecomposition.
#[derive(Clone, Debug)]
pub struct SpectralPropagator {
    eig: Eigen,
}

impl SpectralPropagator {
    pub fn new(h: &OperatorMatrix) -> Result<Self> {
        Ok(Self { eig: hermitian_eig(h)? })
    }

    pub fn eigen(&self) -> &Eigen {
        &self.eig
    }

    /// V exp(−iΛt/ħ) V† ψ.
    pub fn apply(&self, psi: &StateVector, t: f64) -> Result<StateVector> {
        let v = self.eig.vectors.as_matrix();
        if psi.dim() != v.nrows() {
            return Err(Error::DimensionMismatch {
                expected: v.nrows(),
                found: psi.dim(),
            });
        }
        if t == 0.0 {
            return Ok(psi.clone());
        }
        let mut c = v.adjoint() * psi.as_vector();
        for (ck, &lam) in c.iter_mut().zip(&self.eig.values) {
            *ck *= Complex64::from_polar(1.0, -lam * t / HBAR);
        }
        Ok(StateVector::from_amplitudes((v * c).iter().copied().collect()))
    }

    /// The full unitary exp(−iHt/ħ).
    pub fn unitary(&self, t: f64) -> OperatorMatrix {
        self.eig.map(|lam| Complex64::from_polar(1.0, -lam * t / HBAR))
    }
}

/// Dense propagation of ψ0 under a time-independent H.
pub fn evolve(h: &OperatorMatrix, psi0: &StateVector, times: &[f64]) -> Result<StateTrajectory> {
    check_normalized(psi0)?;
    let prop = SpectralPropagator::new(h)?;
    let mut states = Vec::with_capacity(times.len());
    for &t in times {
        let psi = prop.apply(psi0, t)?;
        check_norm_at(&psi, t)?;
        states.push(psi);
    }
    Ok(StateTrajectory {
        times: times.to_vec(),
        states,
    })
}

/// Propagator selection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    /// Dense below [`DENSE_LIMIT`], Krylov above.
    Auto,
    Dense,
    Krylov,
}

/// Options for [`propagate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PropagationSettings {
    pub method: Method,
    pub krylov: KrylovOptions,
    /// Abort once the outermost-layer population exceeds this value.
    pub edge_limit: f64,
}

impl Default for PropagationSettings {
    fn default() -> Self {
        Self {
            method: Method::Auto,
            krylov: KrylovOptions::default(),
            edge_limit: EDGE_LIMIT,
        }
    }
}

/// Diagnostics gathered during [`propagate`].
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PropagationReport {
    pub max_edge_weight: f64,
    pub max_norm_error: f64,
    pub krylov_steps: usize,
    pub used_krylov: bool,
}

/// Propagates ψ0 through ascending `times`, calling `observe(k, t, ψ)` at
/// each sample and checking norm and truncation edges.
pub fn propagate<F>(
    h: &SparseOperator,
    basis: &BasisSpec,
    psi0: &StateVector,
    times: &[f64],
    settings: &PropagationSettings,
    mut observe: F,
) -> Result<PropagationReport>
where
    F: FnMut(usize, f64, &StateVector) -> Result<()>,
{
    if h.dim() != basis.dim() || psi0.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: if h.dim() != basis.dim() { h.dim() } else { psi0.dim() },
        });
    }
    check_normalized(psi0)?;
    if times.windows(2).any(|w| !(w[1] >= w[0])) || times.first().is_some_and(|&t| !(t >= 0.0)) {
        return Err(Error::InvalidParameter {
            name: "times",
            reason: "sample times must be non-negative and ascending".into(),
        });
    }
    let use_krylov = match settings.method {
        Method::Auto => h.dim() > DENSE_LIMIT,
        Method::Dense => false,
        Method::Krylov => true,
    };
    let mut report = PropagationReport {
        used_krylov: use_krylov,
        ..Default::default()
    };
    let mut record = |k: usize, t: f64, psi: &StateVector, report: &mut PropagationReport| -> Result<()> {
        let norm_err = (psi.norm() - 1.0).abs();
        report.max_norm_error = report.max_norm_error.max(norm_err);
        if norm_err > NORM_TOL {
            return Err(Error::Numerical(format!(
                "norm drifted by {norm_err:e} at t = {t:e} s"
            )));
        }
        let edge = basis.edge_weight(&psi.populations())?;
        report.max_edge_weight = report.max_edge_weight.max(edge);
        if edge > settings.edge_limit {
            return Err(Error::TruncationLoss {
                time: t,
                weight: edge,
                limit: settings.edge_limit,
            });
        }
        observe(k, t, psi)
    };
    if use_krylov {
        let mut prop = KrylovPropagator::new(h, settings.krylov)?;
        let mut psi = psi0.clone();
        let mut now = 0.0;
        for (k, &t) in times.iter().enumerate() {
            prop.advance(&mut psi, t - now)?;
            now = t;
            record(k, t, &psi, &mut report)?;
        }
        report.krylov_steps = prop.steps();
    } else {
        let prop = SpectralPropagator::new(&h.to_dense())?;
        for (k, &t) in times.iter().enumerate() {
            let psi = prop.apply(psi0, t)?;
            record(k, t, &psi, &mut report)?;
        }
    }
    Ok(report)
}

fn check_normalized(psi: &StateVector) -> Result<()> {
    let err = (psi.norm() - 1.0).abs();
    if err > NORM_TOL {
        return Err(Error::InvalidParameter {
            name: "psi0",
            reason: format!("initial state must be normalized (|norm - 1| = {err:e})"),
        });
    }
    Ok(())
}

fn check_norm_at(psi: &StateVector, t: f64) -> Result<()> {
    let err = (psi.norm() - 1.0).abs();
    if err > NORM_TOL {
        return Err(Error::Numerical(format!("norm drifted by {err:e} at t = {t:e} s")));
    }
    Ok(())
}
