//! Short-iterative Lanczos propagation for large sparse Hamiltonians.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::eigen::real_symmetric_eig;
use super::operator::HERMITIAN_TOL;
use super::sparse::SparseOperator;
use super::state::StateVector;
use crate::constants::HBAR;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Tuning knobs for [`KrylovPropagator`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KrylovOptions {
    /// Krylov subspace dimension per step.
    pub subspace: usize,
    /// Target for the a-posteriori error estimate of a single step.
    pub tolerance: f64,
    /// Hard cap on accepted steps within one `advance` call.
    pub max_steps: usize,
}

impl Default for KrylovOptions {
    fn default() -> Self {
        Self {
            subspace: 30,
            tolerance: 1e-9,
            max_steps: 5_000_000,
        }
    }
}

/// Adaptive Lanczos propagator for exp(−iHt/ħ) with full
/// reorthogonalization.
pub struct KrylovPropagator<'a> {
    h: &'a SparseOperator,
    opts: KrylovOptions,
    step: f64,
    accepted: usize,
    matvecs: usize,
}

struct Lanczos {
    basis: Vec<Vec<Complex64>>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    exact: bool,
}

impl<'a> KrylovPropagator<'a> {
    pub fn new(h: &'a SparseOperator, opts: KrylovOptions) -> Result<Self> {
        let dev = h.hermiticity_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        if opts.subspace < 2 || !(opts.tolerance > 0.0) {
            return Err(Error::InvalidParameter {
                name: "krylov",
                reason: "subspace must be >= 2 and tolerance positive".into(),
            });
        }
        let rate = h.row_sum_norm() / HBAR;
        let step = if rate > 0.0 {
            0.25 * opts.subspace as f64 / rate
        } else {
            f64::INFINITY
        };
        Ok(Self {
            h,
            opts,
            step,
            accepted: 0,
            matvecs: 0,
        })
    }

    /// Accepted steps so far.
    pub fn steps(&self) -> usize {
        self.accepted
    }

    /// Sparse matrix-vector products so far.
    pub fn matvecs(&self) -> usize {
        self.matvecs
    }

    /// Advances `psi` in place by `duration` seconds.
    pub fn advance(&mut self, psi: &mut StateVector, duration: f64) -> Result<()> {
        if psi.dim() != self.h.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.h.dim(),
                found: psi.dim(),
            });
        }
        if !(duration >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "duration",
                reason: format!("must be non-negative, got {duration}"),
            });
        }
        let mut done = 0.0;
        let mut taken = 0usize;
        while done < duration {
            let remaining = duration - done;
            let lz = self.lanczos(psi.amplitudes())?;
            let nrm = psi.norm();
            let (vals, vecs) = tridiagonal_eig(&lz)?;
            let m = lz.alpha.len();
            loop {
                let dt = self.step.min(remaining);
                let y = krylov_coefficients(&vals, &vecs, dt);
                let err = if lz.exact {
                    0.0
                } else {
                    dt * lz.beta[m - 1] * y[m - 1].norm()
                };
                if err > self.opts.tolerance && dt > 0.0 {
                    let shrink = 0.9 * (self.opts.tolerance / err).powf(1.0 / m as f64);
                    self.step = dt * shrink.clamp(0.1, 0.9);
                    if self.step < duration * 1e-15 {
                        return Err(Error::Numerical("Krylov step size underflow".into()));
                    }
                    continue;
                }
                let out = psi.amplitudes_mut();
                out.iter_mut().for_each(|x| *x = ZERO);
                for (v, c) in lz.basis.iter().zip(&y) {
                    let c = c * nrm;
                    for (o, x) in out.iter_mut().zip(v) {
                        *o += c * x;
                    }
                }
                done += dt;
                if dt == remaining {
                    done = duration;
                }
                if err < 0.1 * self.opts.tolerance && dt == self.step {
                    let grow = if err > 0.0 {
                        0.9 * (self.opts.tolerance / err).powf(1.0 / m as f64)
                    } else {
                        2.0
                    };
                    self.step = dt * grow.clamp(1.0, 2.0);
                }
                break;
            }
            self.accepted += 1;
            taken += 1;
            if taken > self.opts.max_steps {
                return Err(Error::Numerical(format!(
                    "Krylov propagation exceeded {} steps",
                    self.opts.max_steps
                )));
            }
        }
        Ok(())
    }

    fn lanczos(&mut self, psi: &[Complex64]) -> Result<Lanczos> {
        let n = psi.len();
        let m_max = self.opts.subspace.min(n);
        let nrm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(nrm > 0.0 && nrm.is_finite()) {
            return Err(Error::Numerical("cannot propagate a zero or non-finite state".into()));
        }
        let scale = self.h.row_sum_norm() / HBAR;
        let mut basis: Vec<Vec<Complex64>> = vec![psi.iter().map(|z| z / nrm).collect()];
        let mut alpha = Vec::with_capacity(m_max);
        let mut beta = Vec::with_capacity(m_max);
        let mut w = vec![ZERO; n];
        let mut exact = false;
        for j in 0..m_max {
            self.h.matvec(&basis[j], &mut w);
            self.matvecs += 1;
            w.iter_mut().for_each(|x| *x /= HBAR);
            let a = dotc(&basis[j], &w).re;
            alpha.push(a);
            for (x, v) in w.iter_mut().zip(&basis[j]) {
                *x -= a * v;
            }
            if j > 0 {
                let b = beta[j - 1];
                for (x, v) in w.iter_mut().zip(&basis[j - 1]) {
                    *x -= b * v;
                }
            }
            for v in &basis {
                let c = dotc(v, &w);
                for (x, vv) in w.iter_mut().zip(v) {
                    *x -= c * vv;
                }
            }
            let b = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            beta.push(b);
            if b <= 1e-13 * scale.max(a.abs()) || j + 1 == n {
                exact = true;
                break;
            }
            if j + 1 < m_max {
                basis.push(w.iter().map(|z| z / b).collect());
            }
        }
        Ok(Lanczos {
            basis,
            alpha,
            beta,
            exact,
        })
    }
}

fn dotc(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn tridiagonal_eig(lz: &Lanczos) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let m = lz.alpha.len();
    let t = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            lz.alpha[i]
        } else if i + 1 == j {
            lz.beta[i]
        } else if j + 1 == i {
            lz.beta[j]
        } else {
            0.0
        }
    });
    let (vals, vecs) = real_symmetric_eig(&t)?;
    Ok((vals.iter().copied().collect(), vecs))
}

/// exp(−iT dt) e₁ in the Krylov basis.
fn krylov_coefficients(vals: &[f64], vecs: &DMatrix<f64>, dt: f64) -> Vec<Complex64> {
    let m = vals.len();
    (0..m)
        .map(|i| {
            (0..m)
                .map(|k| Complex64::from_polar(vecs[(i, k)] * vecs[(0, k)], -vals[k] * dt))
                .sum()
        })
        .collect()
}
