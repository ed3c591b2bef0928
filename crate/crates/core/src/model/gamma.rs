//! Operators of the in-plane angle γ for either representation.
//!
//! On the rotor basis the amplitudes represent ψ(γ) = Σ_m c_m e^{−imγ}, so the
//! lowering shift is multiplication by e^{iγ} and the momentum canonically
//! conjugate to γ is −diag(ħm). Hamiltonian builders always use this
//! canonical momentum.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::quantum::basis::AngleSpace;
use crate::quantum::eigen::real_symmetric_eig;
use crate::quantum::ops::{annihilation, momentum_labels, quadrature_squared, rotor_operators, rotor_shift};
use crate::quantum::{OperatorMatrix, SparseOperator};

/// Functions of γ and its conjugate momentum on one angle factor.
#[derive(Clone, Debug)]
pub struct AngleOperators {
    pub space: AngleSpace,
    /// Canonical momentum p with [γ, p] = iħ.
    pub p: SparseOperator,
    /// p², free of truncation artefacts.
    pub p2: SparseOperator,
    pub cos: SparseOperator,
    pub sin: SparseOperator,
    pub sin2: SparseOperator,
    pub cos2: SparseOperator,
    /// sin γ cos γ.
    pub sin_cos: SparseOperator,
    gamma: Option<SparseOperator>,
    gamma2: Option<SparseOperator>,
}

impl AngleOperators {
    pub fn new(space: AngleSpace) -> Result<Self> {
        match space {
            AngleSpace::Rotor { cutoff } => Self::rotor(space, cutoff),
            AngleSpace::Harmonic { dim, width } => Self::harmonic(space, dim, width),
        }
    }

    fn rotor(space: AngleSpace, cutoff: usize) -> Result<Self> {
        let r = rotor_operators(cutoff)?;
        let m: Vec<f64> = momentum_labels(cutoff).collect();
        let p = SparseOperator::from_real_diagonal(&m.iter().map(|m| -HBAR * m).collect::<Vec<_>>());
        let p2 = SparseOperator::from_real_diagonal(&m.iter().map(|m| (HBAR * m).powi(2)).collect::<Vec<_>>());
        let e2 = rotor_shift(cutoff, 2);
        let e2d = e2.adjoint();
        let n = 2 * cutoff + 1;
        let id = SparseOperator::identity(n);
        let cos_2g = (&e2 + &e2d).scale(Complex64::new(0.5, 0.0));
        let sin_2g = (&e2 - &e2d).scale(Complex64::new(0.0, -0.5));
        Ok(Self {
            space,
            p,
            p2,
            cos: r.cos,
            sin: r.sin,
            sin2: (&id - &cos_2g).scale(Complex64::new(0.5, 0.0)),
            cos2: (&id + &cos_2g).scale(Complex64::new(0.5, 0.0)),
            sin_cos: sin_2g.scale(Complex64::new(0.5, 0.0)),
            gamma: None,
            gamma2: None,
        })
    }

    fn harmonic(space: AngleSpace, dim: usize, width: f64) -> Result<Self> {
        if dim < 2 || !(width > 0.0 && width.is_finite()) {
            return Err(Error::InvalidBasis(format!(
                "harmonic angle basis needs dim >= 2 and positive width (dim = {dim}, width = {width})"
            )));
        }
        let a = annihilation(dim);
        let ad = a.adjoint();
        let gamma = (&a + &ad).scale(Complex64::new(width, 0.0));
        let p0 = HBAR / (2.0 * width);
        let p = (&ad - &a).scale(Complex64::new(0.0, p0));
        let p2 = &quadrature_squared(dim, -1.0) * (p0 * p0);
        let gamma2 = &quadrature_squared(dim, 1.0) * (width * width);
        let g = DMatrix::from_fn(dim, dim, |i, j| gamma.get(i, j).re);
        let (vals, vecs) = real_symmetric_eig(&g)?;
        let func = |f: &dyn Fn(f64) -> f64| -> SparseOperator {
            let mut vf = vecs.clone();
            for (j, &l) in vals.iter().enumerate() {
                let fl = f(l);
                vf.column_mut(j).scale_mut(fl);
            }
            let m = vf * vecs.transpose();
            let c = m.map(|x| Complex64::new(x, 0.0));
            SparseOperator::from_dense(&OperatorMatrix::from_matrix(c).expect("square"))
        };
        Ok(Self {
            space,
            p,
            p2,
            cos: func(&f64::cos),
            sin: func(&f64::sin),
            sin2: func(&|x: f64| x.sin().powi(2)),
            cos2: func(&|x: f64| x.cos().powi(2)),
            sin_cos: func(&|x: f64| x.sin() * x.cos()),
            gamma: Some(gamma),
            gamma2: Some(gamma2),
        })
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// γ itself; only meaningful in the harmonic representation.
    pub fn gamma(&self) -> Result<&SparseOperator> {
        self.gamma.as_ref().ok_or_else(|| {
            Error::InvalidBasis("γ as an operator needs the harmonic angle representation".into())
        })
    }

    /// γ², free of truncation artefacts.
    pub fn gamma2(&self) -> Result<&SparseOperator> {
        self.gamma2.as_ref().ok_or_else(|| {
            Error::InvalidBasis("γ² as an operator needs the harmonic angle representation".into())
        })
    }
}
