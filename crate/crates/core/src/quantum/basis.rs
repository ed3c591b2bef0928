//! Product-space layout: spin ⊗ angle ⊗ libration, any factor omissible.

use serde::Serialize;

use crate::error::{Error, Result};

/// Spin sector carried by the first tensor factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinSpace {
    /// Full NV triplet in the S1 eigenbasis ordered (+ħ, 0, −ħ).
    Triplet,
    /// Effective two-level system with σ_z = diag(+1, −1).
    Doublet,
}

impl SpinSpace {
    pub fn dim(self) -> usize {
        match self {
            SpinSpace::Triplet => 3,
            SpinSpace::Doublet => 2,
        }
    }
}

/// Representation of the in-plane angle γ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum AngleSpace {
    /// Planar-rotor momentum states |m⟩, m = −L..=L in ascending order.
    Rotor { cutoff: usize },
    /// Oscillator Fock states for a small-angle expansion about γ = 0, with
    /// γ = width·(b + b†).
    Harmonic { dim: usize, width: f64 },
}

impl AngleSpace {
    pub fn dim(self) -> usize {
        match self {
            AngleSpace::Rotor { cutoff } => 2 * cutoff + 1,
            AngleSpace::Harmonic { dim, .. } => dim,
        }
    }

    /// Indices of the two outermost truncation layers.
    fn edge_indices(self) -> Vec<usize> {
        match self {
            AngleSpace::Rotor { cutoff } => {
                let n = 2 * cutoff + 1;
                let mut idx = vec![0, 1, n - 2, n - 1];
                idx.sort_unstable();
                idx.dedup();
                idx
            }
            AngleSpace::Harmonic { dim, .. } => fock_edge(dim),
        }
    }
}

fn fock_edge(dim: usize) -> Vec<usize> {
    (dim.saturating_sub(2)..dim).collect()
}

/// Identifies one tensor factor of a [`BasisSpec`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    Spin,
    Angle,
    Libration,
}

/// Layout of a product Hilbert space with the fixed ordering
/// spin ⊗ angle ⊗ libration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BasisSpec {
    spin: Option<SpinSpace>,
    angle: Option<AngleSpace>,
    libration: Option<usize>,
}

impl BasisSpec {
    pub fn new(
        spin: Option<SpinSpace>,
        angle: Option<AngleSpace>,
        libration: Option<usize>,
    ) -> Result<Self> {
        if spin.is_none() && angle.is_none() && libration.is_none() {
            return Err(Error::InvalidBasis("at least one factor is required".into()));
        }
        match angle {
            Some(AngleSpace::Rotor { cutoff }) if cutoff < 1 => {
                return Err(Error::InvalidBasis(format!(
                    "rotor cutoff must be at least 1, got {cutoff}"
                )))
            }
            Some(AngleSpace::Harmonic { dim, width }) => {
                if dim < 2 {
                    return Err(Error::InvalidBasis(format!(
                        "harmonic angle dimension must be at least 2, got {dim}"
                    )));
                }
                if !(width.is_finite() && width > 0.0) {
                    return Err(Error::InvalidBasis(format!(
                        "harmonic angle width must be positive, got {width}"
                    )));
                }
            }
            _ => {}
        }
        if let Some(d) = libration {
            if d < 2 {
                return Err(Error::InvalidBasis(format!(
                    "Fock dimension must be at least 2, got {d}"
                )));
            }
        }
        Ok(Self {
            spin,
            angle,
            libration,
        })
    }

    pub fn spin(&self) -> Option<SpinSpace> {
        self.spin
    }

    pub fn angle(&self) -> Option<AngleSpace> {
        self.angle
    }

    pub fn libration(&self) -> Option<usize> {
        self.libration
    }

    /// Dimensions of the included factors in tensor order.
    pub fn factor_dims(&self) -> Vec<(Factor, usize)> {
        let mut out = Vec::with_capacity(3);
        if let Some(s) = self.spin {
            out.push((Factor::Spin, s.dim()));
        }
        if let Some(a) = self.angle {
            out.push((Factor::Angle, a.dim()));
        }
        if let Some(d) = self.libration {
            out.push((Factor::Libration, d));
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.factor_dims().iter().map(|(_, d)| d).product()
    }

    pub fn factor_dim(&self, factor: Factor) -> Result<usize> {
        self.factor_dims()
            .into_iter()
            .find(|(f, _)| *f == factor)
            .map(|(_, d)| d)
            .ok_or_else(|| Error::InvalidBasis(format!("basis has no {factor:?} factor")))
    }

    /// Product of the dimensions before and after `factor`.
    pub(crate) fn strides(&self, factor: Factor) -> Result<(usize, usize, usize)> {
        let dims = self.factor_dims();
        let pos = dims
            .iter()
            .position(|(f, _)| *f == factor)
            .ok_or_else(|| Error::InvalidBasis(format!("basis has no {factor:?} factor")))?;
        let left = dims[..pos].iter().map(|(_, d)| d).product();
        let right = dims[pos + 1..].iter().map(|(_, d)| d).product();
        Ok((left, dims[pos].1, right))
    }

    /// Largest population found in the two outermost layers of any truncated
    /// factor, given per-basis-state populations.
    pub fn edge_weight(&self, populations: &[f64]) -> Result<f64> {
        if populations.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: populations.len(),
            });
        }
        let mut worst = 0.0f64;
        let mut check = |factor: Factor, edges: Vec<usize>| -> Result<()> {
            let (_, n, right) = self.strides(factor)?;
            let mut w = 0.0;
            for (k, p) in populations.iter().enumerate() {
                let local = (k / right) % n;
                if edges.contains(&local) {
                    w += p;
                }
            }
            worst = worst.max(w);
            Ok(())
        };
        if let Some(a) = self.angle {
            check(Factor::Angle, a.edge_indices())?;
        }
        if let Some(d) = self.libration {
            check(Factor::Libration, fock_edge(d))?;
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_is_product_of_factors() {
        let b = BasisSpec::new(
            Some(SpinSpace::Triplet),
            Some(AngleSpace::Rotor { cutoff: 2 }),
            Some(4),
        )
        .unwrap();
        assert_eq!(b.dim(), 3 * 5 * 4);
        assert_eq!(b.strides(Factor::Angle).unwrap(), (3, 5, 4));
    }

    #[test]
    fn rejects_degenerate_factors() {
        assert!(BasisSpec::new(None, Some(AngleSpace::Rotor { cutoff: 0 }), None).is_err());
        assert!(BasisSpec::new(None, None, Some(1)).is_err());
        assert!(BasisSpec::new(None, None, None).is_err());
        assert!(BasisSpec::new(
            None,
            Some(AngleSpace::Harmonic {
                dim: 4,
                width: -1.0
            }),
            None
        )
        .is_err());
    }

    #[test]
    fn edge_weight_sees_outer_layers_only() {
        let b = BasisSpec::new(Some(SpinSpace::Doublet), None, Some(5)).unwrap();
        let mut pops = vec![0.0; 10];
        pops[2] = 1.0; // n = 2 in the first spin block
        assert_eq!(b.edge_weight(&pops).unwrap(), 0.0);
        pops[2] = 0.5;
        pops[9] = 0.5; // n = 4 in the second spin block
        assert_eq!(b.edge_weight(&pops).unwrap(), 0.5);
    }
}
