//! Libration overlaps ⟨n|exp(−i s p_ξ/ħ)|n⟩ that weight the adiabatic
//! couplings.

use num_complex::Complex64;

use super::special::laguerre;
use crate::constants::HBAR;
use crate::error::{check_finite, invalid, Error, Result};
use crate::model::DerivedScales;
use crate::quantum::eigen::real_symmetric_eig;
use crate::quantum::ops::annihilation;

/// e^{−α²/2} L_n(α²) for a displacement of dimensionless size α.
pub fn displacement_overlap(n: usize, alpha: f64) -> f64 {
    let a2 = alpha * alpha;
    (-a2 / 2.0).exp() * laguerre(n, a2)
}

/// Overlap for a phase-space shift `s` of the ξ oscillator with zero-point
/// length `xi0`; α = s/(2ξ₀).
pub fn overlap_fn(n: usize, s: f64, xi0: f64) -> Result<f64> {
    check_finite("s", s, false)?;
    check_finite("xi0", xi0, true)?;
    Ok(displacement_overlap(n, s / (2.0 * xi0)))
}

fn shift_setup(scales: &DerivedScales) -> Result<(f64, f64)> {
    if scales.omega == 0.0 {
        return Err(invalid("omega", "the overlap shifts divide by Iω²"));
    }
    let xi0 = (HBAR / (2.0 * scales.inertia * scales.omega_xi)).sqrt();
    Ok((scales.inertia * scales.omega * scales.omega, xi0))
}

/// f_n: overlap weighting the spin-flip coupling, s = ħ(ω − γ0B)/(Iω²).
pub fn flip_overlap(scales: &DerivedScales, n: usize) -> Result<f64> {
    let (iw2, xi0) = shift_setup(scales)?;
    overlap_fn(n, HBAR * scales.g / iw2, xi0)
}

/// g_n: overlap weighting the Zeeman-induced term, s = 2ħγ0B/(Iω²).
pub fn zeeman_overlap(scales: &DerivedScales, n: usize) -> Result<f64> {
    let (iw2, xi0) = shift_setup(scales)?;
    overlap_fn(n, 2.0 * HBAR * scales.zeeman / iw2, xi0)
}

/// Smallest Fock dimension accepted by [`displacement_overlap_fock`].
pub fn fock_oracle_min_dim(n: usize, alpha: f64) -> usize {
    n + 30 + (12.0 * alpha * alpha).ceil() as usize
}

/// ⟨n|exp(α(a† − a))|n⟩ evaluated by exponentiating the truncated
/// generator in a `dim`-level Fock space.
pub fn displacement_overlap_fock(n: usize, alpha: f64, dim: usize) -> Result<f64> {
    check_finite("alpha", alpha, false)?;
    let need = fock_oracle_min_dim(n, alpha);
    if dim < need {
        return Err(Error::InvalidBasis(format!(
            "Fock dimension {dim} too small for n = {n}, α = {alpha}; need at least {need}"
        )));
    }
    // K = i(a† − a) is real antisymmetric times i; use the real symmetric
    // matrix M with K = U M U† where U = diag(iᵏ).
    let a = annihilation(dim).to_dense();
    let mut m = nalgebra::DMatrix::<f64>::zeros(dim, dim);
    for k in 0..dim - 1 {
        let v = a.get(k, k + 1).re;
        m[(k, k + 1)] = v;
        m[(k + 1, k)] = v;
    }
    let (vals, vecs) = real_symmetric_eig(&m)?;
    // ⟨n|e^{−iαK}|n⟩ with K similar to M through a diagonal phase, which
    // cancels on a diagonal element.
    let amp: Complex64 = (0..dim)
        .map(|j| Complex64::from_polar(vecs[(n, j)].powi(2), -alpha * vals[j]))
        .sum();
    Ok(amp.re)
}
