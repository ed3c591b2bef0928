//! Boltzmann alignment of the in-plane angle under the Barnett field.

use serde::Serialize;

use super::special::bessel_ratio;
use crate::error::{Error, Result};

/// Mean and variance of cos γ under the weight exp(−κ m cos γ).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Alignment {
    pub mean: f64,
    pub variance: f64,
}

/// ⟨cos γ⟩ = −I₁(κm)/I₀(κm) and Var(cos γ) = (1 + I₂/I₀)/2 − ⟨cos γ⟩².
///
/// `m` is the spin projection in units of ħ and must be −1, 0 or +1.
pub fn barnett_alignment(kappa: f64, m: i32) -> Result<Alignment> {
    if !(-1..=1).contains(&m) {
        return Err(Error::InvalidParameter {
            name: "m",
            reason: format!("spin projection must be −1, 0 or +1, got {m}"),
        });
    }
    let x = kappa * m as f64;
    if x.is_nan() {
        return Err(Error::InvalidParameter {
            name: "kappa",
            reason: "must be finite".into(),
        });
    }
    if x.is_infinite() {
        return Ok(Alignment { mean: -x.signum(), variance: 0.0 });
    }
    let mean = -bessel_ratio(1, x)?;
    let cos2 = 0.5 * (1.0 + bessel_ratio(2, x)?);
    let variance = (cos2 - mean * mean).clamp(0.0, 0.5);
    Ok(Alignment { mean, variance })
}
