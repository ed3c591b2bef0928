//! Steady-state Barnett alignment as a function of field and temperature.

use super::series::{Column, SweepTable};
use crate::analytics::{barnett_alignment, Alignment};
use crate::error::{invalid, Result};
use crate::model::{derive_scales, Environment, FieldConfig, ParticleGeometry, TrapConfig};

/// Rows (B [mT], T [K], ⟨cos γ⟩, Var cos γ) for every field, temperature
/// pair, field-major.
pub fn alignment_sweep(
    geom: &ParticleGeometry,
    trap: &TrapConfig,
    fields: &FieldConfig,
    b_values: &[f64],
    temperatures: &[f64],
    m: i32,
) -> Result<SweepTable> {
    if !(-1..=1).contains(&m) {
        return Err(invalid("m", format!("spin projection must be −1, 0 or +1, got {m}")));
    }
    let mut table = SweepTable::new(vec![
        Column::new("B", "mT"),
        Column::new("T", "K"),
        Column::new("mean_cos_gamma", "1"),
        Column::new("variance", "1"),
    ]);
    for &b in b_values {
        for &t in temperatures {
            let env = Environment { temperature: t, ..Environment::default() };
            let s = derive_scales(geom, trap, &FieldConfig { b, ..*fields }, &env)?;
            let a = match s.kappa {
                Some(k) => barnett_alignment(k, m)?,
                None if s.g == 0.0 || m == 0 => Alignment { mean: 0.0, variance: 0.5 },
                None => barnett_alignment(f64::INFINITY * s.g.signum(), m)?,
            };
            table.push(vec![b * 1e3, t, a.mean, a.variance])?;
        }
    }
    Ok(table)
}
