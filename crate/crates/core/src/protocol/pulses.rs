//! Instantaneous microwave pulses on the {|↑⟩, |↓⟩} doublet.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quantum::OperatorMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PulseKind {
    HalfPi,
    Pi,
}

impl PulseKind {
    pub fn angle(self) -> f64 {
        match self {
            PulseKind::HalfPi => std::f64::consts::FRAC_PI_2,
            PulseKind::Pi => std::f64::consts::PI,
        }
    }
}

/// Rotation by the pulse angle about the equatorial axis cos φ σx + sin φ σy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Pulse {
    pub time: f64,
    pub kind: PulseKind,
    pub axis_phase: f64,
}

impl Pulse {
    /// exp(−iθ(cos φ σx + sin φ σy)/2) on the doublet.
    pub fn unitary(&self) -> OperatorMatrix {
        let half = self.kind.angle() / 2.0;
        let (c, s) = (half.cos(), half.sin());
        let off = Complex64::new(0.0, -s) * Complex64::from_polar(1.0, -self.axis_phase);
        let off_dn = Complex64::new(0.0, -s) * Complex64::from_polar(1.0, self.axis_phase);
        OperatorMatrix::from_rows(2, &[Complex64::new(c, 0.0), off, off_dn, Complex64::new(c, 0.0)])
            .expect("2×2 rows")
    }
}

/// Time-ordered pulses.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PulseSequence {
    pulses: Vec<Pulse>,
}

impl PulseSequence {
    pub fn new(pulses: Vec<Pulse>) -> Result<Self> {
        if pulses.iter().any(|p| !p.time.is_finite() || p.time < 0.0)
            || pulses.windows(2).any(|w| w[1].time < w[0].time)
        {
            return Err(Error::InvalidParameter {
                name: "pulses",
                reason: "pulse times must be finite, non-negative and non-decreasing".into(),
            });
        }
        Ok(Self { pulses })
    }

    /// π/2 at 0, π at τ, π/2 at 2τ, all about the same axis.
    pub fn echo(tau: f64, axis_phase: f64) -> Result<Self> {
        let p = |time, kind| Pulse { time, kind, axis_phase };
        Self::new(vec![p(0.0, PulseKind::HalfPi), p(tau, PulseKind::Pi), p(2.0 * tau, PulseKind::HalfPi)])
    }

    pub fn pulses(&self) -> &[Pulse] {
        &self.pulses
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pulses_are_unitary_and_compose() {
        let seq = PulseSequence::echo(1.0, 0.3).unwrap();
        let mut total = OperatorMatrix::identity(2);
        for p in seq.pulses() {
            let u = p.unitary();
            assert!(u.is_unitary());
            total = &u * &total;
        }
        // Three pulses add to a 2π rotation, i.e. −1.
        let minus = &OperatorMatrix::identity(2) * -1.0;
        assert!(total.max_abs_diff(&minus) < 1e-15);
    }

    #[test]
    fn half_pi_makes_equal_superposition() {
        let u = Pulse { time: 0.0, kind: PulseKind::HalfPi, axis_phase: 0.0 }.unitary();
        assert!((u.get(1, 0).norm_sqr() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_unordered_times() {
        let p = |time| Pulse { time, kind: PulseKind::Pi, axis_phase: 0.0 };
        assert!(PulseSequence::new(vec![p(1.0), p(0.5)]).is_err());
    }
}
