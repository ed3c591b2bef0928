//! Modified Bessel functions of integer order 0–2 and Laguerre polynomials.

use crate::error::{Error, Result};

/// Largest |x| accepted by [`bessel_i`]; e^x overflows shortly beyond.
pub const BESSEL_LIMIT: f64 = 700.0;
const SERIES_LIMIT: f64 = 15.0;

fn check_order(order: u32) -> Result<()> {
    if order > 2 {
        return Err(Error::InvalidParameter {
            name: "order",
            reason: format!("only orders 0, 1 and 2 are provided, got {order}"),
        });
    }
    Ok(())
}

/// Power series Σ (x/2)^{2k+n}/(k!(k+n)!) for x ≥ 0.
fn series(order: u32, x: f64) -> f64 {
    let half = x / 2.0;
    let q = half * half;
    let mut term = (1..=order).fold(1.0, |t, j| t * half / j as f64);
    let mut sum = term;
    for k in 1..200 {
        term *= q / (k as f64 * (k + order) as f64);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

/// e^{−x} I_n(x) from the large-argument expansion, x > 15.
fn asymptotic_scaled(order: u32, x: f64) -> f64 {
    let mu = 4.0 * (order * order) as f64;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        let next = -term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum / (2.0 * std::f64::consts::PI * x).sqrt()
}

/// Scaled function e^{−|x|} I_n(x); finite for every finite x.
pub fn bessel_i_scaled(order: u32, x: f64) -> Result<f64> {
    check_order(order)?;
    if !x.is_finite() {
        return Err(Error::InvalidParameter {
            name: "x",
            reason: format!("must be finite, got {x}"),
        });
    }
    let a = x.abs();
    let v = if a <= SERIES_LIMIT {
        series(order, a) * (-a).exp()
    } else {
        asymptotic_scaled(order, a)
    };
    Ok(if x < 0.0 && order % 2 == 1 { -v } else { v })
}

/// Modified Bessel function of the first kind I_n(x) for n ∈ {0, 1, 2}.
pub fn bessel_i(order: u32, x: f64) -> Result<f64> {
    check_order(order)?;
    if x.abs() > BESSEL_LIMIT || x.is_nan() {
        return Err(Error::OutOfRange {
            argument: x,
            limit: BESSEL_LIMIT,
        });
    }
    let a = x.abs();
    let v = if a <= SERIES_LIMIT {
        series(order, a)
    } else {
        asymptotic_scaled(order, a) * a.exp()
    };
    Ok(if x < 0.0 && order % 2 == 1 { -v } else { v })
}

/// I_n(x)/I_0(x), overflow-free for any finite x.
pub fn bessel_ratio(order: u32, x: f64) -> Result<f64> {
    Ok(bessel_i_scaled(order, x)? / bessel_i_scaled(0, x)?)
}

/// Laguerre polynomial L_n(x) by the three-term recurrence.
pub fn laguerre(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 - x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}
