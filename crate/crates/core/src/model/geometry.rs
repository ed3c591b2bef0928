//! Mass, inertia and surface-charge quadrupole moments of a uniform ellipsoid.

use std::f64::consts::PI;

use super::params::ParticleGeometry;
use crate::error::Result;

const POLAR_NODES: usize = 64;
const AZIMUTH_NODES: usize = 128;

/// Returns (M, I, I₃) with I = M(l1² + l3²)/5 and I₃ = M(l1² + l2²)/5.
pub fn inertia_from_geometry(geom: &ParticleGeometry) -> Result<(f64, f64, f64)> {
    geom.validate()?;
    let m = geom.density * 4.0 / 3.0 * PI * geom.l1 * geom.l2 * geom.l3;
    let i = m * (geom.l1 * geom.l1 + geom.l3 * geom.l3) / 5.0;
    let i3 = m * (geom.l1 * geom.l1 + geom.l2 * geom.l2) / 5.0;
    Ok((m, i, i3))
}

/// Gauss-Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Surface area and the surface averages ⟨x²⟩, ⟨y²⟩, ⟨z²⟩.
fn surface_moments(geom: &ParticleGeometry) -> (f64, [f64; 3]) {
    let (l1, l2, l3) = (geom.l1, geom.l2, geom.l3);
    let (un, uw) = gauss_legendre(POLAR_NODES);
    let (pn, pw) = gauss_legendre(AZIMUTH_NODES);
    let mut area = 0.0;
    let mut m = [0.0; 3];
    for (&u, &wu) in un.iter().zip(&uw) {
        let s2 = 1.0 - u * u;
        let s = s2.sqrt();
        for (&t, &wt) in pn.iter().zip(&pw) {
            let phi = PI * (t + 1.0);
            let (sp, cp) = phi.sin_cos();
            let ds = (l2 * l2 * l3 * l3 * s2 * cp * cp
                + l1 * l1 * l3 * l3 * s2 * sp * sp
                + l1 * l1 * l2 * l2 * u * u)
                .sqrt();
            let w = wu * wt * PI * ds;
            area += w;
            m[0] += w * (l1 * s * cp).powi(2);
            m[1] += w * (l2 * s * sp).powi(2);
            m[2] += w * (l3 * u).powi(2);
        }
    }
    (area, m.map(|x| x / area))
}

/// Surface area of the ellipsoid [m²].
pub fn surface_area(geom: &ParticleGeometry) -> Result<f64> {
    geom.validate()?;
    Ok(surface_moments(geom).0)
}

/// Returns (Q, Q₃) for a homogeneous surface charge, Q_μ = q(3⟨x_μ²⟩ − ⟨r²⟩)
/// with q = σ·area. Q is fixed to −Q₃/2 so the tensor is exactly traceless.
pub fn quadrupole_moments(geom: &ParticleGeometry) -> Result<(f64, f64)> {
    geom.validate()?;
    let (area, m) = surface_moments(geom);
    let q = geom.surface_charge * area;
    let r2 = m[0] + m[1] + m[2];
    let q3 = if geom.l1 == geom.l3 && geom.l2 == geom.l3 {
        0.0
    } else {
        q * (3.0 * m[2] - r2)
    };
    Ok((-q3 / 2.0, q3))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_small_orders() {
        let (x, w) = gauss_legendre(2);
        assert!((x[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15 && (w[0] - 1.0).abs() < 1e-15);
        let (x, w) = gauss_legendre(5);
        // Exact for polynomials up to degree 9.
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!((s - 2.0 / 9.0).abs() < 1e-14);
        let (_, w) = gauss_legendre(64);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
    }

    #[test]
    fn inertia_reference_values() {
        let g = ParticleGeometry::prolate(200e-9, 0.3);
        let (m, i, _) = inertia_from_geometry(&g).unwrap();
        assert!((m / 1.0556e-17 - 1.0).abs() < 1e-3);
        assert!((i / 9.2046e-32 - 1.0).abs() < 1e-3);
        let mut g2 = g;
        g2.l1 *= 2.0;
        g2.l2 *= 2.0;
        g2.l3 *= 2.0;
        let (m2, i2, _) = inertia_from_geometry(&g2).unwrap();
        assert!((m2 / m - 8.0).abs() < 1e-12 && (i2 / i - 32.0).abs() < 1e-12);
    }

    #[test]
    fn sphere_limit() {
        let g = ParticleGeometry::prolate(100e-9, 1.0);
        let (_, i, i3) = inertia_from_geometry(&g).unwrap();
        assert_eq!(i, i3);
        assert_eq!(quadrupole_moments(&g).unwrap(), (0.0, 0.0));
        let area = surface_area(&g).unwrap();
        assert!((area / (4.0 * PI * 1e-14) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn traceless_and_prolate_ordering() {
        let (q, q3) = quadrupole_moments(&ParticleGeometry::prolate(200e-9, 0.3)).unwrap();
        assert_eq!(2.0 * q + q3, 0.0);
        assert!(q3 > q);
    }
}
