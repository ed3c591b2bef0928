//! z-y′-z″ Euler rotations.

use nalgebra::{Matrix3, Vector3};

/// R(α, β, γ) = R_z(α) R_y(β) R_z(γ); its columns are the body axes n₁, n₂, n₃.
pub fn rotation_matrix(alpha: f64, beta: f64, gamma: f64) -> Matrix3<f64> {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let (sg, cg) = gamma.sin_cos();
    Matrix3::new(
        ca * cb * cg - sa * sg,
        -ca * cb * sg - sa * cg,
        ca * sb,
        sa * cb * cg + ca * sg,
        -sa * cb * sg + ca * cg,
        sa * sb,
        -sb * cg,
        sb * sg,
        cb,
    )
}

/// Body-fixed principal axes (n₁, n₂, n₃) in lab coordinates.
pub fn principal_axes(alpha: f64, beta: f64, gamma: f64) -> (Vector3<f64>, Vector3<f64>, Vector3<f64>) {
    let r = rotation_matrix(alpha, beta, gamma);
    (r.column(0).into(), r.column(1).into(), r.column(2).into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn zero_angles_identity() {
        assert_eq!(rotation_matrix(0.0, 0.0, 0.0), Matrix3::identity());
    }

    #[test]
    fn tilted_symmetry_axis_along_x() {
        let (_, _, n3) = principal_axes(0.0, FRAC_PI_2, 0.0);
        assert!((n3 - Vector3::x()).norm() < 1e-15);
    }

    #[test]
    fn composition_of_elementary_rotations() {
        let (a, b, g) = (0.3, 1.1, -2.0);
        let rz = |t: f64| Matrix3::new(t.cos(), -t.sin(), 0.0, t.sin(), t.cos(), 0.0, 0.0, 0.0, 1.0);
        let ry = |t: f64| Matrix3::new(t.cos(), 0.0, t.sin(), 0.0, 1.0, 0.0, -t.sin(), 0.0, t.cos());
        let r = rz(a) * ry(b) * rz(g);
        assert!((r - rotation_matrix(a, b, g)).abs().max() < 1e-15);
    }
}
