//! Free-space dyadic Green tensor on the imaginary frequency axis.
//!
//! The field correlations that mediate the dispersion interaction enter
//! through G(r, iξ). For two points separated by **r** in vacuum,
//!
//! ```text
//! G(r, iξ) = − c²/(4π ξ² r³) · e^(−x) · [ (1 + x + x²)·1  −  (3 + 3x + x²)·r̂⊗r̂ ],
//! x = ξ r / c,
//! ```
//!
//! which is real and symmetric, reduces to the electrostatic dipole kernel
//! −c²/(4π ξ² r³)·(1 − 3 r̂⊗r̂) for x ≪ 1, and is exponentially damped once
//! the retardation parameter x exceeds unity — the reason imaginary-axis
//! dispersion integrals converge so quickly.
//!
//! The ξ-integrands downstream always contain G through ξ²·G/c², so the
//! crate-internal entry point is [`retarded_kernel`], which returns exactly
//! that combination. The divergent ξ → 0 prefactor then never appears in any
//! numerical path; it is only materialised in the public [`vacuum_green`] /
//! [`near_field_green`] views, which accordingly reject ξ = 0.

use core::fmt;

use crate::math;
use crate::quantities::CODATA_2018;
use crate::tensor::{norm, Matrix3, Vec3};

/// Dyadic Green tensor evaluated at one separation and imaginary frequency.
#[derive(Clone, Copy, Debug)]
pub struct GreenTensor {
    /// G(r, iξ) in SI units of 1/m.
    pub matrix: Matrix3,
    /// |r| in metres.
    pub separation: f64,
    /// ξ in rad/s.
    pub imag_frequency: f64,
    /// Dimensionless retardation parameter x = ξ·|r|/c.
    pub retardation: f64,
}

/// Failure modes of the Green tensor constructors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GreenError {
    /// The two points coincide; the vacuum tensor diverges there.
    CoincidentPoints,
    /// ξ must be positive: the c²/ξ² prefactor has a pole at ξ = 0.
    StaticPole,
}

impl fmt::Display for GreenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GreenError::CoincidentPoints => {
                write!(f, "coincident points: the free-space Green tensor needs |r| > 0")
            }
            GreenError::StaticPole => {
                write!(f, "static pole: the free-space Green tensor needs xi > 0")
            }
        }
    }
}

impl core::error::Error for GreenError {}

/// ξ²·G(r, iξ)/c² — the combination every dispersion integrand actually
/// uses, finite for all ξ ≥ 0. Units: 1/m³.
///
/// At ξ = 0 this is exactly the electrostatic kernel of [`static_kernel`].
/// Callers guarantee |r| > 0.
pub(crate) fn retarded_kernel(r_vec: Vec3, xi: f64) -> Matrix3 {
    let r = norm(r_vec);
    let x = xi * r / CODATA_2018.c;
    let pref = -math::exp(-x) / (4.0 * core::f64::consts::PI * r * r * r);
    let iso = 1.0 + x + x * x;
    let aniso = 3.0 + 3.0 * x + x * x;
    anisotropy(r_vec, r, pref * iso, pref * aniso)
}

/// The x → 0 limit of [`retarded_kernel`]: −(1 − 3 r̂⊗r̂)/(4π r³).
pub(crate) fn static_kernel(r_vec: Vec3) -> Matrix3 {
    let r = norm(r_vec);
    let pref = -1.0 / (4.0 * core::f64::consts::PI * r * r * r);
    anisotropy(r_vec, r, pref, 3.0 * pref)
}

/// `iso·1 − aniso·r̂⊗r̂` assembled symmetrically.
fn anisotropy(r_vec: Vec3, r: f64, iso: f64, aniso: f64) -> Matrix3 {
    let rhat = [r_vec[0] / r, r_vec[1] / r, r_vec[2] / r];
    let mut m = Matrix3::ZERO;
    for i in 0..3 {
        for j in i..3 {
            let mut v = -aniso * rhat[i] * rhat[j];
            if i == j {
                v += iso;
            }
            m.0[i][j] = v;
            m.0[j][i] = v;
        }
    }
    m
}

// Negated comparisons so NaN inputs fail validation too.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn check_arguments(r_vec: Vec3, xi: f64) -> Result<f64, GreenError> {
    let r = norm(r_vec);
    if !(r > 0.0) {
        return Err(GreenError::CoincidentPoints);
    }
    if !(xi > 0.0) {
        return Err(GreenError::StaticPole);
    }
    Ok(r)
}

/// Full retarded Green tensor of vacuum at separation `r_vec` and imaginary
/// frequency `xi` (rad/s). Requires |r| > 0 and ξ > 0.
pub fn vacuum_green(r_vec: Vec3, xi: f64) -> Result<GreenTensor, GreenError> {
    let r = check_arguments(r_vec, xi)?;
    let c = CODATA_2018.c;
    let scale = c * c / (xi * xi);
    Ok(GreenTensor {
        matrix: retarded_kernel(r_vec, xi) * scale,
        separation: r,
        imag_frequency: xi,
        retardation: xi * r / c,
    })
}

/// Near-field (x ≪ 1) limit of [`vacuum_green`]: the electrostatic dipole
/// kernel with the same c²/ξ² prefactor. Requires |r| > 0 and ξ > 0.
pub fn near_field_green(r_vec: Vec3, xi: f64) -> Result<GreenTensor, GreenError> {
    let r = check_arguments(r_vec, xi)?;
    let c = CODATA_2018.c;
    let scale = c * c / (xi * xi);
    Ok(GreenTensor {
        matrix: static_kernel(r_vec) * scale,
        separation: r,
        imag_frequency: xi,
        retardation: xi * r / c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use core::f64::consts::PI;

    const R: f64 = 1e-9;
    const XI: f64 = 1e15;

    #[test]
    fn reference_values_on_axis() {
        // Separation 1 nm along z at xi = 1e15 rad/s (x ≈ 3.34e-3).
        let g = vacuum_green([0.0, 0.0, R], XI).unwrap();
        assert_relative_eq!(g.matrix[(2, 2)], 1.430_405_353_180_898_4e13, max_relative = 1e-13);
        assert_relative_eq!(g.matrix[(0, 0)], -7.152_106_078_376_382e12, max_relative = 1e-13);
        assert_eq!(g.matrix[(0, 0)], g.matrix[(1, 1)]);
        assert_eq!(g.matrix[(0, 1)], 0.0);
        assert_eq!(g.matrix[(0, 2)], 0.0);
        assert_relative_eq!(g.retardation, XI * R / CODATA_2018.c, max_relative = 1e-15);

        // The static limit at the same arguments: ∓c²/(4π ξ² r³) on and off
        // the axis, with the axial component doubled.
        let nf = near_field_green([0.0, 0.0, R], XI).unwrap();
        assert_relative_eq!(nf.matrix[(2, 2)], 1.430_413_293_254_044e13, max_relative = 1e-13);
        assert_relative_eq!(nf.matrix[(0, 0)], -7.152_066_466_270_22e12, max_relative = 1e-13);
    }

    #[test]
    fn symmetric_and_even_in_separation() {
        let rv = [0.4e-9, -0.7e-9, 1.1e-9];
        let g = vacuum_green(rv, 3e14).unwrap().matrix;
        assert_eq!(g, g.transpose());
        let g_flip = vacuum_green([-rv[0], -rv[1], -rv[2]], 3e14).unwrap().matrix;
        assert_eq!(g, g_flip);
    }

    #[test]
    fn rotates_with_the_separation_vector() {
        // 90° rotation about z maps x̂ → ŷ; G must co-rotate: G(Rr) = R G(r) Rᵀ.
        let g_x = vacuum_green([R, 0.0, 0.0], XI).unwrap().matrix;
        let g_y = vacuum_green([0.0, R, 0.0], XI).unwrap().matrix;
        let rot = Matrix3([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]);
        let rotated = rot * g_x * rot.transpose();
        for i in 0..3 {
            for j in 0..3 {
                assert_relative_eq!(rotated[(i, j)], g_y[(i, j)], max_relative = 1e-12, epsilon = 1e-2);
            }
        }
        // And an oblique direction, against a direct evaluation.
        let s = 1.0 / (2.0f64).sqrt();
        let rot_oblique = Matrix3([[s, 0.0, -s], [0.0, 1.0, 0.0], [s, 0.0, s]]);
        let rv = [0.0, 0.0, R];
        let rv_rot = [
            rot_oblique[(0, 2)] * R,
            rot_oblique[(1, 2)] * R,
            rot_oblique[(2, 2)] * R,
        ];
        let lhs = vacuum_green(rv_rot, XI).unwrap().matrix;
        let rhs = rot_oblique * vacuum_green(rv, XI).unwrap().matrix * rot_oblique.transpose();
        for i in 0..3 {
            for j in 0..3 {
                assert_relative_eq!(lhs[(i, j)], rhs[(i, j)], max_relative = 1e-12, epsilon = 1.0);
            }
        }
    }

    #[test]
    fn near_field_limit_agrees_at_small_retardation() {
        // At x = 1e-3 the first-order terms cancel and the relative gap
        // between retarded and near-field tensors is O(x²).
        let xi = 1e-3 * CODATA_2018.c / R;
        let full = vacuum_green([0.0, 0.0, R], xi).unwrap().matrix;
        let nf = near_field_green([0.0, 0.0, R], xi).unwrap().matrix;
        for i in 0..3 {
            let ratio = full[(i, i)] / nf[(i, i)];
            assert!((ratio - 1.0).abs() < 2e-6, "axis {i}: ratio = {ratio}");
        }
    }

    #[test]
    fn retardation_damps_exponentially() {
        // Compare the dimensionless kernel profile e^(−x)·(3 + 3x + x²) at
        // x = 5 and x = 10; the ratio must be dominated by e^(−5).
        let profile = |x: f64| (-x).exp() * (3.0 + 3.0 * x + x * x);
        let ratio = profile(10.0) / profile(5.0);
        assert!(ratio < 0.05);

        // Same statement on the actual matrices: scale out the ξ² prefactor
        // by comparing ξ²·|G| at the two frequencies.
        let xi5 = 5.0 * CODATA_2018.c / R;
        let xi10 = 10.0 * CODATA_2018.c / R;
        let m5 = vacuum_green([0.0, 0.0, R], xi5).unwrap().matrix.max_abs() * xi5 * xi5;
        let m10 = vacuum_green([0.0, 0.0, R], xi10).unwrap().matrix.max_abs() * xi10 * xi10;
        assert!(m10 / m5 < 0.05);
    }

    #[test]
    fn near_field_trace_identity() {
        // Tr[G_nf · G_nf] = (c²/ξ²)² · 6/(16 π² r⁶): the contraction that
        // fixes the London limit of the pair potential.
        let rv = [0.3e-9, 0.2e-9, -0.8e-9];
        let r = norm(rv);
        let nf = near_field_green(rv, XI).unwrap().matrix;
        let tr = (nf * nf).trace();
        let scale = CODATA_2018.c * CODATA_2018.c / (XI * XI);
        let expected = scale * scale * 6.0 / (16.0 * PI * PI * r.powi(6));
        assert_relative_eq!(tr, expected, max_relative = 1e-12);
    }

    #[test]
    fn static_kernel_is_the_zero_frequency_kernel() {
        let rv = [0.2e-9, -0.5e-9, 0.9e-9];
        assert_eq!(retarded_kernel(rv, 0.0), static_kernel(rv));
    }

    #[test]
    fn rejects_degenerate_arguments() {
        assert_eq!(vacuum_green([0.0, 0.0, 0.0], XI).unwrap_err(), GreenError::CoincidentPoints);
        assert_eq!(vacuum_green([0.0, 0.0, R], 0.0).unwrap_err(), GreenError::StaticPole);
        assert_eq!(near_field_green([0.0, 0.0, 0.0], XI).unwrap_err(), GreenError::CoincidentPoints);
        assert_eq!(near_field_green([0.0, 0.0, R], -1.0).unwrap_err(), GreenError::StaticPole);
    }
}
