//! Pair dispersion potentials on the imaginary-frequency axis, effective
//! C6 coefficients, and the scaling estimates that locate the separation
//! below which radiative backaction starts to matter.
//!
//! The central quantity is
//!
//! ```text
//! U(r) = −(ħ μ₀² c⁴ / 2π) ∫₀^∞ dξ Tr[α_A(iξ) · k(iξ,r) · α_B(iξ) · k(iξ,r)],
//! ```
//!
//! with k the reduced free-space kernel and α_A, α_B any response
//! providers — bare or dressed. Dividing out the London form gives the
//! distance-dependent effective coefficient C6_eff(r) = −U(r)·r⁶.

use alloc::string::String;
use core::fmt;

use crate::backaction::{
    dispersion_prefactor, interaction_trace, self_consistent_solve, BackactionError, Scheme,
    SolverOptions,
};
use crate::green::{retarded_kernel, static_kernel};
use crate::levels::LevelSystem;
use crate::math::cbrt;
use crate::quad::{integrate_semi_infinite, QuadratureError, QuadratureSpec};
use crate::quantities::CODATA_2018;
use crate::response::{AlphaProvider, BareAlpha};
use crate::tensor::dot;

/// One evaluated sweep entry: the potential at one separation under one
/// approximation scheme, with the dressing diagnostics that came with it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PotentialPoint {
    /// Separation in metres.
    pub r: f64,
    /// Approximation level the entry was computed under.
    pub scheme: Scheme,
    /// Interaction energy U(r) in joules (negative for attraction).
    pub u: f64,
    /// Effective coefficient −U·r⁶ in J·m⁶.
    pub c6_eff: f64,
    /// C6_eff relative to the bare scheme at the same separation; exactly 1
    /// for bare rows.
    pub c6_ratio: f64,
    /// |d̃₀₁/d₀₁|² of system A (1 when undressed).
    pub dipole_ratio_sq: f64,
    /// Largest mixing coefficient across both systems.
    pub max_mixing: f64,
    /// Fixed-point iterations spent (0 bare, 1 one-sided).
    pub iterations: usize,
}

/// Failure modes of the analytic helpers.
#[derive(Clone, Debug, PartialEq)]
pub enum PotentialError {
    /// The closed-form C6 sum assumes orientation-averaged responses.
    AnisotropicUnsupported {
        /// Label of the offending system.
        label: String,
    },
}

impl fmt::Display for PotentialError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialError::AnisotropicUnsupported { label } => write!(
                f,
                "the analytic C6 sum needs an isotropic system, `{label}` is anisotropic"
            ),
        }
    }
}

impl core::error::Error for PotentialError {}

/// Dispersion potential between two response providers at separation `r`
/// metres (along ẑ), retardation included. Returns joules.
pub fn vdw_potential(
    alpha_a: &dyn AlphaProvider,
    alpha_b: &dyn AlphaProvider,
    r: f64,
    spec: &QuadratureSpec,
) -> Result<f64, QuadratureError> {
    let r_vec = [0.0, 0.0, r];
    let q = integrate_semi_infinite(
        |xi| {
            let kernel = retarded_kernel(r_vec, xi);
            interaction_trace(alpha_a.alpha(xi), alpha_b.alpha(xi), kernel)
        },
        spec,
    )?;
    Ok(dispersion_prefactor() * q.value)
}

/// Same integral with the static (non-retarded) kernel: the London limit,
/// exactly ∝ r⁻⁶ for any providers.
pub fn vdw_potential_near_field(
    alpha_a: &dyn AlphaProvider,
    alpha_b: &dyn AlphaProvider,
    r: f64,
    spec: &QuadratureSpec,
) -> Result<f64, QuadratureError> {
    let kernel = static_kernel([0.0, 0.0, r]);
    let q = integrate_semi_infinite(
        |xi| interaction_trace(alpha_a.alpha(xi), alpha_b.alpha(xi), kernel),
        spec,
    )?;
    Ok(dispersion_prefactor() * q.value)
}

/// Bare-scheme potential: both systems respond with their free-space
/// ground-state polarisabilities.
pub fn bare_potential(
    sys_a: &LevelSystem,
    sys_b: &LevelSystem,
    r: f64,
    spec: &QuadratureSpec,
) -> Result<f64, QuadratureError> {
    vdw_potential(
        &BareAlpha::ground(sys_a),
        &BareAlpha::ground(sys_b),
        r,
        spec,
    )
}

/// Effective C6 read off a potential value: C6_eff = −U·r⁶, in J·m⁶.
#[must_use]
pub fn c6_eff(u: f64, r: f64) -> f64 {
    let r3 = r * r * r;
    -u * r3 * r3
}

/// Closed-form London coefficient for two isotropic systems in their
/// ground states:
///
/// ```text
/// C6 = (2 / 3ħ(4πε₀)²) Σ_{p,q} |d_A^(0p)|² |d_B^(0q)|² / (ω_A^p + ω_B^q).
/// ```
///
/// This is the exact value of the near-field integral, used as an
/// independent cross-check of the quadrature.
pub fn c6_bare_analytic(
    sys_a: &LevelSystem,
    sys_b: &LevelSystem,
) -> Result<f64, PotentialError> {
    for sys in [sys_a, sys_b] {
        if !sys.is_isotropic() {
            return Err(PotentialError::AnisotropicUnsupported {
                label: String::from(sys.label()),
            });
        }
    }
    let k = CODATA_2018;
    let coulomb = 4.0 * core::f64::consts::PI * k.eps0;
    let prefactor = 2.0 / (3.0 * k.hbar * coulomb * coulomb);
    let mut acc = 0.0;
    for p in 1..sys_a.n_levels() {
        let da = sys_a.dipole(0, p);
        let da_sq = dot(da, da);
        for q in 1..sys_b.n_levels() {
            let db = sys_b.dipole(0, q);
            let db_sq = dot(db, db);
            acc += da_sq * db_sq
                / (sys_a.transition_frequency(p, 0) + sys_b.transition_frequency(q, 0));
        }
    }
    Ok(prefactor * acc)
}

/// Dimensionless estimate of the strongest mixing coefficient a partner
/// with dipole scale `dipole` (C·m) induces across a level gap `delta_e`
/// (J) at separation `r` (m): d⁴ / ((4πε₀)² ΔE² r⁶).
#[must_use]
pub fn mixing_estimate(dipole: f64, delta_e: f64, r: f64) -> f64 {
    let coulomb = 4.0 * core::f64::consts::PI * CODATA_2018.eps0;
    let d_sq = dipole * dipole;
    let r3 = r * r * r;
    (d_sq * d_sq) / (coulomb * coulomb * delta_e * delta_e * r3 * r3)
}

/// The separation where [`mixing_estimate`] reaches unity: the crossover
/// below which backaction corrections stop being small,
/// r* = (d² / (4πε₀ ΔE))^(1/3).
#[must_use]
pub fn r_star(dipole: f64, delta_e: f64) -> f64 {
    let coulomb = 4.0 * core::f64::consts::PI * CODATA_2018.eps0;
    cbrt(dipole * dipole / (coulomb * delta_e))
}

/// Evaluates one (separation, scheme) entry. `u_bare` must be the bare
/// potential at the same separation and quadrature spec; it anchors the
/// C6 ratio and lets the bare scheme skip its redundant integral.
pub fn evaluate_scheme(
    sys_a: &LevelSystem,
    sys_b: &LevelSystem,
    r: f64,
    opts: &SolverOptions,
    spec: &QuadratureSpec,
    u_bare: f64,
) -> Result<PotentialPoint, BackactionError> {
    let report = self_consistent_solve(sys_a, sys_b, r, opts, spec)?;
    let u = match opts.scheme {
        Scheme::Bare => u_bare,
        Scheme::OneSided | Scheme::SelfConsistent => vdw_potential(
            &report.a.alpha_provider(0),
            &report.b.alpha_provider(0),
            r,
            spec,
        )?,
    };
    Ok(PotentialPoint {
        r,
        scheme: opts.scheme,
        u,
        c6_eff: c6_eff(u, r),
        c6_ratio: c6_eff(u, r) / c6_eff(u_bare, r),
        dipole_ratio_sq: report.a.diagnostics.dipole_ratio_sq,
        max_mixing: report
            .a
            .diagnostics
            .max_mixing
            .max(report.b.diagnostics.max_mixing),
        iterations: report.iterations,
    })
}
