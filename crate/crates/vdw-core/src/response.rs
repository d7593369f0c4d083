//! Polarisabilities on the imaginary frequency axis: the bare response of a
//! reference state, generalised transition responses, and the first-order
//! corrections induced by an interaction self-energy.
//!
//! Everything here is built from one resonant sum,
//!
//! ```text
//! α(iξ) = (1/ħ) Σ_k  ω̄_k · (a_k ⊗ b_k + b_k ⊗ a_k) / (ω̄_k² + ξ²),
//! ```
//!
//! evaluated with real dipole vectors, so all matrices are real and
//! symmetric. For isotropic systems each dyad is replaced by its orientation
//! average (2/3)(a·b)·𝟙 and the result is a multiple of the identity.
//!
//! Terms whose denominator ω̄² + ξ² vanishes are skipped: for a validated
//! system their numerators vanish identically (zero dyads on the diagonal),
//! and the continuous ξ → 0 limit of the combination is zero, so the static
//! limit is evaluable everywhere.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::backaction::SelfEnergyMatrix;
use crate::levels::LevelSystem;
use crate::quantities::CODATA_2018;
use crate::tensor::{add_scaled, dot, Matrix3, Vec3};

/// What a [`Polarisability`] matrix represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResponseKind {
    /// Unperturbed response of the reference state.
    Bare,
    /// First-order response change from state mixing (wavefunction part).
    WfCorrection,
    /// First-order response change from level shifts (energy part).
    EnCorrection,
    /// Bare + both first-order corrections.
    Dressed,
    /// Generalised transition response α^(cm) connecting `mixed` to the
    /// reference state.
    Transition {
        /// The admixed state c.
        mixed: usize,
        /// The reference state m.
        reference: usize,
    },
}

/// A polarisability-like 3×3 response matrix at one imaginary frequency.
#[derive(Clone, Copy, Debug)]
pub struct Polarisability {
    /// The response matrix in C²·m²/J; real and symmetric.
    pub matrix: Matrix3,
    /// ξ in rad/s.
    pub imag_frequency: f64,
    /// The state the response refers to.
    pub reference_state: usize,
    /// Which physical object the matrix is.
    pub kind: ResponseKind,
}

/// Failure modes of the response constructors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ResponseError {
    /// A state index is outside the system.
    StateOutOfRange {
        /// The offending index.
        state: usize,
        /// Number of levels available.
        n_levels: usize,
    },
    /// ξ must be ≥ 0 (imaginary-axis evaluation only).
    NegativeFrequency {
        /// The offending frequency.
        xi: f64,
    },
    /// Two distinct states are degenerate, so first-order mixing
    /// coefficients are undefined. Unreachable for validated systems; kept
    /// as a defensive check.
    DegenerateMixing {
        /// The admixed state.
        mixed: usize,
        /// The reference state.
        reference: usize,
    },
    /// A self-energy or shift container does not match the system size.
    ShapeMismatch {
        /// Levels in the system.
        expected: usize,
        /// Levels implied by the container.
        found: usize,
    },
}

impl fmt::Display for ResponseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ResponseError::StateOutOfRange { state, n_levels } => {
                write!(f, "state {state} out of range for a {n_levels}-level system")
            }
            ResponseError::NegativeFrequency { xi } => {
                write!(f, "imaginary frequency must be >= 0, got {xi:e}")
            }
            ResponseError::DegenerateMixing { mixed, reference } => {
                write!(f, "degenerate mixing: states {mixed} and {reference} share an energy")
            }
            ResponseError::ShapeMismatch { expected, found } => {
                write!(f, "container built for {found} levels, system has {expected}")
            }
        }
    }
}

impl core::error::Error for ResponseError {}

fn check_state(sys: &LevelSystem, state: usize) -> Result<(), ResponseError> {
    if state < sys.n_levels() {
        Ok(())
    } else {
        Err(ResponseError::StateOutOfRange {
            state,
            n_levels: sys.n_levels(),
        })
    }
}

fn check_frequency(xi: f64) -> Result<(), ResponseError> {
    if xi >= 0.0 {
        Ok(())
    } else {
        Err(ResponseError::NegativeFrequency { xi })
    }
}

/// `a ⊗ b + b ⊗ a`, or its orientation average (2/3)(a·b)·𝟙 when the system
/// is isotropic. Symmetric by construction either way.
pub(crate) fn pair_dyad(a: Vec3, b: Vec3, isotropic: bool) -> Matrix3 {
    let mut m = Matrix3::ZERO;
    if isotropic {
        let s = 2.0 / 3.0 * dot(a, b);
        m.0[0][0] = s;
        m.0[1][1] = s;
        m.0[2][2] = s;
    } else {
        for i in 0..3 {
            for j in i..3 {
                let v = a[i] * b[j] + b[i] * a[j];
                m.0[i][j] = v;
                m.0[j][i] = v;
            }
        }
    }
    m
}

/// The resonant sum shared by every polarisability-like object: bare and
/// transition responses, and the responses rebuilt from dressed parameters.
/// Keeping a single code path makes those objects agree bit-for-bit in the
/// limits where they coincide.
pub(crate) fn resonant_sum<W, D>(
    n_levels: usize,
    omega: W,
    pair: D,
    isotropic: bool,
    xi: f64,
) -> Matrix3
where
    W: Fn(usize) -> f64,
    D: Fn(usize) -> (Vec3, Vec3),
{
    let mut acc = Matrix3::ZERO;
    for k in 0..n_levels {
        let w = omega(k);
        let denom = w * w + xi * xi;
        if denom == 0.0 {
            continue;
        }
        let (a, b) = pair(k);
        acc += pair_dyad(a, b, isotropic) * (w / denom);
    }
    acc * (1.0 / CODATA_2018.hbar)
}

/// Unchecked matrix core of [`alpha_transition`]; also the integrand body
/// used by the self-energy assembly.
pub(crate) fn transition_matrix(sys: &LevelSystem, c: usize, m: usize, xi: f64) -> Matrix3 {
    let midpoint = 0.5 * (sys.energy(c) + sys.energy(m));
    resonant_sum(
        sys.n_levels(),
        |k| (sys.energy(k) - midpoint) / CODATA_2018.hbar,
        |k| (sys.dipole(c, k), sys.dipole(k, m)),
        sys.is_isotropic(),
        xi,
    )
}

/// Generalised transition polarisability α^(cm)(iξ): the response object
/// that couples the admixture of state `c` into reference state `m` to the
/// field fluctuations. Resonances sit at the mean of the two state energies;
/// for `c == m` this reduces bit-exactly to the bare response.
pub fn alpha_transition(
    sys: &LevelSystem,
    c: usize,
    m: usize,
    xi: f64,
) -> Result<Polarisability, ResponseError> {
    check_state(sys, c)?;
    check_state(sys, m)?;
    check_frequency(xi)?;
    Ok(Polarisability {
        matrix: transition_matrix(sys, c, m, xi),
        imag_frequency: xi,
        reference_state: m,
        kind: ResponseKind::Transition {
            mixed: c,
            reference: m,
        },
    })
}

/// Bare polarisability of reference state `m` at imaginary frequency ξ.
pub fn alpha_bare(sys: &LevelSystem, m: usize, xi: f64) -> Result<Polarisability, ResponseError> {
    let mut p = alpha_transition(sys, m, m, xi)?;
    p.kind = ResponseKind::Bare;
    Ok(p)
}

/// First-order mixing coefficients c_cm = Σ_cm / (E_m − E_c) for c ≠ m,
/// zero on the diagonal; row-major n². The same coefficients drive both the
/// wavefunction correction and the dressed-parameter construction.
pub(crate) fn mixing_coefficients(
    sys: &LevelSystem,
    sigma: &SelfEnergyMatrix,
) -> Result<Vec<f64>, ResponseError> {
    let n = sys.n_levels();
    if sigma.n_levels() != n {
        return Err(ResponseError::ShapeMismatch {
            expected: n,
            found: sigma.n_levels(),
        });
    }
    let mut coeff = alloc::vec![0.0; n * n];
    for c in 0..n {
        for m in 0..n {
            if c == m {
                continue;
            }
            let gap = sys.energy(m) - sys.energy(c);
            if gap == 0.0 {
                return Err(ResponseError::DegenerateMixing {
                    mixed: c,
                    reference: m,
                });
            }
            coeff[c * n + m] = sigma.entry(c, m) / gap;
        }
    }
    Ok(coeff)
}

/// First-order dipole change δd^(km) induced by the mixing coefficients:
/// admixtures into the reference state and into every intermediate state.
pub(crate) fn dipole_correction(
    sys: &LevelSystem,
    coeff: &[f64],
    k: usize,
    m: usize,
) -> Vec3 {
    let n = sys.n_levels();
    let mut dd = [0.0; 3];
    for c in 0..n {
        if c != m {
            dd = add_scaled(dd, coeff[c * n + m], sys.dipole(k, c));
        }
        if c != k {
            dd = add_scaled(dd, coeff[c * n + k], sys.dipole(c, m));
        }
    }
    dd
}

/// Wavefunction part of the first-order response change: the complete
/// linearisation of the resonant sum in the perturbed dipoles,
///
/// ```text
/// Δα = (1/ħ) Σ_k [2 ω_km/(ω_km² + ξ²)] · (d^(mk) ⊗ δd^(km) + δd^(km) ⊗ d^(mk)),
/// δd^(km) = Σ_{c≠m} c_cm d^(kc) + Σ_{c≠k} c_ck d^(cm).
/// ```
///
/// Linear in Σ by construction.
pub fn delta_alpha_wf(
    sys: &LevelSystem,
    m: usize,
    sigma: &SelfEnergyMatrix,
    xi: f64,
) -> Result<Polarisability, ResponseError> {
    check_state(sys, m)?;
    check_frequency(xi)?;
    let coeff = mixing_coefficients(sys, sigma)?;
    let matrix = resonant_sum(
        sys.n_levels(),
        |k| sys.transition_frequency(k, m),
        |k| (sys.dipole(m, k), dipole_correction(sys, &coeff, k, m)),
        sys.is_isotropic(),
        xi,
    ) * 2.0;
    Ok(Polarisability {
        matrix,
        imag_frequency: xi,
        reference_state: m,
        kind: ResponseKind::WfCorrection,
    })
}

/// Energy part of the first-order response change: the derivative of the
/// bare response with respect to its resonance positions, weighted by the
/// per-level angular frequency shifts (rad/s),
///
/// ```text
/// Δα = −(1/ħ) Σ_k Δω_km (ω_km² − ξ²)/(ω_km² + ξ²)² · (d^(mk) ⊗ d^(km) + ...),
/// Δω_km = shift_k − shift_m.
/// ```
pub fn delta_alpha_en(
    sys: &LevelSystem,
    m: usize,
    shifts: &[f64],
    xi: f64,
) -> Result<Polarisability, ResponseError> {
    check_state(sys, m)?;
    check_frequency(xi)?;
    let n = sys.n_levels();
    if shifts.len() != n {
        return Err(ResponseError::ShapeMismatch {
            expected: n,
            found: shifts.len(),
        });
    }
    let mut acc = Matrix3::ZERO;
    for k in 0..n {
        let w = sys.transition_frequency(k, m);
        let denom = w * w + xi * xi;
        if denom == 0.0 {
            continue;
        }
        let dw = shifts[k] - shifts[m];
        let pair = pair_dyad(sys.dipole(m, k), sys.dipole(k, m), sys.is_isotropic());
        acc += pair * (-dw * (w * w - xi * xi) / (denom * denom));
    }
    Ok(Polarisability {
        matrix: acc * (1.0 / CODATA_2018.hbar),
        imag_frequency: xi,
        reference_state: m,
        kind: ResponseKind::EnCorrection,
    })
}

/// Dressed polarisability to first order in Σ: bare response plus the
/// wavefunction and energy corrections, with the level shifts read off the
/// diagonal of Σ.
pub fn alpha_dressed(
    sys: &LevelSystem,
    m: usize,
    sigma: &SelfEnergyMatrix,
    xi: f64,
) -> Result<Polarisability, ResponseError> {
    let bare = alpha_bare(sys, m, xi)?;
    let wf = delta_alpha_wf(sys, m, sigma, xi)?;
    let shifts: Vec<f64> = (0..sys.n_levels())
        .map(|k| sigma.entry(k, k) / CODATA_2018.hbar)
        .collect();
    let en = delta_alpha_en(sys, m, &shifts, xi)?;
    Ok(Polarisability {
        matrix: bare.matrix + wf.matrix + en.matrix,
        imag_frequency: xi,
        reference_state: m,
        kind: ResponseKind::Dressed,
    })
}

/// Anything that can serve as a partner response inside a dispersion
/// integral. Implementations must be pure in ξ (same input, same output)
/// and are only queried at ξ ≥ 0.
pub trait AlphaProvider {
    /// α(iξ) as a 3×3 matrix in C²·m²/J.
    fn alpha(&self, xi: f64) -> Matrix3;
    /// Short human-readable tag recorded in diagnostics.
    fn descriptor(&self) -> String;
}

/// The bare response of one state of a level system.
#[derive(Clone, Copy, Debug)]
pub struct BareAlpha<'a> {
    system: &'a LevelSystem,
    state: usize,
}

impl<'a> BareAlpha<'a> {
    /// Bare response of the ground state.
    #[must_use]
    pub fn ground(system: &'a LevelSystem) -> BareAlpha<'a> {
        BareAlpha { system, state: 0 }
    }

    /// Bare response of an arbitrary reference state.
    pub fn new(system: &'a LevelSystem, state: usize) -> Result<BareAlpha<'a>, ResponseError> {
        check_state(system, state)?;
        Ok(BareAlpha { system, state })
    }
}

impl AlphaProvider for BareAlpha<'_> {
    fn alpha(&self, xi: f64) -> Matrix3 {
        transition_matrix(self.system, self.state, self.state, xi)
    }

    fn descriptor(&self) -> String {
        format!("bare:{}", self.system.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backaction::SelfEnergyMatrix;
    use approx::assert_relative_eq;

    fn two_level() -> LevelSystem {
        LevelSystem::from_spectroscopic("two-level probe", &[0.0, 2.0], &[(0, 1, 3.0)], true)
            .unwrap()
    }

    fn example_sigma(sys: &LevelSystem) -> SelfEnergyMatrix {
        let mut sigma = SelfEnergyMatrix::zero(sys.n_levels(), 1e-9);
        sigma.set_symmetric(0, 2, 1e-25);
        sigma
    }

    #[test]
    fn static_polarisability_of_the_two_level_probe() {
        let sys = two_level();
        let a = alpha_bare(&sys, 0, 0.0).unwrap();
        assert_relative_eq!(
            a.matrix[(0, 0)],
            2.083_384_626_467_379_8e-40,
            max_relative = 1e-13
        );
        // As a polarisability volume α/(4πε₀), a convenient sanity scale.
        let vol = a.matrix[(0, 0)]
            / (4.0 * core::f64::consts::PI * crate::quantities::CODATA_2018.eps0);
        assert_relative_eq!(vol, 1.872_452_723_357_627e-30, max_relative = 1e-13);
    }

    #[test]
    fn ground_response_of_the_reference_system() {
        let sys = LevelSystem::three_level_default();
        let at0 = alpha_bare(&sys, 0, 0.0).unwrap().matrix;
        let at1e15 = alpha_bare(&sys, 0, 1e15).unwrap().matrix;
        assert_relative_eq!(at0[(0, 0)], 2.830_316_596_252_722e-40, max_relative = 1e-13);
        assert_relative_eq!(at1e15[(0, 0)], 2.592_411_271_437_885_8e-40, max_relative = 1e-13);
    }

    #[test]
    fn transition_response_reference_values() {
        let sys = LevelSystem::three_level_default();
        let t20_static = alpha_transition(&sys, 2, 0, 0.0).unwrap().matrix;
        let t20 = alpha_transition(&sys, 2, 0, 1e15).unwrap().matrix;
        let t10_static = alpha_transition(&sys, 1, 0, 0.0).unwrap().matrix;
        let t10 = alpha_transition(&sys, 1, 0, 1e15).unwrap().matrix;
        assert_relative_eq!(t20_static[(0, 0)], 2.777_846_168_623_172_8e-40, max_relative = 1e-13);
        assert_relative_eq!(t20[(0, 0)], 1.016_419_579_485_173e-40, max_relative = 1e-13);
        assert_relative_eq!(t10_static[(0, 0)], 5.092_717_975_809_152e-41, max_relative = 1e-13);
        assert_relative_eq!(t10[(0, 0)], 4.595_027_161_001_916e-41, max_relative = 1e-13);
    }

    #[test]
    fn transition_reduces_to_bare_bit_exactly() {
        let sys = LevelSystem::three_level_default();
        for m in 0..3 {
            for &xi in &[0.0, 3.3e14, 1e15, 7.7e16] {
                let bare = alpha_bare(&sys, m, xi).unwrap().matrix;
                let trans = alpha_transition(&sys, m, m, xi).unwrap().matrix;
                for i in 0..3 {
                    for j in 0..3 {
                        assert_eq!(bare[(i, j)].to_bits(), trans[(i, j)].to_bits());
                    }
                }
            }
        }
    }

    #[test]
    fn isotropic_responses_are_scalar_and_decaying() {
        let sys = LevelSystem::three_level_default();
        let mut last = f64::INFINITY;
        for &xi in &[0.0, 1e14, 1e15, 1e16, 1e17] {
            let m = alpha_bare(&sys, 0, xi).unwrap().matrix;
            assert_eq!(m[(0, 0)], m[(1, 1)]);
            assert_eq!(m[(1, 1)], m[(2, 2)]);
            assert_eq!(m[(0, 1)], 0.0);
            assert!(m.is_symmetric(0.0));
            assert!(m[(0, 0)] > 0.0, "ground response must stay positive");
            assert!(m[(0, 0)] < last, "ground response must decay in xi");
            last = m[(0, 0)];
        }
    }

    #[test]
    fn transition_response_is_symmetric_in_its_indices_up_to_transpose() {
        let sys = LevelSystem::three_level_default();
        let a = alpha_transition(&sys, 2, 0, 5e14).unwrap().matrix;
        let b = alpha_transition(&sys, 0, 2, 5e14).unwrap().matrix;
        for i in 0..3 {
            for j in 0..3 {
                assert_relative_eq!(a[(i, j)], b[(j, i)], max_relative = 1e-14, epsilon = 1e-60);
            }
        }
    }

    #[test]
    fn wavefunction_correction_reference_values() {
        let sys = LevelSystem::three_level_default();
        let sigma = example_sigma(&sys);
        let at0 = delta_alpha_wf(&sys, 0, &sigma, 0.0).unwrap().matrix;
        let at1e15 = delta_alpha_wf(&sys, 0, &sigma, 1e15).unwrap().matrix;
        assert_relative_eq!(at0[(0, 0)], -2.889_658_678_152_933_4e-47, max_relative = 1e-12);
        assert_relative_eq!(at1e15[(0, 0)], -2.607_263_974_798_829_5e-47, max_relative = 1e-12);
        assert!(at0.is_symmetric(0.0));
    }

    #[test]
    fn corrections_vanish_for_zero_sigma() {
        let sys = LevelSystem::three_level_default();
        let sigma = SelfEnergyMatrix::zero(3, 1e-9);
        let wf = delta_alpha_wf(&sys, 0, &sigma, 4e14).unwrap().matrix;
        let en = delta_alpha_en(&sys, 0, &[0.0; 3], 4e14).unwrap().matrix;
        assert_eq!(wf, Matrix3::ZERO);
        assert_eq!(en, Matrix3::ZERO);
        let dressed = alpha_dressed(&sys, 0, &sigma, 4e14).unwrap().matrix;
        let bare = alpha_bare(&sys, 0, 4e14).unwrap().matrix;
        assert_eq!(dressed, bare);
    }

    #[test]
    fn corrections_are_linear_in_sigma() {
        let sys = LevelSystem::three_level_default();
        let sigma = example_sigma(&sys);
        // Power-of-two scalings commute with rounding: exact equality.
        let doubled = delta_alpha_wf(&sys, 0, &sigma.scaled(2.0), 3e14).unwrap().matrix;
        let reference = delta_alpha_wf(&sys, 0, &sigma, 3e14).unwrap().matrix * 2.0;
        assert_eq!(doubled, reference);
        // A general factor agrees to rounding accuracy.
        let scaled = delta_alpha_wf(&sys, 0, &sigma.scaled(0.3), 3e14).unwrap().matrix;
        let expected = delta_alpha_wf(&sys, 0, &sigma, 3e14).unwrap().matrix * 0.3;
        for i in 0..3 {
            assert_relative_eq!(scaled[(i, i)], expected[(i, i)], max_relative = 1e-14);
        }
    }

    #[test]
    fn energy_correction_matches_finite_differences() {
        // Shift level 1 upward by a small δω and compare Δα_en against the
        // bare responses of the shifted and unshifted systems.
        let sys = LevelSystem::three_level_default();
        let dw = 1e-8 * sys.transition_frequency(1, 0);
        let shifted = LevelSystem::new(
            "shifted copy",
            alloc::vec![
                sys.energy(0),
                sys.energy(1) + dw * crate::quantities::CODATA_2018.hbar,
                sys.energy(2),
            ],
            (0..3)
                .flat_map(|k| (0..3).map(move |m| (k, m)))
                .map(|(k, m)| sys.dipole(k, m))
                .collect(),
            true,
        )
        .unwrap();
        for &xi in &[0.0, 5e14, 2e15] {
            let fd = alpha_bare(&shifted, 0, xi).unwrap().matrix
                - alpha_bare(&sys, 0, xi).unwrap().matrix;
            let en = delta_alpha_en(&sys, 0, &[0.0, dw, 0.0], xi).unwrap().matrix;
            assert_relative_eq!(en[(0, 0)], fd[(0, 0)], max_relative = 2e-6);
        }
    }

    #[test]
    fn energy_correction_sign_is_physical() {
        // Raising every resonance lowers the static polarisability.
        let sys = LevelSystem::three_level_default();
        let up = delta_alpha_en(&sys, 0, &[0.0, 1e13, 1e13], 0.0).unwrap().matrix;
        assert!(up[(0, 0)] < 0.0);
    }

    #[test]
    fn state_and_shape_errors() {
        let sys = LevelSystem::three_level_default();
        assert_eq!(
            alpha_bare(&sys, 7, 0.0).unwrap_err(),
            ResponseError::StateOutOfRange { state: 7, n_levels: 3 }
        );
        assert_eq!(
            alpha_bare(&sys, 0, -1.0).unwrap_err(),
            ResponseError::NegativeFrequency { xi: -1.0 }
        );
        let small = SelfEnergyMatrix::zero(2, 1e-9);
        assert_eq!(
            delta_alpha_wf(&sys, 0, &small, 0.0).unwrap_err(),
            ResponseError::ShapeMismatch { expected: 3, found: 2 }
        );
        assert_eq!(
            delta_alpha_en(&sys, 0, &[0.0; 2], 0.0).unwrap_err(),
            ResponseError::ShapeMismatch { expected: 3, found: 2 }
        );
    }

    #[test]
    fn provider_matches_the_checked_constructor() {
        let sys = LevelSystem::three_level_default();
        let provider = BareAlpha::ground(&sys);
        for &xi in &[0.0, 1e15] {
            assert_eq!(provider.alpha(xi), alpha_bare(&sys, 0, xi).unwrap().matrix);
        }
        assert!(provider.descriptor().contains("bare"));
        assert!(BareAlpha::new(&sys, 5).is_err());
    }
}
