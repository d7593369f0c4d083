//! Radiative backaction between a pair of emitters: the interaction
//! self-energy matrix a partner induces on a level system, the dressed
//! spectra and dipoles that follow from it, and the mutual fixed-point
//! solver that makes the dressing of both partners self-consistent.
//!
//! Three schemes are exposed through one entry point,
//! [`self_consistent_solve`]:
//!
//! * **bare** — no backaction, both systems keep their free-space
//!   parameters (zero iterations);
//! * **one-sided** — A is dressed by the bare response of B, B stays bare
//!   (one self-energy evaluation);
//! * **self-consistent** — both systems are dressed and the pair is
//!   iterated to a fixed point with optional damping.
//!
//! The one-sided result is, by construction, bit-identical to the first
//! iterate of the undamped self-consistent loop: both flow through the same
//! self-energy assembly, the same dressing, and the same quadrature.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::green::retarded_kernel;
use crate::levels::LevelSystem;
use crate::quad::{integrate_semi_infinite, QuadratureError, QuadratureSpec};
use crate::quantities::CODATA_2018;
use crate::response::{
    mixing_coefficients, resonant_sum, transition_matrix, AlphaProvider, BareAlpha,
    ResponseError,
};
use crate::tensor::{norm, Matrix3, Vec3};

/// −ħ μ₀² c⁴ / 2π — the prefactor multiplying every ξ-integrated
/// interaction trace. The c⁴ absorbs the ξ⁴ measure against the 1/ξ²
/// normalisation of the Green tensor, so integrands stay finite at ξ = 0.
pub(crate) fn dispersion_prefactor() -> f64 {
    let k = CODATA_2018;
    let c2 = k.c * k.c;
    -(k.hbar * k.mu0 * k.mu0 * c2 * c2) / (2.0 * core::f64::consts::PI)
}

/// Tr[α_A · k · α_B · k] in a fixed association order, so every caller sums
/// the same floating-point expression.
pub(crate) fn interaction_trace(alpha_a: Matrix3, alpha_b: Matrix3, kernel: Matrix3) -> f64 {
    ((alpha_a * kernel) * (alpha_b * kernel)).trace()
}

/// Interaction self-energy matrix Σ of one system, induced by a partner at
/// fixed separation. Entries are energies in joules; the matrix is real and
/// symmetric by assembly.
#[derive(Clone, Debug, PartialEq)]
pub struct SelfEnergyMatrix {
    n: usize,
    entries: Vec<f64>,
    /// Separation the matrix was evaluated at, in metres.
    pub separation: f64,
    /// Descriptor of the partner response that induced it.
    pub partner: String,
}

impl SelfEnergyMatrix {
    /// The zero matrix: no backaction.
    #[must_use]
    pub fn zero(n_levels: usize, separation: f64) -> Self {
        SelfEnergyMatrix {
            n: n_levels,
            entries: vec![0.0; n_levels * n_levels],
            separation,
            partner: String::from("none"),
        }
    }

    /// Builds from a row-major n×n slice, symmetrising via (Σ + Σᵀ)/2.
    ///
    /// # Panics
    /// If `entries.len() != n_levels²`.
    #[must_use]
    pub fn from_entries(
        n_levels: usize,
        entries: &[f64],
        separation: f64,
        partner: &str,
    ) -> Self {
        assert_eq!(
            entries.len(),
            n_levels * n_levels,
            "self-energy entries must form a square matrix"
        );
        let mut sym = vec![0.0; entries.len()];
        for c in 0..n_levels {
            for m in 0..n_levels {
                sym[c * n_levels + m] =
                    0.5 * (entries[c * n_levels + m] + entries[m * n_levels + c]);
            }
        }
        SelfEnergyMatrix {
            n: n_levels,
            entries: sym,
            separation,
            partner: String::from(partner),
        }
    }

    /// Number of levels the matrix refers to.
    #[must_use]
    pub fn n_levels(&self) -> usize {
        self.n
    }

    /// Σ_cm in joules.
    #[must_use]
    pub fn entry(&self, c: usize, m: usize) -> f64 {
        self.entries[c * self.n + m]
    }

    /// Sets Σ_cm and Σ_mc to the same value.
    pub fn set_symmetric(&mut self, c: usize, m: usize, value: f64) {
        self.entries[c * self.n + m] = value;
        self.entries[m * self.n + c] = value;
    }

    /// A copy with every entry multiplied by `factor`.
    #[must_use]
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e *= factor;
        }
        out
    }

    /// Largest |Σ_cm| over c ≠ m.
    #[must_use]
    pub fn max_abs_offdiagonal(&self) -> f64 {
        let mut worst = 0.0f64;
        for c in 0..self.n {
            for m in 0..self.n {
                if c != m {
                    worst = worst.max(crate::math::abs(self.entry(c, m)));
                }
            }
        }
        worst
    }
}

/// Health indicators of a first-order dressing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DressDiagnostics {
    /// Largest |c_cm| over all off-diagonal pairs.
    pub max_mixing: f64,
    /// |d̃₀₁ / d₀₁|² — the squared dressed-to-bare ratio of the principal
    /// transition dipole.
    pub dipole_ratio_sq: f64,
    /// Set when `max_mixing` exceeds 0.3: the dressing is still finite but
    /// first-order perturbation theory is no longer trustworthy.
    pub strong_mixing: bool,
}

/// A level system together with the first-order dressed parameters induced
/// by an interaction self-energy: shifted transition frequencies, corrected
/// transition dipoles, and the mixing coefficients that produced them.
#[derive(Clone, Debug, PartialEq)]
pub struct DressedSystem {
    base: LevelSystem,
    omegas: Vec<f64>,
    dipoles: Vec<Vec3>,
    mixing: Vec<f64>,
    /// Health indicators recorded at dressing time.
    pub diagnostics: DressDiagnostics,
}

impl DressedSystem {
    /// The underlying free-space system.
    #[must_use]
    pub fn base(&self) -> &LevelSystem {
        &self.base
    }

    /// Dressed transition frequency ω̃_km in rad/s.
    #[must_use]
    pub fn omega(&self, k: usize, m: usize) -> f64 {
        self.omegas[k * self.base.n_levels() + m]
    }

    /// Dressed transition dipole d̃^(km) in C·m.
    #[must_use]
    pub fn dipole(&self, k: usize, m: usize) -> Vec3 {
        self.dipoles[k * self.base.n_levels() + m]
    }

    /// Mixing coefficient c_cm (zero on the diagonal).
    #[must_use]
    pub fn mixing(&self, c: usize, m: usize) -> f64 {
        self.mixing[c * self.base.n_levels() + m]
    }

    /// Polarisability of reference state `m` rebuilt from the dressed
    /// frequencies and dipoles. For a zero self-energy this reproduces the
    /// bare response bit-for-bit.
    #[must_use]
    pub fn alpha(&self, m: usize, xi: f64) -> Matrix3 {
        resonant_sum(
            self.base.n_levels(),
            |k| self.omega(k, m),
            |k| (self.dipole(m, k), self.dipole(k, m)),
            self.base.is_isotropic(),
            xi,
        )
    }

    /// A borrowing [`AlphaProvider`] for reference state `m`.
    #[must_use]
    pub fn alpha_provider(&self, m: usize) -> DressedAlpha<'_> {
        DressedAlpha { system: self, state: m }
    }
}

/// Response provider backed by a dressed system.
#[derive(Clone, Copy, Debug)]
pub struct DressedAlpha<'a> {
    system: &'a DressedSystem,
    state: usize,
}

impl AlphaProvider for DressedAlpha<'_> {
    fn alpha(&self, xi: f64) -> Matrix3 {
        self.system.alpha(self.state, xi)
    }

    fn descriptor(&self) -> String {
        alloc::format!("dressed:{}", self.system.base.label())
    }
}

/// Approximation level for the pair problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// Free-space responses on both sides.
    Bare,
    /// A dressed by bare B; B untouched.
    OneSided,
    /// Mutually dressed pair, iterated to a fixed point.
    SelfConsistent,
}

impl Scheme {
    /// Stable lowercase name used in reports and output files.
    #[must_use]
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Bare => "bare",
            Scheme::OneSided => "one-sided",
            Scheme::SelfConsistent => "self-consistent",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Knobs of the fixed-point solver.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    /// Which approximation level to evaluate.
    pub scheme: Scheme,
    /// Convergence tolerance on the relative change of the ground-manifold
    /// dressed parameters between iterates.
    pub tol: f64,
    /// Iteration cap for the self-consistent scheme.
    pub max_iter: usize,
    /// Update mixing η ∈ (0, 1]: Σ ← (1−η)·Σ_prev + η·Σ_new. At η = 1 each
    /// iterate replaces the previous one exactly. When the residual grows
    /// the solver falls back to η ≤ 0.5 on its own.
    pub damping: f64,
}

impl SolverOptions {
    /// Defaults: tol 1e-10, 50 iterations, undamped.
    #[must_use]
    pub fn new(scheme: Scheme) -> Self {
        SolverOptions {
            scheme,
            tol: 1e-10,
            max_iter: 50,
            damping: 1.0,
        }
    }

    // Negated comparison so a NaN tolerance fails validation too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    fn validate(&self) -> Result<(), BackactionError> {
        if !(self.tol > 0.0) {
            return Err(BackactionError::InvalidOptions("tol must be > 0"));
        }
        if self.max_iter == 0 {
            return Err(BackactionError::InvalidOptions("max_iter must be >= 1"));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(BackactionError::InvalidOptions(
                "damping must lie in (0, 1]",
            ));
        }
        Ok(())
    }
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions::new(Scheme::SelfConsistent)
    }
}

/// Outcome of [`self_consistent_solve`].
#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    /// Dressed state of the first system.
    pub a: DressedSystem,
    /// Dressed state of the second system.
    pub b: DressedSystem,
    /// Self-energy evaluations performed per side (0 for bare, 1 for
    /// one-sided).
    pub iterations: usize,
    /// Residual of the last iterate (0 for the non-iterative schemes).
    pub residual: f64,
}

/// Failure modes of the backaction layer.
#[derive(Clone, Debug, PartialEq)]
pub enum BackactionError {
    /// A dispersion integral failed.
    Quadrature(QuadratureError),
    /// A response constructor rejected its input.
    Response(ResponseError),
    /// A self-energy entry exceeds the smallest level spacing, so treating
    /// Σ as a perturbation of the spectrum is meaningless.
    SelfEnergyTooLarge {
        /// Row of the offending entry.
        row: usize,
        /// Column of the offending entry.
        column: usize,
        /// The entry in joules.
        value: f64,
        /// Smallest level spacing in joules.
        gap: f64,
    },
    /// A mixing coefficient reached |c| ≥ 1.
    PerturbativeValidity {
        /// The admixed state.
        mixed: usize,
        /// The reference state.
        reference: usize,
        /// The offending coefficient.
        value: f64,
    },
    /// Solver options violate their invariants.
    InvalidOptions(&'static str),
    /// The fixed point was not reached within the iteration cap.
    NotConverged {
        /// Iterations performed.
        iterations: usize,
        /// Final residual.
        residual: f64,
        /// Residual after each iteration, for diagnosing slow or cyclic
        /// convergence.
        history: Vec<f64>,
    },
}

impl fmt::Display for BackactionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BackactionError::Quadrature(e) => write!(f, "dispersion integral failed: {e}"),
            BackactionError::Response(e) => write!(f, "response evaluation failed: {e}"),
            BackactionError::SelfEnergyTooLarge { row, column, value, gap } => write!(
                f,
                "self-energy entry ({row},{column}) = {value:e} J exceeds the smallest \
                 level spacing {gap:e} J"
            ),
            BackactionError::PerturbativeValidity { mixed, reference, value } => write!(
                f,
                "perturbative validity exceeded: |c_{mixed}{reference}| = {:e} >= 1",
                crate::math::abs(*value)
            ),
            BackactionError::InvalidOptions(msg) => write!(f, "invalid solver options: {msg}"),
            BackactionError::NotConverged { iterations, residual, .. } => write!(
                f,
                "no fixed point after {iterations} iterations (residual {residual:e})"
            ),
        }
    }
}

impl core::error::Error for BackactionError {}

impl From<QuadratureError> for BackactionError {
    fn from(e: QuadratureError) -> Self {
        BackactionError::Quadrature(e)
    }
}

impl From<ResponseError> for BackactionError {
    fn from(e: ResponseError) -> Self {
        BackactionError::Response(e)
    }
}

/// Assembles the interaction self-energy of `sys` induced by a partner
/// response at separation `r` (metres, along ẑ):
///
/// ```text
/// Σ_cm = −(ħ μ₀² c⁴ / 2π) ∫₀^∞ dξ Tr[α^(cm)(iξ) · k(iξ) · α_B(iξ) · k(iξ)],
/// ```
///
/// with k the reduced free-space kernel. Only the upper triangle is
/// integrated; the mirror image fills the rest, so the result is symmetric
/// to the last bit. The diagonal ground-state entry Σ₀₀ is exactly the pair
/// dispersion potential with both partners in their reference states.
pub fn self_energy_matrix(
    sys: &LevelSystem,
    partner: &dyn AlphaProvider,
    r: f64,
    spec: &QuadratureSpec,
) -> Result<SelfEnergyMatrix, BackactionError> {
    let n = sys.n_levels();
    let r_vec = [0.0, 0.0, r];
    let prefactor = dispersion_prefactor();
    let mut entries = vec![0.0; n * n];
    for c in 0..n {
        for m in c..n {
            let q = integrate_semi_infinite(
                |xi| {
                    let kernel = retarded_kernel(r_vec, xi);
                    interaction_trace(transition_matrix(sys, c, m, xi), partner.alpha(xi), kernel)
                },
                spec,
            )?;
            let value = prefactor * q.value;
            entries[c * n + m] = value;
            entries[m * n + c] = value;
        }
    }
    let gap = sys.min_level_gap();
    for c in 0..n {
        for m in 0..n {
            let value = entries[c * n + m];
            if crate::math::abs(value) > gap {
                return Err(BackactionError::SelfEnergyTooLarge {
                    row: c,
                    column: m,
                    value,
                    gap,
                });
            }
        }
    }
    Ok(SelfEnergyMatrix {
        n,
        entries,
        separation: r,
        partner: partner.descriptor(),
    })
}

/// Applies a self-energy to a level system, producing first-order dressed
/// parameters:
///
/// * mixing coefficients c_cm = Σ_cm / (E_m − E_c);
/// * shifted frequencies ω̃_km = ω_km + (Σ_kk − Σ_mm)/ħ;
/// * corrected dipoles d̃^(km) = d^(km) + δd^(km).
///
/// Fails with a validity error if any |c_cm| ≥ 1; flags `strong_mixing`
/// above 0.3.
pub fn dress(sys: &LevelSystem, sigma: &SelfEnergyMatrix) -> Result<DressedSystem, BackactionError> {
    let n = sys.n_levels();
    let coeff = mixing_coefficients(sys, sigma)?;

    let mut max_mixing = 0.0f64;
    let mut worst = (0, 0);
    for c in 0..n {
        for m in 0..n {
            let a = crate::math::abs(coeff[c * n + m]);
            if a > max_mixing {
                max_mixing = a;
                worst = (c, m);
            }
        }
    }
    if max_mixing >= 1.0 {
        return Err(BackactionError::PerturbativeValidity {
            mixed: worst.0,
            reference: worst.1,
            value: coeff[worst.0 * n + worst.1],
        });
    }

    let mut omegas = vec![0.0; n * n];
    let mut dipoles = vec![[0.0; 3]; n * n];
    for k in 0..n {
        for m in 0..n {
            omegas[k * n + m] = sys.transition_frequency(k, m)
                + (sigma.entry(k, k) - sigma.entry(m, m)) / CODATA_2018.hbar;
            let delta = crate::response::dipole_correction(sys, &coeff, k, m);
            let base = sys.dipole(k, m);
            dipoles[k * n + m] = [base[0] + delta[0], base[1] + delta[1], base[2] + delta[2]];
        }
    }

    let bare01 = norm(sys.dipole(0, 1));
    let dressed01 = norm(dipoles[1]);
    let dipole_ratio_sq = if bare01 > 0.0 {
        (dressed01 / bare01) * (dressed01 / bare01)
    } else {
        1.0
    };

    Ok(DressedSystem {
        base: sys.clone(),
        omegas,
        dipoles,
        mixing: coeff,
        diagnostics: DressDiagnostics {
            max_mixing,
            dipole_ratio_sq,
            strong_mixing: max_mixing > 0.3,
        },
    })
}

/// The trivial dressing (Σ = 0): identical spectrum and dipoles. Used by
/// the bare scheme so every scheme flows through the same downstream
/// evaluation path.
#[must_use]
pub fn undressed(sys: &LevelSystem) -> DressedSystem {
    dress(sys, &SelfEnergyMatrix::zero(sys.n_levels(), f64::INFINITY))
        .expect("zero self-energy always dresses")
}

/// Entry-wise (1−η)·previous + η·candidate. At η = 1 the result carries the
/// candidate's values bit-for-bit.
fn blend(previous: &SelfEnergyMatrix, candidate: &SelfEnergyMatrix, eta: f64) -> SelfEnergyMatrix {
    let mut out = candidate.clone();
    for (o, p) in out.entries.iter_mut().zip(&previous.entries) {
        *o = (1.0 - eta) * p + eta * *o;
    }
    out
}

/// Largest relative change of the ground-manifold dressed parameters
/// (transition frequencies and dipole magnitudes to the ground state)
/// between two iterates.
fn ground_residual(old: &DressedSystem, new: &DressedSystem) -> f64 {
    fn rel_change(old: f64, new: f64) -> f64 {
        let scale = crate::math::abs(old).max(crate::math::abs(new));
        if scale == 0.0 {
            0.0
        } else {
            crate::math::abs(new - old) / scale
        }
    }
    let n = old.base.n_levels();
    let mut worst = 0.0f64;
    for k in 1..n {
        worst = worst.max(rel_change(old.omega(k, 0), new.omega(k, 0)));
        worst = worst.max(rel_change(norm(old.dipole(k, 0)), norm(new.dipole(k, 0))));
    }
    worst
}

/// Solves the pair backaction problem at separation `r` under the requested
/// scheme. Bare and one-sided schemes are direct; the self-consistent
/// scheme iterates Jacobi-style — both self-energies are evaluated against
/// the previous iterate's partners — until the ground-manifold parameters
/// of both systems stop moving.
pub fn self_consistent_solve(
    sys_a: &LevelSystem,
    sys_b: &LevelSystem,
    r: f64,
    opts: &SolverOptions,
    spec: &QuadratureSpec,
) -> Result<SolveReport, BackactionError> {
    opts.validate()?;
    match opts.scheme {
        Scheme::Bare => Ok(SolveReport {
            a: undressed(sys_a),
            b: undressed(sys_b),
            iterations: 0,
            residual: 0.0,
        }),
        Scheme::OneSided => {
            let partner = BareAlpha::ground(sys_b);
            let sigma_a = self_energy_matrix(sys_a, &partner, r, spec)?;
            Ok(SolveReport {
                a: dress(sys_a, &sigma_a)?,
                b: undressed(sys_b),
                iterations: 1,
                residual: 0.0,
            })
        }
        Scheme::SelfConsistent => iterate_pair(sys_a, sys_b, r, opts, spec),
    }
}

fn iterate_pair(
    sys_a: &LevelSystem,
    sys_b: &LevelSystem,
    r: f64,
    opts: &SolverOptions,
    spec: &QuadratureSpec,
) -> Result<SolveReport, BackactionError> {
    let mut dressed_a = undressed(sys_a);
    let mut dressed_b = undressed(sys_b);
    let mut sigma_a = SelfEnergyMatrix::zero(sys_a.n_levels(), r);
    let mut sigma_b = SelfEnergyMatrix::zero(sys_b.n_levels(), r);
    let mut eta = opts.damping;
    let mut previous_residual = f64::INFINITY;
    let mut history = Vec::new();

    for iteration in 1..=opts.max_iter {
        let candidate_a = self_energy_matrix(sys_a, &dressed_b.alpha_provider(0), r, spec)?;
        let candidate_b = self_energy_matrix(sys_b, &dressed_a.alpha_provider(0), r, spec)?;
        sigma_a = blend(&sigma_a, &candidate_a, eta);
        sigma_b = blend(&sigma_b, &candidate_b, eta);
        let next_a = dress(sys_a, &sigma_a)?;
        let next_b = dress(sys_b, &sigma_b)?;
        let residual = ground_residual(&dressed_a, &next_a).max(ground_residual(&dressed_b, &next_b));
        history.push(residual);
        dressed_a = next_a;
        dressed_b = next_b;
        if residual < opts.tol {
            return Ok(SolveReport {
                a: dressed_a,
                b: dressed_b,
                iterations: iteration,
                residual,
            });
        }
        if residual > previous_residual {
            // The iteration overshot; damp the update from here on.
            eta = eta.min(0.5);
        }
        previous_residual = residual;
    }

    let residual = *history.last().expect("max_iter >= 1 ran at least once");
    Err(BackactionError::NotConverged {
        iterations: opts.max_iter,
        residual,
        history,
    })
}
