//! Adaptive Gauss–Legendre quadrature over the positive imaginary-frequency
//! axis.
//!
//! Dispersion integrands are smooth on ξ ∈ (0, ∞), peak near a
//! characteristic scale ξ_c, and fall off exponentially with retardation.
//! The half-line is mapped onto the open unit interval with
//!
//! ```text
//! ξ = ξ_c · t / (1 − t),    dξ = ξ_c / (1 − t)² · dt,
//! ```
//!
//! which puts half the nodes below ξ_c and half above, and the node count
//! doubles (64 → 128 → …) until two successive estimates agree to the
//! requested relative tolerance. The rule is open — neither endpoint is ever
//! evaluated — so integrands with a harmless ξ = 0 limit and exponential
//! tails need no special casing.
//!
//! Node placement is deterministic: rules are generated by Newton iteration
//! on the Legendre polynomials, in fixed order, and sums are accumulated
//! with Neumaier compensation. Repeated runs therefore produce bit-identical
//! results regardless of thread count or call history.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::math;

/// Controls for [`integrate_semi_infinite`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    /// Relative agreement required between two successive doublings.
    pub rel_tol: f64,
    /// Node count of the first estimate.
    pub initial_nodes: usize,
    /// Hard ceiling on the node count.
    pub max_nodes: usize,
    /// Characteristic frequency scale ξ_c of the map, in rad/s.
    pub xi_c: f64,
}

impl QuadratureSpec {
    /// Default relative tolerance between successive estimates.
    pub const DEFAULT_REL_TOL: f64 = 1e-8;

    /// A spec with the default ladder (tolerance 1e-8, 64 → 4096 nodes)
    /// around the given frequency scale.
    #[must_use]
    pub fn new(xi_c: f64) -> QuadratureSpec {
        QuadratureSpec {
            rel_tol: Self::DEFAULT_REL_TOL,
            initial_nodes: 64,
            max_nodes: 4096,
            xi_c,
        }
    }

    /// The default spec for a pair problem at separation `r` (metres) with
    /// largest system resonance `omega_max` (rad/s): the integrand turns
    /// over at the earlier of the retardation cutoff c/(2r) and the
    /// strongest resonance, so ξ_c = max(c/(2r), ω_max).
    #[must_use]
    pub fn for_separation(r: f64, omega_max: f64) -> QuadratureSpec {
        let retardation_scale = crate::quantities::CODATA_2018.c / (2.0 * r);
        QuadratureSpec::new(retardation_scale.max(omega_max))
    }

    /// Checks the spec invariants.
    pub fn validate(&self) -> Result<(), QuadratureError> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(QuadratureError::InvalidSpec("rel_tol must lie in (0, 1)"));
        }
        if self.initial_nodes < 8 {
            return Err(QuadratureError::InvalidSpec("initial_nodes must be >= 8"));
        }
        if self.max_nodes < self.initial_nodes {
            return Err(QuadratureError::InvalidSpec(
                "max_nodes must be >= initial_nodes",
            ));
        }
        if !(self.xi_c > 0.0 && self.xi_c.is_finite()) {
            return Err(QuadratureError::InvalidSpec(
                "xi_c must be positive and finite",
            ));
        }
        Ok(())
    }
}

/// A converged integral estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    /// The accepted estimate.
    pub value: f64,
    /// |value − previous estimate|: an (often pessimistic) error bound.
    pub error: f64,
    /// Node count of the accepted estimate.
    pub nodes: usize,
}

/// Failure modes of the adaptive ladder.
#[derive(Clone, Debug, PartialEq)]
pub enum QuadratureError {
    /// The spec violates its own invariants.
    InvalidSpec(&'static str),
    /// Successive estimates never agreed within tolerance; both trailing
    /// estimates are carried for diagnosis.
    NotConverged {
        /// Estimate at `nodes`.
        value: f64,
        /// Estimate at the previous node count.
        previous: f64,
        /// Node count of `value`.
        nodes: usize,
    },
    /// The integrand returned NaN or ±∞.
    NonFinite {
        /// The offending abscissa ξ.
        xi: f64,
    },
}

impl fmt::Display for QuadratureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadratureError::InvalidSpec(why) => write!(f, "invalid quadrature spec: {why}"),
            QuadratureError::NotConverged {
                value,
                previous,
                nodes,
            } => write!(
                f,
                "quadrature did not converge: {previous:e} -> {value:e} at {nodes} nodes"
            ),
            QuadratureError::NonFinite { xi } => {
                write!(f, "integrand is not finite at xi = {xi:e}")
            }
        }
    }
}

impl core::error::Error for QuadratureError {}

/// Integrates `f` over ξ ∈ (0, ∞), doubling the node count until two
/// successive Gauss–Legendre estimates agree to `spec.rel_tol` relative (or
/// absolutely, for an integral that is exactly zero).
pub fn integrate_semi_infinite<F>(
    mut f: F,
    spec: &QuadratureSpec,
) -> Result<Quadrature, QuadratureError>
where
    F: FnMut(f64) -> f64,
{
    spec.validate()?;
    let mut nodes = spec.initial_nodes;
    let mut previous: Option<f64> = None;
    loop {
        let value = estimate(&mut f, spec.xi_c, nodes)?;
        if let Some(prev) = previous {
            let error = math::abs(value - prev);
            if error <= spec.rel_tol * math::abs(value) {
                return Ok(Quadrature {
                    value,
                    error,
                    nodes,
                });
            }
        }
        if nodes >= spec.max_nodes {
            return Err(QuadratureError::NotConverged {
                value,
                previous: previous.unwrap_or(f64::NAN),
                nodes,
            });
        }
        previous = Some(value);
        nodes = (nodes * 2).min(spec.max_nodes);
    }
}

/// One fixed-order estimate on the mapped half-line.
fn estimate<F>(f: &mut F, xi_c: f64, n: usize) -> Result<f64, QuadratureError>
where
    F: FnMut(f64) -> f64,
{
    let rule = gauss_legendre_unit(n);
    // Neumaier-compensated accumulation in fixed (ascending-t) node order.
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &(t, w) in &rule {
        let one_minus = 1.0 - t;
        let xi = xi_c * t / one_minus;
        let jacobian = xi_c / (one_minus * one_minus);
        let y = f(xi);
        if !y.is_finite() {
            return Err(QuadratureError::NonFinite { xi });
        }
        let term = w * jacobian * y;
        let fresh = sum + term;
        if math::abs(sum) >= math::abs(term) {
            comp += (sum - fresh) + term;
        } else {
            comp += (term - fresh) + sum;
        }
        sum = fresh;
    }
    Ok(sum + comp)
}

/// Gauss–Legendre nodes and weights on (0, 1), ascending in the node.
///
/// Roots of P_n are found by Newton iteration from the Chebyshev-style
/// initial guess; only half are solved, the rest mirrored. For the node
/// counts this crate uses (≤ 4096) the rules are cheap enough to rebuild on
/// demand, which keeps the function pure and the results reproducible.
fn gauss_legendre_unit(n: usize) -> Vec<(f64, f64)> {
    let mut rule = vec![(0.0f64, 0.0f64); n];
    let half = n.div_ceil(2);
    let nf = n as f64;
    for i in 1..=half {
        // Root near cos(π(i − 1/4)/(n + 1/2)), descending in x as i grows.
        let mut x = math::cos(PI * (i as f64 - 0.25) / (nf + 0.5));
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            let step = p / d;
            x -= step;
            if math::abs(step) <= 1e-15 {
                break;
            }
        }
        // Derivative at the converged root fixes the weight.
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Map x ∈ (−1, 1) to t ∈ (0, 1); the mirrored pair shares the weight.
        let lo = i - 1;
        let hi = n - i;
        rule[lo] = (0.5 * (1.0 - x), 0.5 * w);
        rule[hi] = (0.5 * (1.0 + x), 0.5 * w);
    }
    rule
}

/// (P_n(x), P_n'(x)) by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0f64; // P_0
    let mut p = x; // P_1
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    // P_n'(x) = n (x P_n − P_{n−1}) / (x² − 1)
    let dp = (n as f64) * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}
