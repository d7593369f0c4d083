//! Few-level emitter descriptions: level energies, transition dipoles, and
//! the validation rules the rest of the crate relies on.
//!
//! A [`LevelSystem`] is the static input to every calculation: N level
//! energies (ground state pinned at zero, strictly increasing) and an N×N
//! real symmetric matrix of transition dipole vectors with vanishing
//! diagonal (no permanent moments). Systems flagged `isotropic` are treated
//! as orientation-averaged: dipole *magnitudes* matter and every
//! polarisability built from them is a multiple of the identity.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::quantities::{dipole_to_si, ev_to_joule, CODATA_2018};
use crate::tensor::{norm, Vec3};

/// A few-level quantum emitter.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelSystem {
    label: String,
    /// Level energies in joules; `energies[0] == 0`, strictly increasing.
    energies: Vec<f64>,
    /// Row-major N×N grid of transition dipole vectors in C·m; entry
    /// `(k, m)` holds d^(km), symmetric with zero diagonal.
    dipoles: Vec<Vec3>,
    isotropic: bool,
}

/// One broken validation rule, with the indices needed to locate it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Violation {
    /// Fewer than two levels.
    TooFewLevels {
        /// Number of levels supplied.
        found: usize,
    },
    /// The ground-state energy is not exactly zero.
    GroundEnergyNonzero {
        /// The offending energy in joules.
        value: f64,
    },
    /// Energies must be strictly increasing; these two are degenerate or
    /// out of order.
    NonDegenerateEnergies {
        /// Lower level index.
        lower: usize,
        /// Upper level index.
        upper: usize,
    },
    /// An energy is NaN or infinite.
    NonFiniteEnergy {
        /// Level index.
        state: usize,
    },
    /// The dipole grid is not N×N.
    DipoleShape {
        /// Number of levels.
        levels: usize,
        /// Number of dipole entries supplied.
        entries: usize,
    },
    /// Hermiticity: entries (k, m) and (m, k) must be equal (real dipoles).
    Hermiticity {
        /// Row index.
        from: usize,
        /// Column index.
        to: usize,
    },
    /// A diagonal entry is non-zero (permanent moment).
    PermanentMoment {
        /// Level index.
        state: usize,
    },
    /// A dipole component is NaN or infinite.
    NonFiniteDipole {
        /// Row index.
        from: usize,
        /// Column index.
        to: usize,
    },
    /// A transition magnitude given in spectroscopic form is negative.
    NegativeMagnitude {
        /// Row index.
        from: usize,
        /// Column index.
        to: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::TooFewLevels { found } => {
                write!(f, "need at least 2 levels, found {found}")
            }
            Violation::GroundEnergyNonzero { value } => {
                write!(f, "ground-state energy must be exactly 0, found {value:e} J")
            }
            Violation::NonDegenerateEnergies { lower, upper } => write!(
                f,
                "non-degenerate energies: levels {lower} and {upper} must be strictly increasing"
            ),
            Violation::NonFiniteEnergy { state } => {
                write!(f, "energy of level {state} is not finite")
            }
            Violation::DipoleShape { levels, entries } => write!(
                f,
                "dipole grid must hold {levels}x{levels} entries, found {entries}"
            ),
            Violation::Hermiticity { from, to } => write!(
                f,
                "Hermiticity: dipole entries ({from},{to}) and ({to},{from}) differ"
            ),
            Violation::PermanentMoment { state } => write!(
                f,
                "permanent moment: diagonal dipole entry ({state},{state}) must vanish"
            ),
            Violation::NonFiniteDipole { from, to } => {
                write!(f, "dipole entry ({from},{to}) is not finite")
            }
            Violation::NegativeMagnitude { from, to } => {
                write!(f, "magnitude_D must be >= 0 for transition ({from},{to})")
            }
        }
    }
}

/// All validation rules a candidate system broke, in deterministic order.
#[derive(Clone, Debug, PartialEq)]
pub struct ValidationErrors {
    /// The individual violations.
    pub violations: Vec<Violation>,
}

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid level system:")?;
        for v in &self.violations {
            write!(f, "\n  - {v}")?;
        }
        Ok(())
    }
}

impl core::error::Error for ValidationErrors {}

// Negated comparison so NaN energies count as non-increasing too.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn collect_violations(energies: &[f64], dipoles: &[Vec3]) -> Vec<Violation> {
    let n = energies.len();
    let mut out = Vec::new();

    if n < 2 {
        out.push(Violation::TooFewLevels { found: n });
    }
    for (k, &e) in energies.iter().enumerate() {
        if !e.is_finite() {
            out.push(Violation::NonFiniteEnergy { state: k });
        }
    }
    if let Some(&e0) = energies.first() {
        if e0 != 0.0 {
            out.push(Violation::GroundEnergyNonzero { value: e0 });
        }
    }
    for k in 1..n {
        if !(energies[k] > energies[k - 1]) {
            out.push(Violation::NonDegenerateEnergies {
                lower: k - 1,
                upper: k,
            });
        }
    }

    if dipoles.len() != n * n {
        out.push(Violation::DipoleShape {
            levels: n,
            entries: dipoles.len(),
        });
        return out; // index-based checks below would be meaningless
    }
    for k in 0..n {
        for m in 0..n {
            let d = dipoles[k * n + m];
            if !d.iter().all(|v| v.is_finite()) {
                out.push(Violation::NonFiniteDipole { from: k, to: m });
            }
        }
    }
    for k in 0..n {
        if dipoles[k * n + k] != [0.0; 3] {
            out.push(Violation::PermanentMoment { state: k });
        }
        for m in (k + 1)..n {
            if dipoles[k * n + m] != dipoles[m * n + k] {
                out.push(Violation::Hermiticity { from: k, to: m });
            }
        }
    }
    out
}

impl LevelSystem {
    /// Builds a system from SI data (energies in joules, dipoles in C·m,
    /// row-major N×N grid), validating every structural rule.
    pub fn new(
        label: impl Into<String>,
        energies: Vec<f64>,
        dipoles: Vec<Vec3>,
        isotropic: bool,
    ) -> Result<LevelSystem, ValidationErrors> {
        let violations = collect_violations(&energies, &dipoles);
        if violations.is_empty() {
            Ok(LevelSystem {
                label: label.into(),
                energies,
                dipoles,
                isotropic,
            })
        } else {
            Err(ValidationErrors { violations })
        }
    }

    /// Builds a system from spectroscopic data: level energies in eV and a
    /// list of `(from, to, magnitude_D)` transition dipoles in debye.
    ///
    /// Dipole vectors are laid along ẑ; for isotropic systems only the
    /// magnitudes ever matter. Transitions listed twice overwrite earlier
    /// entries; both orientations of a pair denote the same entry.
    // Negated comparisons so NaN inputs count as violations too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn from_spectroscopic(
        label: impl Into<String>,
        energies_ev: &[f64],
        transitions: &[(usize, usize, f64)],
        isotropic: bool,
    ) -> Result<LevelSystem, ValidationErrors> {
        let n = energies_ev.len();
        let mut violations = Vec::new();
        let mut dipoles = alloc::vec![[0.0; 3]; n * n];
        for &(from, to, magnitude_d) in transitions {
            if from >= n || to >= n || from == to {
                violations.push(Violation::DipoleShape {
                    levels: n,
                    entries: from.max(to) + 1,
                });
                continue;
            }
            if !(magnitude_d >= 0.0) {
                violations.push(Violation::NegativeMagnitude { from, to });
                continue;
            }
            let v = [0.0, 0.0, dipole_to_si(magnitude_d)];
            dipoles[from * n + to] = v;
            dipoles[to * n + from] = v;
        }
        if !violations.is_empty() {
            return Err(ValidationErrors { violations });
        }
        let energies: Vec<f64> = energies_ev.iter().map(|&e| ev_to_joule(e)).collect();
        LevelSystem::new(label, energies, dipoles, isotropic)
    }

    /// The reference emitter used throughout the examples: three levels at
    /// 0, 2 and 3 eV with isotropic transition dipoles of 3 D (0↔1),
    /// 2.2 D (0↔2) and 1 D (1↔2).
    #[must_use]
    pub fn three_level_default() -> LevelSystem {
        LevelSystem::from_spectroscopic(
            "three-level emitter",
            &[0.0, 2.0, 3.0],
            &[(0, 1, 3.0), (0, 2, 2.2), (1, 2, 1.0)],
            true,
        )
        .expect("built-in system is valid")
    }

    /// Re-checks every structural rule on the current contents.
    pub fn validate(&self) -> Result<(), ValidationErrors> {
        let violations = collect_violations(&self.energies, &self.dipoles);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(ValidationErrors { violations })
        }
    }

    /// Number of levels N.
    #[must_use]
    pub fn n_levels(&self) -> usize {
        self.energies.len()
    }

    /// Human-readable tag for reports.
    #[must_use]
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Whether responses built from this system are orientation-averaged.
    #[must_use]
    pub fn is_isotropic(&self) -> bool {
        self.isotropic
    }

    /// Energy of level `k` in joules.
    #[must_use]
    pub fn energy(&self, k: usize) -> f64 {
        self.energies[k]
    }

    /// Transition dipole vector d^(km) in C·m.
    #[must_use]
    pub fn dipole(&self, k: usize, m: usize) -> Vec3 {
        self.dipoles[k * self.energies.len() + m]
    }

    /// Transition angular frequency ω_km = (E_k − E_m)/ħ in rad/s;
    /// antisymmetric in its indices.
    #[must_use]
    pub fn transition_frequency(&self, k: usize, m: usize) -> f64 {
        (self.energies[k] - self.energies[m]) / CODATA_2018.hbar
    }

    /// Largest transition frequency of the system, ω_max = E_max/ħ.
    #[must_use]
    pub fn max_transition_frequency(&self) -> f64 {
        (self.energies[self.energies.len() - 1] - self.energies[0]) / CODATA_2018.hbar
    }

    /// Smallest gap between adjacent levels, in joules. Perturbative
    /// validity of any level shift is judged against this scale.
    #[must_use]
    pub fn min_level_gap(&self) -> f64 {
        let mut gap = f64::INFINITY;
        for k in 1..self.energies.len() {
            gap = gap.min(self.energies[k] - self.energies[k - 1]);
        }
        gap
    }

    /// Magnitude of the strongest transition dipole out of the ground
    /// state, in C·m.
    #[must_use]
    pub fn max_ground_dipole(&self) -> f64 {
        let mut best = 0.0f64;
        for k in 1..self.n_levels() {
            best = best.max(norm(self.dipole(0, k)));
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantities::{dipole_from_si, joule_to_ev};

    #[test]
    fn default_system_matches_its_description() {
        let sys = LevelSystem::three_level_default();
        assert_eq!(sys.n_levels(), 3);
        assert!(sys.is_isotropic());
        assert_eq!(sys.energy(0), 0.0);
        assert_eq!(joule_to_ev(sys.energy(1)), 2.0);
        assert_eq!(joule_to_ev(sys.energy(2)), 3.0);
        assert_eq!(dipole_from_si(norm(sys.dipole(0, 1))), 3.0);
        assert_eq!(dipole_from_si(norm(sys.dipole(0, 2))), 2.2);
        assert_eq!(dipole_from_si(norm(sys.dipole(1, 2))), 1.0);
        assert_eq!(sys.dipole(0, 1), sys.dipole(1, 0));
        assert_eq!(sys.dipole(0, 0), [0.0; 3]);
        sys.validate().unwrap();
    }

    #[test]
    fn dipole_in_si_reference_value() {
        let sys = LevelSystem::three_level_default();
        assert_eq!(norm(sys.dipole(0, 1)), 1.000_692_285_594_456e-29);
    }

    #[test]
    fn transition_frequencies_are_antisymmetric() {
        let sys = LevelSystem::three_level_default();
        for k in 0..3 {
            for m in 0..3 {
                assert_eq!(
                    sys.transition_frequency(k, m),
                    -sys.transition_frequency(m, k)
                );
            }
        }
        assert!(sys.transition_frequency(1, 0) > 0.0);
        assert_eq!(sys.max_transition_frequency(), sys.transition_frequency(2, 0));
    }

    #[test]
    fn min_gap_of_default_is_one_ev() {
        let sys = LevelSystem::three_level_default();
        assert!((joule_to_ev(sys.min_level_gap()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_energies_are_reported_with_indices() {
        let err = LevelSystem::from_spectroscopic(
            "broken",
            &[0.0, 2.0, 2.0],
            &[(0, 1, 1.0)],
            true,
        )
        .unwrap_err();
        assert!(err
            .violations
            .contains(&Violation::NonDegenerateEnergies { lower: 1, upper: 2 }));
    }

    #[test]
    fn asymmetric_dipoles_are_a_hermiticity_violation() {
        let ev = ev_to_joule(1.0);
        let mut dipoles = alloc::vec![[0.0; 3]; 4];
        dipoles[1] = [0.0, 0.0, 1e-29]; // (0,1)
        dipoles[2] = [0.0, 0.0, 2e-29]; // (1,0) differs
        let err = LevelSystem::new("broken", alloc::vec![0.0, ev], dipoles, true).unwrap_err();
        assert_eq!(
            err.violations,
            alloc::vec![Violation::Hermiticity { from: 0, to: 1 }]
        );
    }

    #[test]
    fn permanent_moments_are_rejected() {
        let ev = ev_to_joule(1.0);
        let mut dipoles = alloc::vec![[0.0; 3]; 4];
        dipoles[0] = [0.0, 0.0, 1e-29]; // (0,0)
        let err = LevelSystem::new("broken", alloc::vec![0.0, ev], dipoles, true).unwrap_err();
        assert_eq!(
            err.violations,
            alloc::vec![Violation::PermanentMoment { state: 0 }]
        );
    }

    #[test]
    fn ground_energy_must_be_zero_and_systems_need_two_levels() {
        let err =
            LevelSystem::new("broken", alloc::vec![1e-21], alloc::vec![[0.0; 3]], true).unwrap_err();
        assert!(err.violations.contains(&Violation::TooFewLevels { found: 1 }));
        assert!(err
            .violations
            .iter()
            .any(|v| matches!(v, Violation::GroundEnergyNonzero { .. })));
    }

    #[test]
    fn negative_magnitudes_are_rejected_with_the_schema_wording() {
        let err = LevelSystem::from_spectroscopic(
            "broken",
            &[0.0, 1.0],
            &[(0, 1, -3.0)],
            true,
        )
        .unwrap_err();
        assert_eq!(
            err.violations,
            alloc::vec![Violation::NegativeMagnitude { from: 0, to: 1 }]
        );
        let text = alloc::format!("{err}");
        assert!(text.contains("magnitude_D must be >= 0"));
    }

    #[test]
    fn out_of_range_transition_indices_are_rejected() {
        let err = LevelSystem::from_spectroscopic(
            "broken",
            &[0.0, 1.0],
            &[(0, 5, 1.0)],
            true,
        )
        .unwrap_err();
        assert!(matches!(err.violations[0], Violation::DipoleShape { .. }));
    }
}
