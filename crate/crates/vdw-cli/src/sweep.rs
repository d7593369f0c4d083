//! Parallel evaluation of a distance sweep across approximation schemes.
//!
//! Rows are produced in a fixed order — separations ascending, schemes in
//! their declared order — regardless of how many worker threads carry the
//! per-radius work, so repeated runs of the same configuration emit
//! byte-identical output.

use std::time::Instant;

use rayon::prelude::*;
use sha2::{Digest, Sha256};
use vdw_core::backaction::{BackactionError, Scheme};
use vdw_core::potential::{bare_potential, evaluate_scheme, PotentialPoint};
use vdw_core::quad::QuadratureSpec;

use crate::config::{serialize_config, Config, Job};

/// Everything needed to reproduce a sweep, recorded alongside the rows.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepMetadata {
    /// SHA-256 of the effective configuration (after command-line
    /// overrides), hex-encoded.
    pub config_sha256: String,
    /// Which constant set the numbers are based on.
    pub constants: &'static str,
    /// Relative tolerance of the frequency quadrature.
    pub quad_rel_tol: f64,
    /// First node count tried by the quadrature.
    pub quad_initial_nodes: usize,
    /// Node-count ceiling of the quadrature.
    pub quad_max_nodes: usize,
    /// Schemes evaluated, in row order.
    pub schemes: Vec<&'static str>,
    /// Fixed-point tolerance.
    pub tol: f64,
    /// Fixed-point iteration cap.
    pub max_iter: usize,
    /// Fixed-point update mixing.
    pub damping: f64,
    /// Wall-clock duration of the sweep in milliseconds.
    pub wall_time_ms: u64,
}

/// Why a row carries no numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowStatus {
    /// The row evaluated cleanly.
    Ok,
    /// The fixed point was not reached within the iteration cap.
    NonConverged,
    /// The perturbative dressing broke down (mixing or self-energy too
    /// large).
    ValidityExceeded,
    /// A dispersion integral did not converge.
    QuadratureFailed,
}

impl RowStatus {
    /// Stable name used in output files.
    #[must_use]
    pub fn as_str(self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::NonConverged => "non-converged",
            RowStatus::ValidityExceeded => "validity-exceeded",
            RowStatus::QuadratureFailed => "quadrature-failed",
        }
    }
}

/// Result of one (separation, scheme) evaluation.
#[derive(Clone, Debug, PartialEq)]
pub enum RowOutcome {
    /// Numbers are available.
    Evaluated(PotentialPoint),
    /// The evaluation failed; only the status is known.
    Failed(RowStatus),
}

/// One output row.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    /// Separation as configured, in nanometres. Kept alongside the metre
    /// value so output can echo the grid coordinate exactly instead of
    /// round-tripping it through SI units.
    pub r_nm: f64,
    /// Separation in metres.
    pub r: f64,
    /// Scheme the row belongs to.
    pub scheme: Scheme,
    /// Numbers or failure status.
    pub outcome: RowOutcome,
}

impl SweepRow {
    /// The status string for this row.
    #[must_use]
    pub fn status(&self) -> RowStatus {
        match &self.outcome {
            RowOutcome::Evaluated(_) => RowStatus::Ok,
            RowOutcome::Failed(status) => *status,
        }
    }
}

/// A finished sweep: metadata plus rows in output order.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    /// Reproducibility record.
    pub metadata: SweepMetadata,
    /// Rows, separations ascending and schemes in declared order.
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// True when every row evaluated cleanly.
    #[must_use]
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|row| row.status() == RowStatus::Ok)
    }
}

fn classify(error: &BackactionError) -> RowStatus {
    match error {
        BackactionError::Quadrature(_) => RowStatus::QuadratureFailed,
        BackactionError::NotConverged { .. } => RowStatus::NonConverged,
        BackactionError::SelfEnergyTooLarge { .. }
        | BackactionError::PerturbativeValidity { .. } => RowStatus::ValidityExceeded,
        // Validated jobs cannot produce the remaining variants; mark the
        // row rather than poisoning the whole sweep.
        BackactionError::Response(_) | BackactionError::InvalidOptions(_) => {
            RowStatus::ValidityExceeded
        }
    }
}

fn evaluate_radius(job: &Job, r_nm: f64) -> Vec<SweepRow> {
    let r = r_nm * 1e-9;
    let omega_max = job
        .system_a
        .max_transition_frequency()
        .max(job.system_b.max_transition_frequency());
    let spec = QuadratureSpec::for_separation(r, omega_max);
    let u_bare = match bare_potential(&job.system_a, &job.system_b, r, &spec) {
        Ok(u) => u,
        Err(_) => {
            // Without the bare reference no scheme has a C6 ratio; the
            // whole radius is reported failed.
            return job
                .schemes
                .iter()
                .map(|&scheme| SweepRow {
                    r_nm,
                    r,
                    scheme,
                    outcome: RowOutcome::Failed(RowStatus::QuadratureFailed),
                })
                .collect();
        }
    };
    job.schemes
        .iter()
        .map(|&scheme| {
            let outcome = match evaluate_scheme(
                &job.system_a,
                &job.system_b,
                r,
                &job.options(scheme),
                &spec,
                u_bare,
            ) {
                Ok(point) => RowOutcome::Evaluated(point),
                Err(e) => RowOutcome::Failed(classify(&e)),
            };
            SweepRow {
                r_nm,
                r,
                scheme,
                outcome,
            }
        })
        .collect()
}

/// Hex-encoded SHA-256 of the effective configuration text.
#[must_use]
pub fn config_hash(config: &Config) -> String {
    let mut hasher = Sha256::new();
    hasher.update(serialize_config(config).as_bytes());
    let digest = hasher.finalize();
    let mut hex = String::with_capacity(64);
    for byte in digest {
        use std::fmt::Write;
        let _ = write!(hex, "{byte:02x}");
    }
    hex
}

/// Runs the sweep described by `job`, parallelising over separations.
/// `config` must be the effective configuration the job was built from; it
/// is hashed into the metadata.
#[must_use]
pub fn run_sweep(job: &Job, config: &Config) -> SweepResult {
    let started = Instant::now();
    let rows: Vec<SweepRow> = job
        .radii_nm
        .par_iter()
        .map(|&r_nm| evaluate_radius(job, r_nm))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();

    let sample_spec = QuadratureSpec::for_separation(
        job.radii_nm.first().copied().unwrap_or(1.0) * 1e-9,
        job.system_a.max_transition_frequency(),
    );
    SweepResult {
        metadata: SweepMetadata {
            config_sha256: config_hash(config),
            constants: "CODATA-2018",
            quad_rel_tol: sample_spec.rel_tol,
            quad_initial_nodes: sample_spec.initial_nodes,
            quad_max_nodes: sample_spec.max_nodes,
            schemes: job.schemes.iter().map(|s| s.name()).collect(),
            tol: job.solver.tol,
            max_iter: job.solver.max_iter,
            damping: job.solver.damping,
            wall_time_ms: started.elapsed().as_millis() as u64,
        },
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Config, SchemeChoice};

    fn small_config() -> Config {
        let mut config = Config::default();
        config.sweep.points = 4;
        config.sweep.r_min_nm = 1.0;
        config.sweep.r_max_nm = 10.0;
        config
    }

    #[test]
    fn rows_come_out_in_declared_order() {
        let config = small_config();
        let result = run_sweep(&config.to_job().unwrap(), &config);
        assert_eq!(result.rows.len(), 12);
        for (i, row) in result.rows.iter().enumerate() {
            let expected = [Scheme::Bare, Scheme::OneSided, Scheme::SelfConsistent][i % 3];
            assert_eq!(row.scheme, expected);
        }
        let radii: Vec<f64> = result.rows.iter().step_by(3).map(|row| row.r).collect();
        assert!(radii.windows(2).all(|w| w[0] < w[1]));
        assert!(result.all_ok());
    }

    #[test]
    fn single_scheme_configs_produce_single_rows() {
        let mut config = small_config();
        config.solver.scheme = SchemeChoice::Bare;
        let result = run_sweep(&config.to_job().unwrap(), &config);
        assert_eq!(result.rows.len(), 4);
        assert!(result.rows.iter().all(|row| row.scheme == Scheme::Bare));
        assert_eq!(result.metadata.schemes, vec!["bare"]);
    }

    #[test]
    fn starved_iteration_cap_marks_rows_not_runs() {
        let mut config = small_config();
        config.sweep.points = 2;
        config.solver.max_iter = 1;
        config.solver.tol = 1e-300;
        let result = run_sweep(&config.to_job().unwrap(), &config);
        assert!(!result.all_ok());
        for row in &result.rows {
            match row.scheme {
                Scheme::SelfConsistent => {
                    assert_eq!(row.status(), RowStatus::NonConverged);
                    assert_eq!(row.outcome, RowOutcome::Failed(RowStatus::NonConverged));
                }
                _ => assert_eq!(row.status(), RowStatus::Ok),
            }
        }
    }

    #[test]
    fn metadata_records_the_run_recipe() {
        let config = small_config();
        let result = run_sweep(&config.to_job().unwrap(), &config);
        let m = &result.metadata;
        assert_eq!(m.config_sha256.len(), 64);
        assert_eq!(m.config_sha256, config_hash(&config));
        assert_eq!(m.constants, "CODATA-2018");
        assert_eq!(m.schemes.len(), 3);
        assert_eq!(m.tol, 1e-10);
        assert!(m.quad_initial_nodes >= 8);
        assert!(m.quad_max_nodes >= m.quad_initial_nodes);

        // The hash tracks the configuration value, not the instance.
        let mut other = small_config();
        other.solver.tol = 1e-9;
        assert_ne!(config_hash(&other), m.config_sha256);
    }

    #[test]
    fn identical_runs_produce_identical_rows() {
        let config = small_config();
        let job = config.to_job().unwrap();
        let first = run_sweep(&job, &config);
        let second = run_sweep(&job, &config);
        assert_eq!(first.rows, second.rows);
    }
}
