//! Sweep driver around [`vdw_core`]: TOML configuration, parallel
//! distance sweeps over the three approximation schemes, and CSV/JSON
//! emission with reproducibility metadata.
//!
//! The binary `vdw` is a thin wrapper over this library; everything it does
//! is available programmatically through [`config::Config`],
//! [`sweep::run_sweep`] and the [`output`] emitters.

pub mod config;
pub mod output;
pub mod sweep;

pub use config::{parse_config, serialize_config, Config, ConfigError};
pub use output::{emit_csv, emit_json, summary_lines};
pub use sweep::{run_sweep, RowOutcome, RowStatus, SweepMetadata, SweepResult, SweepRow};
