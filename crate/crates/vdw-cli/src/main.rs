//! `vdw` — distance sweeps of the dispersion potential between two
//! few-level emitters, with optional radiative backaction.
//!
//! Exit codes: 0 on success, 1 for usage or configuration problems, 2 when
//! the sweep ran but some rows failed to converge.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use vdw_cli::config::{parse_config, Config, SchemeChoice, Spacing};
use vdw_cli::{emit_csv, emit_json, run_sweep, summary_lines};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Sweep the emitter-pair dispersion potential over separation.
#[derive(Debug, Parser)]
#[command(name = "vdw", version, about)]
struct Cli {
    /// TOML configuration file; the built-in reference pair when omitted.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Write the table here instead of stdout.
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,

    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,

    /// Override the configured scheme selection.
    #[arg(long, value_enum)]
    scheme: Option<SchemeChoice>,

    /// Override the smallest separation, in nanometres.
    #[arg(long, value_name = "NM")]
    rmin_nm: Option<f64>,

    /// Override the largest separation, in nanometres.
    #[arg(long, value_name = "NM")]
    rmax_nm: Option<f64>,

    /// Override the number of grid points.
    #[arg(long, value_name = "N")]
    points: Option<usize>,

    /// Override the grid spacing rule.
    #[arg(long, value_enum)]
    spacing: Option<Spacing>,

    /// Override the fixed-point tolerance.
    #[arg(long, value_name = "TOL")]
    tol: Option<f64>,

    /// Override the fixed-point iteration cap.
    #[arg(long, value_name = "N")]
    max_iter: Option<usize>,

    /// Override the fixed-point update mixing (0 < η ≤ 1).
    #[arg(long, value_name = "ETA")]
    damping: Option<f64>,

    /// Emit raw SI columns (m, J, J·m⁶) instead of nm/eV.
    #[arg(long)]
    si: bool,

    /// Suppress the per-scheme summary on stderr.
    #[arg(long)]
    quiet: bool,
}

impl Cli {
    fn apply_overrides(&self, config: &mut Config) {
        if let Some(scheme) = self.scheme {
            config.solver.scheme = scheme;
        }
        if let Some(r) = self.rmin_nm {
            config.sweep.r_min_nm = r;
        }
        if let Some(r) = self.rmax_nm {
            config.sweep.r_max_nm = r;
        }
        if let Some(points) = self.points {
            config.sweep.points = points;
        }
        if let Some(spacing) = self.spacing {
            config.sweep.spacing = spacing;
        }
        if let Some(tol) = self.tol {
            config.solver.tol = tol;
        }
        if let Some(max_iter) = self.max_iter {
            config.solver.max_iter = max_iter;
        }
        if let Some(damping) = self.damping {
            config.solver.damping = damping;
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run())
}

fn run() -> u8 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };

    let mut config = match &cli.config {
        Some(path) => {
            let text = match fs::read_to_string(path) {
                Ok(text) => text,
                Err(e) => {
                    eprintln!("vdw: cannot read {}: {e}", path.display());
                    return 1;
                }
            };
            match parse_config(&text) {
                Ok(config) => config,
                Err(e) => {
                    eprintln!("vdw: {}: {e}", path.display());
                    return 1;
                }
            }
        }
        None => Config::default(),
    };
    cli.apply_overrides(&mut config);

    let job = match config.to_job() {
        Ok(job) => job,
        Err(e) => {
            eprintln!("vdw: {e}");
            return 1;
        }
    };

    let result = run_sweep(&job, &config);
    let text = match cli.format {
        Format::Csv => emit_csv(&result, cli.si),
        Format::Json => emit_json(&result, cli.si),
    };
    match &cli.output {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("vdw: cannot write {}: {e}", path.display());
                return 1;
            }
        }
        None => {
            use std::io::Write;
            if let Err(e) = std::io::stdout().write_all(text.as_bytes()) {
                // A closed pipe (`vdw | head`) is the reader's choice, not
                // an error worth reporting.
                if e.kind() == std::io::ErrorKind::BrokenPipe {
                    return 0;
                }
                eprintln!("vdw: cannot write to stdout: {e}");
                return 1;
            }
        }
    }
    if !cli.quiet {
        for line in summary_lines(&result) {
            eprintln!("{line}");
        }
    }
    if result.all_ok() {
        0
    } else {
        2
    }
}
