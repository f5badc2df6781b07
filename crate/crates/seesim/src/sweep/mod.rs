//! Sweep orchestration: config ingestion, scheduled (L, p) grids with
//! backend selection, deterministic CSV/JSON persistence, verification
//! suites and plot-script emission.
//!
//! Result files:
//!
//! * `see_sweep.csv` — one row per (L, p) point, header
//!   `model,delta,L,boundary,channel,p_zz,p_x,backend,chi_max,S_SE,chi2,c2_half,c1_half,trunc_weight,seed`;
//! * `fits.csv` — per-(p, window) scaling fits, header
//!   `model,delta,channel,p,window,alpha,s0,g,residual_rms`;
//! * `manifest.jsonl` + `run_manifest.json` — per-point status and timing;
//! * JSON reports for fit, collapse and verify, each carrying a
//!   `schema_version` field.
//!
//! Floats serialize with 17 significant digits, which round-trips f64, so
//! repeated runs of the same config and seed are byte-identical.

pub mod collapse_cmd;
pub mod config;
pub mod fit_cmd;
pub mod plot;
pub mod runner;
pub mod verify;

pub use collapse_cmd::{run_collapse, CollapseCmdOptions};
pub use config::{config_hash, parse_config, BackendChoice, SweepConfig};
pub use fit_cmd::{default_windows, run_fit, FitOutput};
pub use plot::run_plot;
pub use runner::{run_sweep, SweepOutput, SweepRow};
pub use verify::{run_verify, VerifyOptions, VerifyReport};

use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("config error{}: {msg}", line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    Config { line: Option<usize>, msg: String },
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Numerical(String),
    #[error("{failed} of {total} sweep points failed")]
    PointsFailed { failed: usize, total: usize },
}

impl SweepError {
    pub fn config(msg: impl Into<String>) -> Self {
        SweepError::Config { line: None, msg: msg.into() }
    }

    pub fn config_at(line: usize, msg: impl Into<String>) -> Self {
        SweepError::Config { line: Some(line), msg: msg.into() }
    }

    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        SweepError::Io { path: path.display().to_string(), source }
    }

    /// Process exit code: 2 config, 3 numerical/io, 4 verification.
    pub fn exit_code(&self) -> i32 {
        match self {
            SweepError::Config { .. } => 2,
            SweepError::Io { .. } => 3,
            SweepError::Numerical(_) => 3,
            SweepError::PointsFailed { .. } => 3,
        }
    }
}

/// 17 significant digits: round-trips every f64 exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}
