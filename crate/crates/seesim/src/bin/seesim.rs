//! Command-line front end: sweep, fit, collapse, verify, plot.
//!
//! Exit codes: 0 success, 2 config/usage error, 3 numerical or I/O failure
//! (including partially failed sweeps), 4 verification failure.

use clap::{Args, Parser, Subcommand};
use seesim::model::Model;
use seesim::scaling::CollapseParams;
use seesim::sweep::{
    parse_config, run_collapse, run_fit, run_plot, run_sweep, run_verify, BackendChoice,
    CollapseCmdOptions, SweepError, VerifyOptions,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "seesim", version, about = "Decoherence sweeps on critical spin chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a (L, p) sweep from a config file and write see_sweep.csv.
    Sweep(SweepArgs),
    /// Fit S_SE = αL − s₀ over size windows from a sweep CSV.
    Fit(FitArgs),
    /// Finite-size-scaling collapse of g-function curves from fits.csv.
    Collapse(CollapseArgs),
    /// Run the exact-identity and oracle-equivalence suite.
    Verify(VerifyArgs),
    /// Emit plot scripts and tidy data from existing results.
    Plot(PlotArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Override the configured output directory (also: SEESIM_OUT).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the configured worker count.
    #[arg(long)]
    workers: Option<usize>,
    /// Override the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the configured backend (dense | mps | auto).
    #[arg(long)]
    backend: Option<String>,
    /// Override the configured bond-dimension cap.
    #[arg(long = "chi-max")]
    chi_max: Option<usize>,
}

#[derive(Args)]
struct FitArgs {
    /// Input sweep CSV (see_sweep.csv).
    #[arg(long)]
    sweep: PathBuf,
    /// Size windows, e.g. `6:8:10,8:10:12`; defaults to all runs of 3 and 4.
    #[arg(long)]
    windows: Option<String>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Also extrapolate s₀ against 1/L_sd.
    #[arg(long)]
    extrapolate: bool,
}

#[derive(Args)]
struct CollapseArgs {
    /// Input fits CSV (fits.csv).
    #[arg(long)]
    fits: PathBuf,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Initial guess `p_c,nu,zeta`.
    #[arg(long)]
    init: Option<String>,
    #[arg(long = "p-min", default_value_t = 0.2)]
    p_min: f64,
    #[arg(long = "p-max", default_value_t = 0.5)]
    p_max: f64,
    #[arg(long, default_value_t = 16)]
    restarts: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Model to verify (tfim | xxz).
    #[arg(long)]
    model: String,
    #[arg(long, default_value_t = 0.45)]
    delta: f64,
    /// Sizes, comma separated.
    #[arg(long, default_value = "6,8")]
    sizes: String,
    /// Include the MPS–dense oracle-equivalence checks.
    #[arg(long)]
    mps: bool,
    #[arg(long = "chi-max", default_value_t = 64)]
    chi_max: usize,
    /// Write the JSON report here (default: stdout only).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Scale all tolerances (ops knob; < 1 tightens the suite).
    #[arg(long = "tolerance-scale", default_value_t = 1.0)]
    tolerance_scale: f64,
}

#[derive(Args)]
struct PlotArgs {
    /// Directory holding see_sweep.csv (and optionally fits.csv,
    /// collapse_report.json).
    #[arg(long)]
    results: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, SweepError> {
    match cli.command {
        Command::Sweep(args) => {
            let text = std::fs::read_to_string(&args.config)
                .map_err(|e| SweepError::io(&args.config, e))?;
            let mut cfg = parse_config(&text)?;
            if let Some(out) = args.out {
                cfg.out_dir = out;
            } else if let Ok(out) = std::env::var("SEESIM_OUT") {
                cfg.out_dir = PathBuf::from(out);
            }
            if let Some(w) = args.workers {
                cfg.workers = w.max(1);
            }
            if let Some(s) = args.seed {
                cfg.seed = s;
            }
            if let Some(b) = args.backend {
                cfg.backend = match b.as_str() {
                    "dense" => BackendChoice::Dense,
                    "mps" => BackendChoice::Mps,
                    "auto" => BackendChoice::Auto,
                    other => {
                        return Err(SweepError::config(format!("unknown backend `{other}`")))
                    }
                };
            }
            if let Some(chi) = args.chi_max {
                cfg.chi_max = chi;
            }
            let output = run_sweep(&cfg)?;
            eprintln!(
                "sweep: {} ok, {} failed -> {}",
                output.rows_ok,
                output.rows_err,
                output.csv_path.display()
            );
            if output.rows_err > 0 {
                return Err(SweepError::PointsFailed {
                    failed: output.rows_err,
                    total: output.rows_ok + output.rows_err,
                });
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Fit(args) => {
            let windows = match args.windows {
                None => None,
                Some(spec) => Some(parse_windows(&spec)?),
            };
            let output = run_fit(&args.sweep, windows, &args.out, args.extrapolate)?;
            eprintln!(
                "fit: {} records -> {} / {}",
                output.records.len(),
                output.fits_csv.display(),
                output.report.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Collapse(args) => {
            let mut opts = CollapseCmdOptions {
                p_min: args.p_min,
                p_max: args.p_max,
                restarts: args.restarts,
                seed: args.seed,
                ..CollapseCmdOptions::default()
            };
            if let Some(init) = args.init {
                let parts: Vec<&str> = init.split(',').collect();
                if parts.len() != 3 {
                    return Err(SweepError::config("--init needs p_c,nu,zeta"));
                }
                let parse = |s: &str| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| SweepError::config(format!("bad number `{s}` in --init")))
                };
                opts.init = CollapseParams {
                    p_c: parse(parts[0])?,
                    nu: parse(parts[1])?,
                    zeta: parse(parts[2])?,
                };
            }
            let path = run_collapse(&args.fits, &opts, &args.out)?;
            eprintln!("collapse -> {}", path.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => {
            let model = match args.model.as_str() {
                "tfim" => Model::Tfim,
                "xxz" => Model::Xxz,
                other => return Err(SweepError::config(format!("unknown model `{other}`"))),
            };
            let sizes: Result<Vec<usize>, _> =
                args.sizes.split(',').map(|s| s.trim().parse::<usize>()).collect();
            let sizes =
                sizes.map_err(|_| SweepError::config(format!("bad --sizes `{}`", args.sizes)))?;
            let opts = VerifyOptions {
                model,
                delta: args.delta,
                sizes,
                include_mps: args.mps,
                chi_max: args.chi_max,
                seed: args.seed,
                tolerance_scale: args.tolerance_scale,
                ..VerifyOptions::default()
            };
            let report = run_verify(&opts)?;
            for check in &report.checks {
                println!(
                    "{} L={} {}: |{:.3e}| <= {:.3e}{}",
                    if check.passed { "PASS" } else { "FAIL" },
                    check.l,
                    check.name,
                    check.value,
                    check.tolerance,
                    check.detail.as_deref().map(|d| format!(" ({d})")).unwrap_or_default()
                );
            }
            if let Some(out) = args.out {
                report.write_json(&out)?;
                eprintln!("verify report -> {}", out.display());
            }
            if report.passed {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("verification failed");
                Ok(ExitCode::from(4))
            }
        }
        Command::Plot(args) => {
            let written = run_plot(&args.results)?;
            for path in written {
                eprintln!("plot -> {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_windows(spec: &str) -> Result<Vec<Vec<usize>>, SweepError> {
    spec.split(',')
        .map(|w| {
            w.split(':')
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| SweepError::config(format!("bad window element `{s}`")))
                })
                .collect::<Result<Vec<usize>, _>>()
        })
        .collect()
}
