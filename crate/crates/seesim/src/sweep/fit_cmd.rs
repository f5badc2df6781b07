//! The `fit` command: scaling-law fits of S_SE over size windows per p,
//! with an optional 1/L extrapolation of s₀ and closed-form references.

use super::runner::{read_sweep_csv, SweepRow};
use super::{fmt_f64, SweepError, SCHEMA_VERSION};
use crate::scaling::{
    extrapolate_s0, fit_linear_s0, reference_g_value, BackendKind, FitResult, SeeSample,
};
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const FITS_HEADER: &str = "model,delta,channel,p,window,alpha,s0,g,residual_rms";

#[derive(Debug, serde::Serialize)]
pub struct FitRecord {
    pub p: f64,
    pub window: Vec<usize>,
    pub alpha: f64,
    pub s0: f64,
    pub g: f64,
    pub residual_rms: f64,
    pub s0_stderr: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_g: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relative_deviation: Option<f64>,
}

#[derive(Debug, serde::Serialize)]
pub struct ExtrapolationRecord {
    pub p: f64,
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
}

#[derive(Debug)]
pub struct FitOutput {
    pub fits_csv: PathBuf,
    pub report: PathBuf,
    pub records: Vec<FitRecord>,
    pub extrapolations: Vec<ExtrapolationRecord>,
}

/// Windows used when none are requested: every run of 3 and of 4
/// consecutive sizes present in the sweep.
pub fn default_windows(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut sorted = sizes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut windows = Vec::new();
    for w in [3usize, 4] {
        if sorted.len() >= w {
            for chunk in sorted.windows(w) {
                windows.push(chunk.to_vec());
            }
        }
    }
    windows
}

pub fn window_label(window: &[usize]) -> String {
    window.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(":")
}

/// Fit every (p, window) pair found in the sweep file and write `fits.csv`
/// plus `fit_report.json` (which carries stderr, references and the
/// extrapolation blocks that the pinned CSV schema has no columns for).
pub fn run_fit(
    sweep_csv: &Path,
    windows: Option<Vec<Vec<usize>>>,
    out_dir: &Path,
    extrapolate: bool,
) -> Result<FitOutput, SweepError> {
    let rows = read_sweep_csv(sweep_csv)?;
    if rows.is_empty() {
        return Err(SweepError::Numerical("sweep CSV has no rows".into()));
    }
    let model = rows[0].model;
    let delta = rows[0].delta;
    let channel = rows[0].channel;
    let backend = rows[0].backend;
    if rows.iter().any(|r| {
        r.model != model || r.delta != delta || r.channel != channel || r.backend != backend
    }) {
        return Err(SweepError::Numerical(
            "sweep CSV mixes models, channels or backends; fit them separately".into(),
        ));
    }

    let mut sizes: Vec<usize> = rows.iter().map(|r| r.l).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let windows = windows.unwrap_or_else(|| default_windows(&sizes));
    if windows.is_empty() {
        return Err(SweepError::Numerical(format!(
            "no usable windows from sizes {sizes:?}; need at least 3 sizes"
        )));
    }

    let mut p_values: Vec<f64> = rows.iter().map(|r| p_of(r)).collect();
    p_values.sort_by(f64::total_cmp);
    p_values.dedup_by(|a, b| (*a - *b).abs() < 1e-12);

    let reference = reference_g_value(model, delta, channel).ok();

    std::fs::create_dir_all(out_dir).map_err(|e| SweepError::io(out_dir, e))?;
    let fits_csv = out_dir.join("fits.csv");
    let report_path = out_dir.join("fit_report.json");
    let mut csv = File::create(&fits_csv).map_err(|e| SweepError::io(&fits_csv, e))?;
    writeln!(csv, "{FITS_HEADER}").map_err(|e| SweepError::io(&fits_csv, e))?;

    let mut records = Vec::new();
    for &p in &p_values {
        for window in &windows {
            let samples: Vec<SeeSample> = rows
                .iter()
                .filter(|r| (p_of(r) - p).abs() < 1e-12 && window.contains(&r.l))
                .map(|r| SeeSample {
                    l: r.l,
                    p,
                    s_se: r.s_se,
                    backend: if r.backend == "mps" { BackendKind::Mps } else { BackendKind::Dense },
                    truncation_weight: r.trunc_weight,
                })
                .collect();
            let distinct = {
                let mut ls: Vec<usize> = samples.iter().map(|s| s.l).collect();
                ls.sort_unstable();
                ls.dedup();
                ls.len()
            };
            if distinct < window.len() {
                continue; // window not fully covered at this p
            }
            let fit: FitResult = fit_linear_s0(&samples)
                .map_err(|e| SweepError::Numerical(format!("fit at p={p}: {e}")))?;
            writeln!(
                csv,
                "{},{},{},{},{},{},{},{},{}",
                model.as_str(),
                fmt_f64(delta),
                channel.as_str(),
                fmt_f64(p),
                window_label(window),
                fmt_f64(fit.alpha),
                fmt_f64(fit.s0),
                fmt_f64(fit.g()),
                fmt_f64(fit.residual_rms),
            )
            .map_err(|e| SweepError::io(&fits_csv, e))?;
            records.push(FitRecord {
                p,
                window: window.clone(),
                alpha: fit.alpha,
                s0: fit.s0,
                g: fit.g(),
                residual_rms: fit.residual_rms,
                s0_stderr: fit.s0_stderr,
                reference_g: reference,
                relative_deviation: reference.map(|r| (fit.g() - r) / r),
            });
        }
    }
    if records.is_empty() {
        return Err(SweepError::Numerical(
            "no (p, window) pair was fully covered by the sweep".into(),
        ));
    }

    let mut extrapolations = Vec::new();
    if extrapolate {
        for &p in &p_values {
            let points: Vec<(f64, f64)> = records
                .iter()
                .filter(|r| (r.p - p).abs() < 1e-12)
                .map(|r| (*r.window.iter().min().unwrap() as f64, r.s0))
                .collect();
            if points.len() >= 3 {
                if let Ok((slope, intercept)) = extrapolate_s0(&points) {
                    extrapolations.push(ExtrapolationRecord { p, points, slope, intercept });
                }
            }
        }
    }

    let report = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "model": model.as_str(),
        "delta": delta,
        "channel": channel.as_str(),
        "backend": backend,
        "fits": records,
        "extrapolation": extrapolations,
    });
    let mut rf = File::create(&report_path).map_err(|e| SweepError::io(&report_path, e))?;
    writeln!(rf, "{}", serde_json::to_string_pretty(&report).unwrap())
        .map_err(|e| SweepError::io(&report_path, e))?;

    Ok(FitOutput { fits_csv, report: report_path, records, extrapolations })
}

fn p_of(row: &SweepRow) -> f64 {
    row.p_zz.max(row.p_x)
}

/// Parse `fits.csv` into (model, delta, channel, records).
pub fn read_fits_csv(
    path: &Path,
) -> Result<Vec<(String, f64, String, f64, Vec<usize>, f64, f64, f64)>, SweepError> {
    let text = std::fs::read_to_string(path).map_err(|e| SweepError::io(path, e))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == FITS_HEADER => {}
        other => {
            return Err(SweepError::Numerical(format!(
                "unexpected fits.csv header: {other:?}"
            )))
        }
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(SweepError::Numerical(format!(
                "fits.csv row {} has {} fields, expected 9",
                i + 2,
                fields.len()
            )));
        }
        let parse_f = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| SweepError::Numerical(format!("bad float `{s}` in fits.csv")))
        };
        let window: Vec<usize> = fields[4]
            .split(':')
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| SweepError::Numerical(format!("bad window `{}`", fields[4])))
            })
            .collect::<Result<_, _>>()?;
        out.push((
            fields[0].to_string(),
            parse_f(fields[1])?,
            fields[2].to_string(),
            parse_f(fields[3])?,
            window,
            parse_f(fields[5])?,
            parse_f(fields[6])?,
            parse_f(fields[8])?,
        ));
    }
    Ok(out)
}
