//! The sweep engine: per-size ground-state caches, a work queue over
//! (L, p) points, and a single writer that emits rows in (L, p) order no
//! matter how workers finish.
//!
//! Crash safety: each CSV row is flushed before its `manifest.jsonl` entry,
//! so a killed run leaves at most one unaccounted row, which resume
//! truncates. Resuming requires the same config hash and continues from the
//! first missing point.

use super::config::{BackendChoice, SweepConfig};
use super::{config_hash, fmt_f64, SweepError, SCHEMA_VERSION};
use crate::doubled::{
    apply_channel, observable_report, renyi2_correlator, vectorize, ChannelKind, ChannelSpec,
    DoubledState,
};
use crate::model::{build_hamiltonian, ground_state, Model, DEFAULT_DENSE_LIMIT};
use crate::mps::{
    apply_filter_gates_mps, canonical_correlator_mps, doubled_mps, ground_state_mps,
    renyi2_correlator_mps, renyi2_susceptibility_mps, see_mps, ChainMps, DmrgOptions,
    TruncationPolicy,
};
use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Read, Seek, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{mpsc, Arc};
use std::time::Instant;

pub const CSV_HEADER: &str =
    "model,delta,L,boundary,channel,p_zz,p_x,backend,chi_max,S_SE,chi2,c2_half,c1_half,trunc_weight,seed";

/// One output row of `see_sweep.csv`.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub model: Model,
    pub delta: f64,
    pub l: usize,
    pub boundary: crate::model::Boundary,
    pub channel: ChannelKind,
    pub p_zz: f64,
    pub p_x: f64,
    pub backend: &'static str,
    pub chi_max: usize,
    pub s_se: f64,
    pub chi2: f64,
    pub c2_half: f64,
    pub c1_half: f64,
    pub trunc_weight: f64,
    pub seed: u64,
}

impl SweepRow {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.model.as_str(),
            fmt_f64(self.delta),
            self.l,
            self.boundary.as_str(),
            self.channel.as_str(),
            fmt_f64(self.p_zz),
            fmt_f64(self.p_x),
            self.backend,
            self.chi_max,
            fmt_f64(self.s_se),
            fmt_f64(self.chi2),
            fmt_f64(self.c2_half),
            fmt_f64(self.c1_half),
            fmt_f64(self.trunc_weight),
            self.seed,
        )
    }
}

#[derive(Debug, serde::Serialize)]
struct ManifestPoint {
    index: usize,
    l: usize,
    p: f64,
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    wall_ms: u128,
    trunc_weight: f64,
}

#[derive(Debug)]
pub struct SweepOutput {
    pub csv_path: PathBuf,
    pub manifest_path: PathBuf,
    pub rows_ok: usize,
    pub rows_err: usize,
    pub resumed_from: usize,
}

#[derive(Clone)]
enum SizeBase {
    Dense(Arc<DoubledState>),
    Mps(Arc<ChainMps>),
    Failed(String),
}

fn backend_for(cfg: &SweepConfig, l: usize) -> BackendChoice {
    match cfg.backend {
        BackendChoice::Auto => {
            if l <= DEFAULT_DENSE_LIMIT {
                BackendChoice::Dense
            } else {
                BackendChoice::Mps
            }
        }
        other => other,
    }
}

fn channel_for(cfg: &SweepConfig, p: f64) -> Result<ChannelSpec, String> {
    match cfg.channel {
        ChannelKind::Zz => ChannelSpec::zz(p),
        ChannelKind::X => ChannelSpec::x(p),
        ChannelKind::XplusZz => ChannelSpec::x_plus_zz(p),
    }
    .map_err(|e| e.to_string())
}

fn compute_dense_base(cfg: &SweepConfig, l: usize) -> Result<DoubledState, String> {
    let spec = cfg.model_spec(l);
    let h = build_hamiltonian(&spec).map_err(|e| e.to_string())?;
    let gs = ground_state(&h, cfg.seed).map_err(|e| e.to_string())?;
    vectorize(&gs).map_err(|e| e.to_string())
}

fn compute_mps_base(cfg: &SweepConfig, l: usize) -> Result<ChainMps, String> {
    let spec = cfg.model_spec(l);
    let opts = DmrgOptions { chi_max: cfg.chi_max, seed: cfg.seed, ..DmrgOptions::default() };
    ground_state_mps(&spec, &opts).map(|r| r.mps).map_err(|e| e.to_string())
}

fn dense_row(
    cfg: &SweepConfig,
    base: &DoubledState,
    l: usize,
    p: f64,
) -> Result<SweepRow, String> {
    let channel = channel_for(cfg, p)?;
    let ds = apply_channel(base.clone(), &channel, cfg.boundary).map_err(|e| e.to_string())?;
    let report = observable_report(&ds, &channel).map_err(|e| e.to_string())?;
    if cfg.verify_rows {
        verify_dense_row(&ds, &report, l)?;
    }
    Ok(SweepRow {
        model: cfg.model,
        delta: cfg.delta,
        l,
        boundary: cfg.boundary,
        channel: cfg.channel,
        p_zz: channel.p_zz,
        p_x: channel.p_x,
        backend: "dense",
        chi_max: cfg.chi_max,
        s_se: report.s_se,
        chi2: report.chi2,
        c2_half: report.c2_profile.last().map(|&(_, v)| v).unwrap_or(1.0),
        c1_half: report.c1_profile.last().map(|&(_, v)| v).unwrap_or(1.0),
        trunc_weight: 0.0,
        seed: cfg.seed,
    })
}

fn verify_dense_row(
    ds: &DoubledState,
    report: &crate::doubled::ObservableReport,
    l: usize,
) -> Result<(), String> {
    let purity = ds.purity();
    if !(0.5f64.powi(l as i32) - 1e-12..=1.0 + 1e-10).contains(&purity) {
        return Err(format!("invariant violated: purity {purity} outside [2^-L, 1]"));
    }
    if report.s_se < -1e-10 {
        return Err(format!("invariant violated: S_SE = {} < 0", report.s_se));
    }
    let cii_self = renyi2_correlator(ds, 0, 0).map_err(|e| e.to_string())?;
    if (cii_self - 1.0).abs() > 1e-12 {
        return Err(format!("invariant violated: C^II(0,0) = {cii_self}"));
    }
    for &(r, v) in report.c2_profile.iter().chain(&report.c1_profile) {
        if v.abs() > 1.0 + 1e-8 {
            return Err(format!("invariant violated: correlator at r={r} is {v}"));
        }
    }
    Ok(())
}

fn mps_row(cfg: &SweepConfig, base: &ChainMps, l: usize, p: f64) -> Result<SweepRow, String> {
    let channel = channel_for(cfg, p)?;
    let policy = TruncationPolicy {
        chi_max: cfg.chi_max,
        svd_cutoff: cfg.svd_cutoff,
        ..TruncationPolicy::default()
    };
    let ladder = doubled_mps(base, &policy).map_err(|e| e.to_string())?;
    let ladder = apply_filter_gates_mps(ladder, &channel, &policy).map_err(|e| e.to_string())?;
    let s_se = see_mps(&ladder).map_err(|e| e.to_string())?;
    let chi2 = renyi2_susceptibility_mps(&ladder).map_err(|e| e.to_string())?;
    let c2_half = renyi2_correlator_mps(&ladder, 0, l / 2).map_err(|e| e.to_string())?;
    let c1_half = canonical_correlator_mps(&ladder, 0, l / 2).map_err(|e| e.to_string())?;
    Ok(SweepRow {
        model: cfg.model,
        delta: cfg.delta,
        l,
        boundary: cfg.boundary,
        channel: cfg.channel,
        p_zz: channel.p_zz,
        p_x: channel.p_x,
        backend: "mps",
        chi_max: cfg.chi_max,
        s_se,
        chi2,
        c2_half,
        c1_half,
        trunc_weight: ladder.truncation_weight,
        seed: cfg.seed,
    })
}

/// Count complete (newline-terminated) data rows in an existing CSV and
/// truncate any partial trailing line.
fn reconcile_csv(path: &Path) -> Result<usize, SweepError> {
    let mut file = OpenOptions::new()
        .read(true)
        .write(true)
        .open(path)
        .map_err(|e| SweepError::io(path, e))?;
    let mut content = String::new();
    file.read_to_string(&mut content).map_err(|e| SweepError::io(path, e))?;
    let complete = match content.rfind('\n') {
        Some(pos) => &content[..=pos],
        None => "",
    };
    if complete.len() != content.len() {
        file.set_len(complete.len() as u64).map_err(|e| SweepError::io(path, e))?;
    }
    let rows = complete.lines().count().saturating_sub(1); // header
    Ok(rows)
}

fn manifest_entries(path: &Path, expect_hash: &str) -> Option<usize> {
    let file = File::open(path).ok()?;
    let mut lines = BufReader::new(file).lines();
    let header = lines.next()?.ok()?;
    let header: serde_json::Value = serde_json::from_str(&header).ok()?;
    if header.get("config_hash")?.as_str()? != expect_hash {
        return None;
    }
    let mut count = 0usize;
    for line in lines {
        let line = line.ok()?;
        if serde_json::from_str::<serde_json::Value>(&line).is_ok() {
            count += 1;
        } else {
            break;
        }
    }
    Some(count)
}

/// Run the sweep described by `cfg`, writing `see_sweep.csv`,
/// `manifest.jsonl` and `run_manifest.json` into the output directory.
///
/// Point failures are recorded and the run continues; the caller decides
/// what a partial failure means (the CLI exits 3).
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutput, SweepError> {
    std::fs::create_dir_all(&cfg.out_dir).map_err(|e| SweepError::io(&cfg.out_dir, e))?;
    let csv_path = cfg.out_dir.join("see_sweep.csv");
    let jsonl_path = cfg.out_dir.join("manifest.jsonl");
    let manifest_path = cfg.out_dir.join("run_manifest.json");
    let hash = config_hash(cfg);

    // Points in deterministic (L, p) order.
    let mut points: Vec<(usize, f64)> = Vec::new();
    for &l in &cfg.sizes {
        for &p in &cfg.p_grid {
            points.push((l, p));
        }
    }
    let total = points.len();
    let limit = if cfg.max_points == 0 { total } else { cfg.max_points.min(total) };

    // Resume bookkeeping: valid only when CSV rows and manifest rows agree
    // after truncating a possibly torn final CSV row.
    let mut start_index = 0usize;
    if csv_path.exists() && jsonl_path.exists() {
        if let Some(m_rows) = manifest_entries(&jsonl_path, &hash) {
            let mut csv_rows = reconcile_csv(&csv_path)?;
            if csv_rows == m_rows + 1 {
                // Torn run: drop the unaccounted row.
                drop_last_csv_row(&csv_path)?;
                csv_rows -= 1;
            }
            if csv_rows == m_rows && csv_rows <= total {
                start_index = csv_rows;
            }
        }
    }

    let mut csv_file;
    let mut jsonl_file;
    if start_index > 0 {
        csv_file = OpenOptions::new()
            .append(true)
            .open(&csv_path)
            .map_err(|e| SweepError::io(&csv_path, e))?;
        jsonl_file = OpenOptions::new()
            .append(true)
            .open(&jsonl_path)
            .map_err(|e| SweepError::io(&jsonl_path, e))?;
    } else {
        csv_file = File::create(&csv_path).map_err(|e| SweepError::io(&csv_path, e))?;
        writeln!(csv_file, "{CSV_HEADER}").map_err(|e| SweepError::io(&csv_path, e))?;
        csv_file.flush().map_err(|e| SweepError::io(&csv_path, e))?;
        jsonl_file = File::create(&jsonl_path).map_err(|e| SweepError::io(&jsonl_path, e))?;
        let header = serde_json::json!({
            "schema_version": SCHEMA_VERSION,
            "tool_version": env!("CARGO_PKG_VERSION"),
            "config_hash": hash,
        });
        writeln!(jsonl_file, "{header}").map_err(|e| SweepError::io(&jsonl_path, e))?;
        jsonl_file.flush().map_err(|e| SweepError::io(&jsonl_path, e))?;
    }

    // Per-size bases, built once up front (cheap relative to the грид and
    // keeps workers read-only).
    let mut bases: BTreeMap<usize, SizeBase> = BTreeMap::new();
    for &l in &cfg.sizes {
        if bases.contains_key(&l) {
            continue;
        }
        let needed = points[start_index..limit.min(points.len())]
            .iter()
            .any(|&(pl, _)| pl == l);
        if !needed {
            continue;
        }
        let base = match backend_for(cfg, l) {
            BackendChoice::Dense => match compute_dense_base(cfg, l) {
                Ok(ds) => SizeBase::Dense(Arc::new(ds)),
                Err(e) => SizeBase::Failed(e),
            },
            BackendChoice::Mps => match compute_mps_base(cfg, l) {
                Ok(mps) => SizeBase::Mps(Arc::new(mps)),
                Err(e) => SizeBase::Failed(e),
            },
            BackendChoice::Auto => unreachable!("backend_for resolves auto"),
        };
        bases.insert(l, base);
    }

    let work: Vec<(usize, usize, f64)> = (start_index..limit)
        .map(|idx| (idx, points[idx].0, points[idx].1))
        .collect();
    let cfg_arc = Arc::new(cfg.clone());
    let bases_arc = Arc::new(bases);
    let next = Arc::new(AtomicUsize::new(0));
    let (tx, rx) = mpsc::channel::<(usize, Result<SweepRow, String>, u128, f64)>();

    let worker_count = cfg.workers.min(work.len().max(1));
    std::thread::scope(|scope| -> Result<(), SweepError> {
        for _ in 0..worker_count {
            let tx = tx.clone();
            let work = &work;
            let cfg = Arc::clone(&cfg_arc);
            let bases = Arc::clone(&bases_arc);
            let next = Arc::clone(&next);
            scope.spawn(move || loop {
                let slot = next.fetch_add(1, Ordering::SeqCst);
                if slot >= work.len() {
                    break;
                }
                let (idx, l, p) = work[slot];
                let t0 = Instant::now();
                let result = match bases.get(&l) {
                    Some(SizeBase::Dense(base)) => dense_row(&cfg, base, l, p),
                    Some(SizeBase::Mps(base)) => mps_row(&cfg, base, l, p),
                    Some(SizeBase::Failed(e)) => Err(e.clone()),
                    None => Err("no base prepared for this size".to_string()),
                };
                let wall = t0.elapsed().as_millis();
                let weight = result.as_ref().map(|r| r.trunc_weight).unwrap_or(0.0);
                if tx.send((idx, result, wall, weight)).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        // Single writer, re-ordering completions into index order.
        let mut pending: BTreeMap<usize, (Result<SweepRow, String>, u128, f64)> = BTreeMap::new();
        let mut next_write = start_index;
        for (idx, result, wall, weight) in rx.iter() {
            pending.insert(idx, (result, wall, weight));
            while let Some((result, wall, weight)) = pending.remove(&next_write) {
                let (l, p) = points[next_write];
                let (status, error, line) = match &result {
                    Ok(row) => ("ok", None, Some(row.to_csv_line())),
                    Err(e) => ("error", Some(e.clone()), None),
                };
                if let Some(line) = line {
                    writeln!(csv_file, "{line}").map_err(|e| SweepError::io(&csv_path, e))?;
                    csv_file.flush().map_err(|e| SweepError::io(&csv_path, e))?;
                }
                let entry = ManifestPoint {
                    index: next_write,
                    l,
                    p,
                    status: status.to_string(),
                    error,
                    wall_ms: wall,
                    trunc_weight: weight,
                };
                writeln!(jsonl_file, "{}", serde_json::to_string(&entry).unwrap())
                    .map_err(|e| SweepError::io(&jsonl_path, e))?;
                jsonl_file.flush().map_err(|e| SweepError::io(&jsonl_path, e))?;
                next_write += 1;
            }
        }
        Ok(())
    })?;

    // Final summary manifest (includes wall clock, so not byte-stable).
    let (rows_ok, rows_err, point_entries) = summarize_jsonl(&jsonl_path)?;
    let summary = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "config_hash": hash,
        "total_points": total,
        "completed_points": rows_ok + rows_err,
        "rows_ok": rows_ok,
        "rows_err": rows_err,
        "points": point_entries,
    });
    let mut mf = File::create(&manifest_path).map_err(|e| SweepError::io(&manifest_path, e))?;
    writeln!(mf, "{}", serde_json::to_string_pretty(&summary).unwrap())
        .map_err(|e| SweepError::io(&manifest_path, e))?;

    Ok(SweepOutput { csv_path, manifest_path, rows_ok, rows_err, resumed_from: start_index })
}

fn drop_last_csv_row(path: &Path) -> Result<(), SweepError> {
    let mut file = OpenOptions::new()
        .read(true)
        .write(true)
        .open(path)
        .map_err(|e| SweepError::io(path, e))?;
    let mut content = String::new();
    file.read_to_string(&mut content).map_err(|e| SweepError::io(path, e))?;
    let trimmed = &content[..content.trim_end_matches('\n').rfind('\n').map(|p| p + 1).unwrap_or(0)];
    file.set_len(trimmed.len() as u64).map_err(|e| SweepError::io(path, e))?;
    file.rewind().map_err(|e| SweepError::io(path, e))?;
    Ok(())
}

fn summarize_jsonl(
    path: &Path,
) -> Result<(usize, usize, Vec<serde_json::Value>), SweepError> {
    let file = File::open(path).map_err(|e| SweepError::io(path, e))?;
    let mut ok = 0usize;
    let mut err = 0usize;
    let mut entries = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| SweepError::io(path, e))?;
        if i == 0 {
            continue; // header
        }
        let value: serde_json::Value = serde_json::from_str(&line)
            .map_err(|e| SweepError::Numerical(format!("corrupt manifest line {}: {e}", i + 1)))?;
        match value.get("status").and_then(|s| s.as_str()) {
            Some("ok") => ok += 1,
            _ => err += 1,
        }
        entries.push(value);
    }
    Ok((ok, err, entries))
}

/// Parse `see_sweep.csv` back into rows (used by `fit` and tests).
pub fn read_sweep_csv(path: &Path) -> Result<Vec<SweepRow>, SweepError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| SweepError::io(path, e))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        Some(h) => {
            return Err(SweepError::Numerical(format!(
                "unexpected CSV header: {h}"
            )))
        }
        None => return Err(SweepError::Numerical("empty sweep CSV".into())),
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 15 {
            return Err(SweepError::Numerical(format!(
                "row {} has {} fields, expected 15",
                i + 2,
                fields.len()
            )));
        }
        let parse_f = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| SweepError::Numerical(format!("bad float `{s}` in row {}", i + 2)))
        };
        let model = match fields[0] {
            "tfim" => Model::Tfim,
            "xxz" => Model::Xxz,
            other => return Err(SweepError::Numerical(format!("bad model `{other}`"))),
        };
        let boundary = match fields[3] {
            "periodic" => crate::model::Boundary::Periodic,
            "open" => crate::model::Boundary::Open,
            other => return Err(SweepError::Numerical(format!("bad boundary `{other}`"))),
        };
        let channel = match fields[4] {
            "zz" => ChannelKind::Zz,
            "x" => ChannelKind::X,
            "x+zz" => ChannelKind::XplusZz,
            other => return Err(SweepError::Numerical(format!("bad channel `{other}`"))),
        };
        rows.push(SweepRow {
            model,
            delta: parse_f(fields[1])?,
            l: fields[2]
                .parse()
                .map_err(|_| SweepError::Numerical(format!("bad L `{}`", fields[2])))?,
            boundary,
            channel,
            p_zz: parse_f(fields[5])?,
            p_x: parse_f(fields[6])?,
            backend: if fields[7] == "mps" { "mps" } else { "dense" },
            chi_max: fields[8]
                .parse()
                .map_err(|_| SweepError::Numerical(format!("bad chi_max `{}`", fields[8])))?,
            s_se: parse_f(fields[9])?,
            chi2: parse_f(fields[10])?,
            c2_half: parse_f(fields[11])?,
            c1_half: parse_f(fields[12])?,
            trunc_weight: parse_f(fields[13])?,
            seed: fields[14]
                .parse()
                .map_err(|_| SweepError::Numerical(format!("bad seed `{}`", fields[14])))?,
        });
    }
    Ok(rows)
}
