//! Flat key-value sweep configuration with sections.
//!
//! Grammar, line by line: blank lines and `#` comments are skipped;
//! `[section]` opens a section; `key = value` assigns inside it. Sections
//! and keys are fixed (unknown ones are errors); values are numbers, enum
//! words, or comma-separated lists. The config hash is a SHA-256 over the
//! canonicalized `(section.key, value)` pairs, so key order and comments do
//! not affect it.

use super::SweepError;
use crate::doubled::ChannelKind;
use crate::model::{Boundary, Model, ModelSpec};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackendChoice {
    Dense,
    Mps,
    Auto,
}

impl BackendChoice {
    pub fn as_str(&self) -> &'static str {
        match self {
            BackendChoice::Dense => "dense",
            BackendChoice::Mps => "mps",
            BackendChoice::Auto => "auto",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub model: Model,
    pub delta: f64,
    pub boundary: Boundary,
    pub channel: ChannelKind,
    pub p_grid: Vec<f64>,
    pub sizes: Vec<usize>,
    pub backend: BackendChoice,
    pub chi_max: usize,
    pub svd_cutoff: f64,
    pub seed: u64,
    pub workers: usize,
    pub out_dir: PathBuf,
    /// Stop after this many points (testing/resume knob); 0 means no limit.
    pub max_points: usize,
    /// Check row invariants (purity bounds, correlator ranges) per point.
    pub verify_rows: bool,
}

impl SweepConfig {
    pub fn model_spec(&self, l: usize) -> ModelSpec {
        ModelSpec { model: self.model, l, delta: self.delta, boundary: self.boundary }
    }

    /// Canonical `(section.key, value)` pairs used for hashing.
    fn canonical_pairs(&self) -> Vec<(String, String)> {
        let f = super::fmt_f64;
        vec![
            ("model.kind".into(), self.model.as_str().into()),
            ("model.delta".into(), f(self.delta)),
            ("model.boundary".into(), self.boundary.as_str().into()),
            ("channel.kind".into(), self.channel.as_str().into()),
            (
                "channel.p".into(),
                self.p_grid.iter().map(|&p| f(p)).collect::<Vec<_>>().join(","),
            ),
            (
                "sweep.sizes".into(),
                self.sizes.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(","),
            ),
            ("sweep.backend".into(), self.backend.as_str().into()),
            ("sweep.chi_max".into(), self.chi_max.to_string()),
            ("sweep.svd_cutoff".into(), f(self.svd_cutoff)),
            ("sweep.seed".into(), self.seed.to_string()),
        ]
    }
}

/// SHA-256 over the canonical pairs; independent of key order, comments,
/// workers, and output location.
pub fn config_hash(cfg: &SweepConfig) -> String {
    let mut hasher = Sha256::new();
    for (k, v) in cfg.canonical_pairs() {
        hasher.update(k.as_bytes());
        hasher.update(b"=");
        hasher.update(v.as_bytes());
        hasher.update(b"\n");
    }
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn parse_config(text: &str) -> Result<SweepConfig, SweepError> {
    let mut section = String::new();
    let mut entries: BTreeMap<(String, String), (usize, String)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| SweepError::config_at(lineno, "unterminated section header"))?
                .trim();
            if !["model", "channel", "sweep", "output", "verify"].contains(&name) {
                return Err(SweepError::config_at(lineno, format!("unknown section [{name}]")));
            }
            section = name.to_string();
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| SweepError::config_at(lineno, "expected `key = value`"))?;
        if section.is_empty() {
            return Err(SweepError::config_at(lineno, "key outside any [section]"));
        }
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if entries.insert((section.clone(), key.clone()), (lineno, value)).is_some() {
            return Err(SweepError::config_at(lineno, format!("duplicate key {section}.{key}")));
        }
    }

    let mut take = |sec: &str, key: &str| entries.remove(&(sec.to_string(), key.to_string()));

    let model = match take("model", "kind") {
        Some((line, v)) => match v.as_str() {
            "tfim" => Model::Tfim,
            "xxz" => Model::Xxz,
            other => {
                return Err(SweepError::config_at(line, format!("unknown model kind `{other}`")))
            }
        },
        None => return Err(SweepError::config("missing model.kind")),
    };
    let delta = parse_opt_f64(take("model", "delta"))?.unwrap_or(0.0);
    let boundary = match take("model", "boundary") {
        None => Boundary::Periodic,
        Some((line, v)) => match v.as_str() {
            "periodic" => Boundary::Periodic,
            "open" => Boundary::Open,
            other => {
                return Err(SweepError::config_at(line, format!("unknown boundary `{other}`")))
            }
        },
    };

    let channel = match take("channel", "kind") {
        Some((line, v)) => match v.as_str() {
            "zz" => ChannelKind::Zz,
            "x" => ChannelKind::X,
            "x+zz" => ChannelKind::XplusZz,
            other => {
                return Err(SweepError::config_at(line, format!("unknown channel kind `{other}`")))
            }
        },
        None => return Err(SweepError::config("missing channel.kind")),
    };
    let p_list = take("channel", "p_list");
    let p_linspace = take("channel", "p_linspace");
    let p_grid = match (p_list, p_linspace) {
        (Some((line, v)), None) => parse_f64_list(line, &v)?,
        (None, Some((line, v))) => {
            let parts = parse_f64_list(line, &v)?;
            if parts.len() != 3 {
                return Err(SweepError::config_at(
                    line,
                    "p_linspace needs exactly start,stop,count",
                ));
            }
            let count = parts[2] as usize;
            if count < 1 || (parts[2] - count as f64).abs() > 0.0 {
                return Err(SweepError::config_at(line, "p_linspace count must be a positive integer"));
            }
            if count == 1 {
                vec![parts[0]]
            } else {
                (0..count)
                    .map(|k| parts[0] + (parts[1] - parts[0]) * k as f64 / (count - 1) as f64)
                    .collect()
            }
        }
        (Some(_), Some((line, _))) => {
            return Err(SweepError::config_at(line, "give either p_list or p_linspace, not both"))
        }
        (None, None) => return Err(SweepError::config("missing channel.p_list or channel.p_linspace")),
    };
    if p_grid.is_empty() {
        return Err(SweepError::config("empty p grid"));
    }
    for &p in &p_grid {
        if !(0.0..=0.5).contains(&p) {
            return Err(SweepError::config(format!("p = {p} outside [0, 1/2]")));
        }
    }

    let sizes = match take("sweep", "sizes") {
        Some((line, v)) => parse_usize_list(line, &v)?,
        None => return Err(SweepError::config("missing sweep.sizes")),
    };
    if sizes.is_empty() {
        return Err(SweepError::config("empty sweep.sizes"));
    }
    for &l in &sizes {
        if l < 2 || l % 2 != 0 {
            return Err(SweepError::config(format!("size {l} must be even and at least 2")));
        }
    }
    let backend = match take("sweep", "backend") {
        None => BackendChoice::Auto,
        Some((line, v)) => match v.as_str() {
            "dense" => BackendChoice::Dense,
            "mps" => BackendChoice::Mps,
            "auto" => BackendChoice::Auto,
            other => {
                return Err(SweepError::config_at(line, format!("unknown backend `{other}`")))
            }
        },
    };
    let chi_max = parse_opt_usize(take("sweep", "chi_max"))?.unwrap_or(128);
    let svd_cutoff = parse_opt_f64(take("sweep", "svd_cutoff"))?.unwrap_or(1e-12);
    let seed = parse_opt_usize(take("sweep", "seed"))?.unwrap_or(1) as u64;
    let workers = parse_opt_usize(take("sweep", "workers"))?.unwrap_or(1).max(1);

    let out_dir = take("output", "dir").map(|(_, v)| PathBuf::from(v)).unwrap_or_else(|| "out".into());
    let max_points = parse_opt_usize(take("output", "max_points"))?.unwrap_or(0);
    let verify_rows = match take("verify", "rows") {
        None => false,
        Some((line, v)) => match v.as_str() {
            "true" => true,
            "false" => false,
            other => return Err(SweepError::config_at(line, format!("expected true/false, got `{other}`"))),
        },
    };

    if let Some(((sec, key), (line, _))) = entries.into_iter().next() {
        return Err(SweepError::config_at(line, format!("unknown key {sec}.{key}")));
    }

    let cfg = SweepConfig {
        model,
        delta,
        boundary,
        channel,
        p_grid,
        sizes,
        backend,
        chi_max,
        svd_cutoff,
        seed,
        workers,
        out_dir,
        max_points,
        verify_rows,
    };

    // Criticality is a hard requirement for the XXZ sweeps.
    if let Err(e) = cfg.model_spec(cfg.sizes[0]).validate(true) {
        return Err(SweepError::config(e.to_string()));
    }
    if cfg.backend == BackendChoice::Mps && cfg.boundary == Boundary::Periodic {
        return Err(SweepError::config("the mps backend supports open boundaries only"));
    }
    Ok(cfg)
}

fn parse_opt_f64(entry: Option<(usize, String)>) -> Result<Option<f64>, SweepError> {
    match entry {
        None => Ok(None),
        Some((line, v)) => v
            .parse::<f64>()
            .map(Some)
            .map_err(|_| SweepError::config_at(line, format!("`{v}` is not a number"))),
    }
}

fn parse_opt_usize(entry: Option<(usize, String)>) -> Result<Option<usize>, SweepError> {
    match entry {
        None => Ok(None),
        Some((line, v)) => v
            .parse::<usize>()
            .map(Some)
            .map_err(|_| SweepError::config_at(line, format!("`{v}` is not a nonnegative integer"))),
    }
}

fn parse_f64_list(line: usize, v: &str) -> Result<Vec<f64>, SweepError> {
    v.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| SweepError::config_at(line, format!("`{s}` is not a number")))
        })
        .collect()
}

fn parse_usize_list(line: usize, v: &str) -> Result<Vec<usize>, SweepError> {
    v.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| SweepError::config_at(line, format!("`{s}` is not an integer")))
        })
        .collect()
}
