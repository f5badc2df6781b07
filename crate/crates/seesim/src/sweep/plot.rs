//! The `plot` command: self-contained matplotlib scripts plus tidy data
//! bundles rendered from existing result files. No process is spawned;
//! regenerated outputs are byte-identical for identical inputs.

use super::fit_cmd::read_fits_csv;
use super::runner::read_sweep_csv;
use super::{fmt_f64, SweepError};
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

const PLOT_CHI: &str = r#"#!/usr/bin/env python3
"""Susceptibility of the Renyi-2 correlator versus decoherence strength."""
import csv
from collections import defaultdict
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

curves = defaultdict(list)
with open("data_chi.csv") as fh:
    for row in csv.DictReader(fh):
        curves[int(row["L"])].append((float(row["p"]), float(row["chi2"])))

fig, ax = plt.subplots(figsize=(4.2, 3.2))
for l in sorted(curves):
    pts = sorted(curves[l])
    ax.plot([p for p, _ in pts], [c for _, c in pts], "o-", ms=3, label=f"L={l}")
ax.set_xlabel(r"$p_{zz}$")
ax.set_ylabel(r"$\chi^{II}_{ZZ}$")
ax.set_ylim(-0.05, 1.05)
ax.legend(fontsize=8)
fig.tight_layout()
fig.savefig("chi_vs_p.png", dpi=160)
print("wrote chi_vs_p.png")
"#;

const PLOT_G: &str = r#"#!/usr/bin/env python3
"""g-function e^{s0} versus decoherence strength per size window."""
import csv
from collections import defaultdict
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

curves = defaultdict(list)
with open("data_g.csv") as fh:
    for row in csv.DictReader(fh):
        curves[row["window"]].append((float(row["p"]), float(row["g"])))

fig, ax = plt.subplots(figsize=(4.2, 3.2))
for window in sorted(curves, key=lambda w: [int(x) for x in w.split(":")]):
    pts = sorted(curves[window])
    ax.plot([p for p, _ in pts], [g for _, g in pts], "o-", ms=3, label=window)
ax.set_xlabel(r"$p$")
ax.set_ylabel(r"$e^{s_0}$")
ax.legend(fontsize=8, title="window")
fig.tight_layout()
fig.savefig("g_vs_p.png", dpi=160)
print("wrote g_vs_p.png")
"#;

const PLOT_COLLAPSE: &str = r#"#!/usr/bin/env python3
"""Master-curve collapse of the scaled g-function data."""
import csv
from collections import defaultdict
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

curves = defaultdict(list)
with open("data_collapse.csv") as fh:
    for row in csv.DictReader(fh):
        curves[int(row["l_sd"])].append((float(row["x"]), float(row["y"])))

fig, ax = plt.subplots(figsize=(4.2, 3.2))
for l in sorted(curves):
    pts = sorted(curves[l])
    ax.plot([x for x, _ in pts], [y for _, y in pts], "o", ms=3, label=f"$L_{{sd}}={l}$")
ax.set_xlabel(r"$(p - p_c)\,L_{sd}^{1/\nu}$")
ax.set_ylabel(r"$e^{s_0}\,L_{sd}^{-\zeta/\nu}$")
ax.legend(fontsize=8)
fig.tight_layout()
fig.savefig("collapse.png", dpi=160)
print("wrote collapse.png")
"#;

fn write_file(path: &Path, content: &str) -> Result<(), SweepError> {
    let mut f = File::create(path).map_err(|e| SweepError::io(path, e))?;
    f.write_all(content.as_bytes()).map_err(|e| SweepError::io(path, e))
}

/// Emit plot scripts and tidy data into `<results>/plots/`.
///
/// Requires `see_sweep.csv`; uses `fits.csv` and `collapse_report.json`
/// when present.
pub fn run_plot(results_dir: &Path) -> Result<Vec<PathBuf>, SweepError> {
    let sweep_csv = results_dir.join("see_sweep.csv");
    if !sweep_csv.exists() {
        return Err(SweepError::Numerical(format!(
            "missing {}; expected results of `seesim sweep` (see_sweep.csv), optionally \
             `seesim fit` (fits.csv) and `seesim collapse` (collapse_report.json)",
            sweep_csv.display()
        )));
    }
    let plots = results_dir.join("plots");
    std::fs::create_dir_all(&plots).map_err(|e| SweepError::io(&plots, e))?;
    let mut written = Vec::new();

    // χ^II data + script.
    let rows = read_sweep_csv(&sweep_csv)?;
    let mut chi = String::from("model,delta,channel,L,p,chi2\n");
    for r in &rows {
        chi.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.model.as_str(),
            fmt_f64(r.delta),
            r.channel.as_str(),
            r.l,
            fmt_f64(r.p_zz.max(r.p_x)),
            fmt_f64(r.chi2)
        ));
    }
    let p = plots.join("data_chi.csv");
    write_file(&p, &chi)?;
    written.push(p);
    let p = plots.join("plot_chi.py");
    write_file(&p, PLOT_CHI)?;
    written.push(p);

    // g-function data + script.
    let fits_csv = results_dir.join("fits.csv");
    if fits_csv.exists() {
        let fits = read_fits_csv(&fits_csv)?;
        let mut data = String::from("window,l_sd,p,g\n");
        for (_, _, _, p, window, _, s0, _) in &fits {
            let label: Vec<String> = window.iter().map(|l| l.to_string()).collect();
            data.push_str(&format!(
                "{},{},{},{}\n",
                label.join(":"),
                window.iter().min().unwrap(),
                fmt_f64(*p),
                fmt_f64(s0.exp())
            ));
        }
        let p = plots.join("data_g.csv");
        write_file(&p, &data)?;
        written.push(p);
        let p = plots.join("plot_g.py");
        write_file(&p, PLOT_G)?;
        written.push(p);

        // Collapse scatter when the report exists.
        let report_path = results_dir.join("collapse_report.json");
        if report_path.exists() {
            let text = std::fs::read_to_string(&report_path)
                .map_err(|e| SweepError::io(&report_path, e))?;
            let report: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| SweepError::Numerical(format!("bad collapse report: {e}")))?;
            let result = report
                .get("result")
                .ok_or_else(|| SweepError::Numerical("collapse report lacks `result`".into()))?;
            let p_c = result["p_c"].as_f64().unwrap_or(f64::NAN);
            let nu = result["nu"].as_f64().unwrap_or(f64::NAN);
            let zeta = result["zeta"].as_f64().unwrap_or(0.0);
            let mut data = String::from("l_sd,x,y\n");
            for (_, _, _, p, window, _, s0, _) in &fits {
                let l_sd = *window.iter().min().unwrap() as f64;
                let x = (p - p_c) * l_sd.powf(1.0 / nu);
                let y = s0.exp() * l_sd.powf(-zeta / nu);
                data.push_str(&format!(
                    "{},{},{}\n",
                    l_sd as usize,
                    fmt_f64(x),
                    fmt_f64(y)
                ));
            }
            let p = plots.join("data_collapse.csv");
            write_file(&p, &data)?;
            written.push(p);
            let p = plots.join("plot_collapse.py");
            write_file(&p, PLOT_COLLAPSE)?;
            written.push(p);
        }
    }

    Ok(written)
}
