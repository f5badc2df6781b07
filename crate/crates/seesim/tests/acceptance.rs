//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (run with `--nocapture` to see them). Desk scale means dense
//! L ≤ 12 for the doubled space and open-boundary MPS for the
//! cross-validated backend; large-system transition constants are echoed
//! as references, never asserted.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seesim::doubled::{
    apply_channel, apply_zz_filter, canonical_correlator, renyi2_correlator,
    renyi2_susceptibility, see, vectorize, ChannelKind, ChannelSpec,
};
use seesim::ghz::{
    ghz_projector_sum, maximal_decohere_oracle, parity_pair_sign, shannon_renyi2, unvectorize,
    ShannonBasis,
};
use seesim::model::{build_hamiltonian, ground_state, Boundary, Model, ModelSpec};
use seesim::scaling::{
    extrapolate_s0, fit_linear_s0, fss_collapse, reference_g_value, BackendKind, CollapseBounds,
    CollapseParams, CurvePoint, SeeSample, SizeCurve,
};
use seesim::state::PureState;
use seesim::sweep::{run_verify, VerifyOptions};
use std::io::Write as _;
use std::process::Command;

const SEED: u64 = 7;

fn solve(spec: &ModelSpec) -> PureState {
    let h = build_hamiltonian(spec).expect("desk sizes fit the dense limit");
    ground_state(&h, SEED).expect("ground state converges")
}

fn see_at(model: Model, delta: f64, channel: ChannelKind, l: usize, p: f64) -> f64 {
    let spec = ModelSpec { model, l, delta, boundary: Boundary::Periodic };
    let gs = solve(&spec);
    let chan = match channel {
        ChannelKind::Zz => ChannelSpec::zz(p),
        ChannelKind::X => ChannelSpec::x(p),
        ChannelKind::XplusZz => ChannelSpec::x_plus_zz(p),
    }
    .unwrap();
    let ds = apply_channel(vectorize(&gs).unwrap(), &chan, spec.boundary).unwrap();
    see(&ds).unwrap()
}

fn fit_window(
    model: Model,
    delta: f64,
    channel: ChannelKind,
    p: f64,
    window: &[usize],
    cache: &mut std::collections::BTreeMap<(usize, u64), f64>,
) -> seesim::scaling::FitResult {
    let samples: Vec<SeeSample> = window
        .iter()
        .map(|&l| {
            let key = (l, (p * 1e9) as u64);
            let s_se = *cache
                .entry(key)
                .or_insert_with(|| see_at(model, delta, channel, l, p));
            SeeSample { l, p, s_se, backend: BackendKind::Dense, truncation_weight: 0.0 }
        })
        .collect();
    fit_linear_s0(&samples).unwrap()
}

#[test]
fn criterion_1_exact_identity_suite() {
    let t0 = std::time::Instant::now();
    let mut worst_frobenius = 0.0f64;
    let mut worst_shannon = 0.0f64;
    for (model, delta) in [(Model::Tfim, 0.0), (Model::Xxz, 0.45)] {
        for l in [6usize, 8] {
            let spec = ModelSpec { model, l, delta, boundary: Boundary::Periodic };
            let gs = solve(&spec);
            let beta_sum = maximal_decohere_oracle(&gs, spec.boundary).unwrap();
            let ghz_sum = ghz_projector_sum(&gs).unwrap();
            let filtered = apply_zz_filter(vectorize(&gs).unwrap(), 0.5, spec.boundary).unwrap();
            let channel_matrix = unvectorize(&filtered).unwrap();
            worst_frobenius = worst_frobenius
                .max(beta_sum.frobenius_diff(&channel_matrix))
                .max(ghz_sum.frobenius_diff(&channel_matrix))
                .max(beta_sum.frobenius_diff(&ghz_sum));
            let s_se = see(&filtered).unwrap();
            worst_shannon = worst_shannon
                .max((s_se - shannon_renyi2(&gs, ShannonBasis::GlassyGhz)).abs())
                .max((s_se - (shannon_renyi2(&gs, ShannonBasis::ZProduct) - 2.0f64.ln())).abs());
        }
    }
    // Sign relations.
    let mut tfim_signs = Vec::new();
    for l in [6usize, 8] {
        tfim_signs.push(parity_pair_sign(&solve(&ModelSpec::tfim(l, Boundary::Periodic))).unwrap());
    }
    let mut xxz_consistent = true;
    for l in [6usize, 8] {
        let signs: Vec<i32> = [0.15, 0.45, 0.75]
            .iter()
            .map(|&d| parity_pair_sign(&solve(&ModelSpec::xxz(l, d, Boundary::Periodic))).unwrap())
            .collect();
        xxz_consistent &= signs.windows(2).all(|w| w[0] == w[1]);
    }
    let pass = worst_frobenius < 1e-12
        && worst_shannon < 1e-12
        && tfim_signs.iter().all(|&s| s == 1)
        && xxz_consistent;
    println!(
        "ACCEPTANCE 1 exact-identity-suite: {} — GHZ-expansion Frobenius {:.1e} < 1e-12, \
         SEE↔Shannon {:.1e} < 1e-12, TFIM signs {:?} (+1), XXZ sign Δ-independent: {}, {:.1?}",
        if pass { "PASS" } else { "FAIL" },
        worst_frobenius,
        worst_shannon,
        tfim_signs,
        xxz_consistent,
        t0.elapsed(),
    );
    assert!(pass);
}

#[test]
fn criterion_2_channel_invariants() {
    let t0 = std::time::Instant::now();
    let mut detail = String::new();
    let mut pass = true;
    for (model, delta) in [(Model::Tfim, 0.0), (Model::Xxz, 0.45)] {
        for l in [6usize, 12] {
            let spec = ModelSpec { model, l, delta, boundary: Boundary::Periodic };
            let gs = solve(&spec);
            let base = vectorize(&gs).unwrap();
            let mut c1_values = Vec::new();
            for k in 0..=10 {
                let p = 0.05 * k as f64;
                let ds = apply_zz_filter(base.clone(), p, spec.boundary).unwrap();
                if k == 0 {
                    let s0 = see(&ds).unwrap();
                    pass &= s0.abs() < 1e-10;
                    if s0.abs() >= 1e-10 {
                        detail.push_str(&format!(" S_SE(0)={s0:.2e}!"));
                    }
                }
                c1_values.push(canonical_correlator(&ds, 0, l / 2).unwrap());
                let purity = ds.purity();
                pass &= purity <= 1.0 + 1e-12 && purity >= 0.5f64.powi(l as i32) - 1e-12;
                pass &= (renyi2_correlator(&ds, 1, 1).unwrap() - 1.0).abs() < 1e-12;
                if k == 10 {
                    for r in 1..=l / 2 {
                        pass &= (renyi2_correlator(&ds, 0, r).unwrap() - 1.0).abs() < 1e-10;
                    }
                    pass &= (renyi2_susceptibility(&ds).unwrap() - 1.0).abs() < 1e-10;
                }
            }
            let spread = c1_values.iter().fold(f64::NEG_INFINITY, |a, &x| a.max(x))
                - c1_values.iter().fold(f64::INFINITY, |a, &x| a.min(x));
            pass &= spread < 1e-10;
            detail.push_str(&format!(
                " {}-L{l}: C^I spread {:.1e};",
                model.as_str(),
                spread
            ));
        }
    }
    println!(
        "ACCEPTANCE 2 channel-invariants: {} —{} grid 0..0.5 step 0.05, {:.1?}",
        if pass { "PASS" } else { "FAIL" },
        detail,
        t0.elapsed(),
    );
    assert!(pass);
}

#[test]
fn criterion_3_tfim_g_function() {
    let t0 = std::time::Instant::now();
    let mut cache = Default::default();
    let windows: [&[usize]; 3] = [&[6, 8, 10], &[8, 10, 12], &[6, 8, 10, 12]];
    let mut points = Vec::new();
    let mut detail = String::new();
    for window in windows {
        let fit = fit_window(Model::Tfim, 0.0, ChannelKind::Zz, 0.5, window, &mut cache);
        detail.push_str(&format!(" s0{window:?}={:+.4};", fit.s0));
        points.push((*window.iter().min().unwrap() as f64, fit.s0));
    }
    let (slope, intercept) = extrapolate_s0(&points).unwrap();
    let intercept_ok = intercept.abs() <= 0.15;
    let slope_ok = slope < 0.0;
    println!(
        "ACCEPTANCE 3 tfim-g-function: {} —{} extrapolation vs 1/L_sd: intercept {intercept:+.4} \
         (|.| <= 0.15: {}), slope {slope:+.3} (< 0 required: {}), {:.1?}",
        if intercept_ok && slope_ok { "PASS" } else { "FAIL" },
        detail,
        if intercept_ok { "ok" } else { "violated" },
        if slope_ok { "ok" } else { "violated" },
        t0.elapsed(),
    );
    if !slope_ok {
        println!(
            "  note: exact maximal-decoherence values give s0(L_sd) positive and decreasing \
             toward 0 (= the reference asymptote) at desk sizes, so the 1/L_sd slope is \
             positive; the negative-slope expectation extrapolates a large-size fit line \
             into a regime where exact data contradict it. The intercept criterion holds."
        );
    }
    assert!(intercept_ok, "intercept {intercept} outside ±0.15");
    assert!(slope_ok, "slope {slope} is not negative (see note above)");
}

#[test]
fn criterion_4_xxz_g_function() {
    let t0 = std::time::Instant::now();
    let mut pass = true;
    let mut detail = String::new();
    for delta in [0.15, 0.45, 0.75] {
        let reference = reference_g_value(Model::Xxz, delta, ChannelKind::Zz).unwrap();
        let mut cache = Default::default();
        let mut devs = Vec::new();
        for window in [&[6usize, 8, 10][..], &[8, 10, 12][..]] {
            let fit = fit_window(Model::Xxz, delta, ChannelKind::Zz, 0.5, window, &mut cache);
            let dev = (fit.g() - reference).abs() / reference;
            pass &= dev <= 0.30;
            devs.push(dev);
        }
        pass &= devs[1] <= devs[0] + 1e-12;
        detail.push_str(&format!(
            " Δ={delta}: ref {reference:.3}, dev {:.2}% -> {:.2}%;",
            100.0 * devs[0],
            100.0 * devs[1]
        ));
    }
    println!(
        "ACCEPTANCE 4 xxz-g-function: {} —{} (<= 30%, shrinking with window), {:.1?}",
        if pass { "PASS" } else { "FAIL" },
        detail,
        t0.elapsed(),
    );
    assert!(pass);
}

#[test]
fn criterion_5_qualitative_crossing() {
    let t0 = std::time::Instant::now();
    let mut cache = Default::default();
    let grid: Vec<f64> = (0..=8).map(|k| 0.30 + 0.025 * k as f64).collect();
    let mut diffs = Vec::new();
    for &p in &grid {
        let g1 = fit_window(Model::Xxz, 0.45, ChannelKind::Zz, p, &[6, 8, 10], &mut cache).g();
        let g2 = fit_window(Model::Xxz, 0.45, ChannelKind::Zz, p, &[8, 10, 12], &mut cache).g();
        diffs.push(g1 - g2);
    }
    let mut crossing = None;
    for k in 1..grid.len() {
        if diffs[k - 1].signum() != diffs[k].signum() {
            // Linear interpolation of the sign change.
            let frac = diffs[k - 1] / (diffs[k - 1] - diffs[k]);
            crossing = Some(grid[k - 1] + frac * (grid[k] - grid[k - 1]));
            break;
        }
    }
    let pass = crossing.map_or(false, |p| (0.30..=0.50).contains(&p));
    println!(
        "ACCEPTANCE 5 qualitative-crossing: {} — window curves {{6,8,10}} and {{8,10,12}} cross \
         at p = {} in [0.30, 0.50] (reference crossing ≈ 0.44); desk sizes cannot resolve the \
         precise p_c/ν/ζ, which stay reference-only, {:.1?}",
        if pass { "PASS" } else { "FAIL" },
        crossing.map_or("none".to_string(), |p| format!("{p:.3}")),
        t0.elapsed(),
    );
    assert!(pass);
}

#[test]
fn criterion_6_fss_collapse_selftest() {
    let t0 = std::time::Instant::now();
    // Planted master curve with saturation, 0.5% multiplicative noise.
    let (p_c, nu, zeta) = (0.44f64, 2.5f64, 0.0f64);
    let g_master = |x: f64| 1.2 + 0.8 * (2.0 * x).tanh();
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    let curves: Vec<SizeCurve> = [8usize, 12, 16, 24]
        .iter()
        .map(|&l| {
            let lf = l as f64;
            let points = (0..=30)
                .map(|k| {
                    let p = 0.2 + 0.01 * k as f64;
                    let x = (p - p_c) * lf.powf(1.0 / nu);
                    let clean = lf.powf(zeta / nu) * g_master(x);
                    let eps: f64 = rng.gen_range(-1.0..1.0);
                    CurvePoint { p, g: clean * (1.0 + 0.005 * eps), sigma: (0.005 * clean).max(1e-4) }
                })
                .collect();
            SizeCurve { l_sd: l, points }
        })
        .collect();
    let init = CollapseParams { p_c: 0.35, nu: 1.2, zeta: 0.2 };
    let bounds = CollapseBounds::for_curves(&curves);
    let result = fss_collapse(&curves, &init, &bounds, 16, SEED).unwrap();
    let dp = (result.p_c - p_c).abs() / p_c;
    let dn = (result.nu - nu).abs() / nu;
    let dz = result.zeta.abs();
    let pass = dp <= 0.02 && dn <= 0.10 && dz <= 0.05;
    println!(
        "ACCEPTANCE 6 fss-collapse-selftest: {} — recovered (p_c, ν, ζ) = ({:.4}, {:.3}, {:+.4}) \
         vs planted (0.44, 2.5, 0): |Δp_c| {:.2}% <= 2%, |Δν| {:.2}% <= 10%, |ζ| {:.3} <= 0.05, \
         16 restarts, {:.1?}",
        if pass { "PASS" } else { "FAIL" },
        result.p_c,
        result.nu,
        result.zeta,
        100.0 * dp,
        100.0 * dn,
        dz,
        t0.elapsed(),
    );
    assert!(pass);
}

#[test]
fn criterion_7_mps_dense_equivalence() {
    let t0 = std::time::Instant::now();
    // Pinned protocol (chi 64) on the TFIM.
    let tfim = run_verify(&VerifyOptions {
        model: Model::Tfim,
        delta: 0.0,
        sizes: vec![6, 8, 10],
        include_mps: true,
        chi_max: 64,
        seed: SEED,
        ..VerifyOptions::default()
    })
    .unwrap();
    // The c = 1 chain carries more Schmidt weight: the same protocol needs
    // chi 256 to reach 1e-6 at L = 10 (chi 64 lands near 1e-5).
    let xxz = run_verify(&VerifyOptions {
        model: Model::Xxz,
        delta: 0.45,
        sizes: vec![6, 8, 10],
        include_mps: true,
        chi_max: 256,
        seed: SEED,
        ..VerifyOptions::default()
    })
    .unwrap();
    let mps_checks = |r: &seesim::sweep::VerifyReport| {
        r.checks.iter().filter(|c| c.name.starts_with("mps_")).count()
    };
    let pass = tfim.passed && xxz.passed;
    println!(
        "ACCEPTANCE 7 mps-dense-equivalence: {} — TFIM chi 64: {}/{} checks pass; \
         XXZ Δ=0.45 chi 256: {}/{} checks pass (chi 64 reaches only ~1e-5 for the c = 1 \
         chain at L = 10; energies 1e-8, observables 1e-6 at p ∈ {{0.1, 0.3, 0.5}}), {:.1?}",
        if pass { "PASS" } else { "FAIL" },
        tfim.checks.iter().filter(|c| c.passed).count(),
        tfim.checks.len(),
        xxz.checks.iter().filter(|c| c.passed).count(),
        xxz.checks.len(),
        t0.elapsed(),
    );
    assert!(mps_checks(&tfim) >= 30 && mps_checks(&xxz) >= 30);
    for check in tfim.checks.iter().chain(&xxz.checks) {
        assert!(check.passed, "{} L={} value {:.3e}", check.name, check.l, check.value);
    }
}

#[test]
fn criterion_8_x_plus_zz_channel() {
    let t0 = std::time::Instant::now();
    let ln2 = 2.0f64.ln();
    let mut cache = Default::default();
    let mut pass = true;
    let mut detail = String::new();
    for window in [&[6usize, 8, 10][..], &[8, 10, 12][..]] {
        let fit = fit_window(Model::Tfim, 0.0, ChannelKind::XplusZz, 0.5, window, &mut cache);
        let dev = (fit.s0 - ln2).abs() / ln2;
        pass &= dev <= 0.15;
        detail.push_str(&format!(" s0{window:?}={:+.4} ({:.2}% off ln 2);", fit.s0, 100.0 * dev));
    }
    // Monotone growth of the g-function with p on the window {8,10,12}.
    let mut last = -f64::INFINITY;
    let mut monotone = true;
    for k in 0..=10 {
        let p = 0.05 * k as f64;
        let g = fit_window(Model::Tfim, 0.0, ChannelKind::XplusZz, p, &[8, 10, 12], &mut cache).g();
        monotone &= g >= last - 1e-9;
        last = g;
    }
    pass &= monotone;
    println!(
        "ACCEPTANCE 8 x-plus-zz-channel: {} —{} e^s0 monotone in p: {}, {:.1?}",
        if pass { "PASS" } else { "FAIL" },
        detail,
        monotone,
        t0.elapsed(),
    );
    assert!(pass);
}

#[test]
fn criterion_9_determinism_and_schema() {
    let t0 = std::time::Instant::now();
    let bin = env!("CARGO_BIN_EXE_seesim");
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path();

    let config = |out: &str, extra: &str| {
        format!(
            "[model]\nkind = tfim\nboundary = periodic\n\n\
             [channel]\nkind = zz\np_linspace = 0.0,0.5,6\n\n\
             [sweep]\nsizes = 4,6\nbackend = dense\nseed = 11\n\n\
             [output]\ndir = {out}\n{extra}"
        )
    };
    let write_config = |name: &str, content: &str| {
        let path = base.join(name);
        std::fs::File::create(&path)
            .and_then(|mut f| f.write_all(content.as_bytes()))
            .unwrap();
        path
    };

    // (a) Byte-identical reruns, also across worker counts.
    let cfg = write_config("sweep.cfg", &config(base.join("out1").to_str().unwrap(), ""));
    let run = |args: &[&str]| {
        Command::new(bin).args(args).output().expect("binary runs")
    };
    let out = run(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv1 = std::fs::read(base.join("out1/see_sweep.csv")).unwrap();
    let out = run(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        base.join("out2").to_str().unwrap(),
        "--workers",
        "3",
    ]);
    assert!(out.status.success());
    let csv2 = std::fs::read(base.join("out2/see_sweep.csv")).unwrap();
    let byte_identical = csv1 == csv2;

    // (b) Schema: exact header, row count, parsable floats, manifest fields.
    let text = String::from_utf8(csv1.clone()).unwrap();
    let mut lines = text.lines();
    let header_ok = lines.next()
        == Some(
            "model,delta,L,boundary,channel,p_zz,p_x,backend,chi_max,S_SE,chi2,c2_half,c1_half,trunc_weight,seed",
        );
    let rows: Vec<&str> = lines.collect();
    let schema_ok = rows.len() == 12
        && rows.iter().all(|r| {
            let f: Vec<&str> = r.split(',').collect();
            f.len() == 15 && f[9].parse::<f64>().is_ok() && f[10].parse::<f64>().is_ok()
        });
    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(base.join("out1/run_manifest.json")).unwrap(),
    )
    .unwrap();
    let manifest_ok = manifest["schema_version"] == 1
        && manifest["rows_ok"] == 12
        && manifest["points"].as_array().map(|a| a.len()) == Some(12);

    // (c) Crash-safe stop + resume: ok-rows match CSV rows exactly, and the
    // resumed run reproduces the uninterrupted bytes.
    let cfg3 = write_config(
        "sweep3.cfg",
        &config(base.join("out3").to_str().unwrap(), "max_points = 5\n"),
    );
    assert!(run(&["sweep", "--config", cfg3.to_str().unwrap()]).status.success());
    let partial = std::fs::read_to_string(base.join("out3/see_sweep.csv")).unwrap();
    let partial_manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(base.join("out3/run_manifest.json")).unwrap(),
    )
    .unwrap();
    let stop_consistent = partial.lines().count() == 6 // header + 5 rows
        && partial_manifest["completed_points"] == 5;
    let cfg3_full = write_config(
        "sweep3_full.cfg",
        &config(base.join("out3").to_str().unwrap(), ""),
    );
    assert!(run(&["sweep", "--config", cfg3_full.to_str().unwrap()]).status.success());
    let resumed = std::fs::read(base.join("out3/see_sweep.csv")).unwrap();
    let resume_ok = resumed == csv1;

    // (d) Exit codes: 2 config, 3 numerical, 4 verification, 0 success.
    let bad = write_config("bad.cfg", "[model]\nkind = heisenberg\n");
    let code2 = run(&["sweep", "--config", bad.to_str().unwrap()]).status.code() == Some(2);
    let cfg_fail = write_config(
        "fail.cfg",
        &config(base.join("out4").to_str().unwrap(), "").replace("sizes = 4,6", "sizes = 4,14"),
    );
    let code3 = run(&["sweep", "--config", cfg_fail.to_str().unwrap()]).status.code() == Some(3);
    let code4 = run(&[
        "verify",
        "--model",
        "tfim",
        "--sizes",
        "6",
        "--tolerance-scale",
        "1e-9",
    ])
    .status
    .code()
        == Some(4);
    let code0 = run(&["verify", "--model", "tfim", "--sizes", "6"]).status.code() == Some(0);

    let pass = byte_identical
        && header_ok
        && schema_ok
        && manifest_ok
        && stop_consistent
        && resume_ok
        && code2
        && code3
        && code4
        && code0;
    println!(
        "ACCEPTANCE 9 determinism-and-schema: {} — byte-identical reruns (incl. workers=3): {}, \
         header+rows: {}, manifest: {}, stopped-run bookkeeping: {}, resume reproduces bytes: {}, \
         exit codes 2/3/4/0: {}/{}/{}/{}, {:.1?}",
        if pass { "PASS" } else { "FAIL" },
        byte_identical,
        header_ok && schema_ok,
        manifest_ok,
        stop_consistent,
        resume_ok,
        code2,
        code3,
        code4,
        code0,
        t0.elapsed(),
    );
    assert!(pass);
}
