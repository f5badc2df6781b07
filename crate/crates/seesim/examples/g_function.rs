//! Fit the universal g-function e^{s₀} at maximal decoherence and compare
//! against the closed-form targets.
//!
//! Runs the dense pipeline at desk sizes L ∈ {6, 8, 10, 12}: TFIM and XXZ
//! under the ZZ channel, TFIM under the combined X+ZZ channel, with the
//! 1/L extrapolation for the TFIM.

use seesim::doubled::{apply_channel, see, vectorize, ChannelKind, ChannelSpec};
use seesim::model::{build_hamiltonian, ground_state, Boundary, Model, ModelSpec};
use seesim::scaling::{
    extrapolate_s0, fit_linear_s0, reference_g_value, BackendKind, SeeSample,
};

const SIZES: [usize; 4] = [6, 8, 10, 12];
const WINDOWS: [&[usize]; 3] = [&[6, 8, 10], &[8, 10, 12], &[6, 8, 10, 12]];

fn see_at_half(model: Model, delta: f64, channel: ChannelKind, l: usize) -> f64 {
    let spec = ModelSpec { model, l, delta, boundary: Boundary::Periodic };
    let h = build_hamiltonian(&spec).expect("desk sizes fit the dense limit");
    let gs = ground_state(&h, 7).expect("ground state converges");
    let chan = match channel {
        ChannelKind::Zz => ChannelSpec::zz(0.5),
        ChannelKind::X => ChannelSpec::x(0.5),
        ChannelKind::XplusZz => ChannelSpec::x_plus_zz(0.5),
    }
    .unwrap();
    let ds = apply_channel(vectorize(&gs).unwrap(), &chan, spec.boundary).unwrap();
    see(&ds).unwrap()
}

fn fits_for(model: Model, delta: f64, channel: ChannelKind) -> Vec<(Vec<usize>, f64, f64)> {
    let samples: Vec<SeeSample> = SIZES
        .iter()
        .map(|&l| SeeSample {
            l,
            p: 0.5,
            s_se: see_at_half(model, delta, channel, l),
            backend: BackendKind::Dense,
            truncation_weight: 0.0,
        })
        .collect();
    WINDOWS
        .iter()
        .map(|window| {
            let subset: Vec<SeeSample> =
                samples.iter().copied().filter(|s| window.contains(&s.l)).collect();
            let fit = fit_linear_s0(&subset).unwrap();
            (window.to_vec(), fit.s0, fit.g())
        })
        .collect()
}

fn main() {
    println!("TFIM under ZZ at p = 1/2 (target e^s0 = 1):");
    let tfim = fits_for(Model::Tfim, 0.0, ChannelKind::Zz);
    for (window, s0, g) in &tfim {
        println!("  window {window:?}: s0 = {s0:+.4}, e^s0 = {g:.4}");
    }
    let points: Vec<(f64, f64)> = tfim
        .iter()
        .map(|(w, s0, _)| (*w.iter().min().unwrap() as f64, *s0))
        .collect();
    let (slope, intercept) = extrapolate_s0(&points).unwrap();
    println!("  extrapolation vs 1/L_sd: slope = {slope:+.3}, intercept = {intercept:+.4}\n");

    for delta in [0.15, 0.45, 0.75] {
        let reference = reference_g_value(Model::Xxz, delta, ChannelKind::Zz).unwrap();
        println!("XXZ Δ = {delta} under ZZ at p = 1/2 (target e^s0 = {reference:.4}):");
        for (window, s0, g) in fits_for(Model::Xxz, delta, ChannelKind::Zz) {
            let dev = (g - reference) / reference;
            println!(
                "  window {window:?}: s0 = {s0:+.4}, e^s0 = {g:.4} ({:+.1}% vs target)",
                100.0 * dev
            );
        }
        println!();
    }

    println!("TFIM under X+ZZ at p = 1/2 (target e^s0 = 2, s0 = ln 2):");
    for (window, s0, g) in fits_for(Model::Tfim, 0.0, ChannelKind::XplusZz) {
        let dev = (s0 - 2.0f64.ln()) / 2.0f64.ln();
        println!(
            "  window {window:?}: s0 = {s0:+.4} ({:+.1}% vs ln 2), e^s0 = {g:.4}",
            100.0 * dev
        );
    }
}
