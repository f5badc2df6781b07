//! Cross-validation of the solvers against independently built oracles.

mod common;

use common::{dense_hamiltonian, ising_order_exponent_oracle, jacobi_eigenvalues, jw_tfim_energy};
use seesim::model::{build_hamiltonian, lowest_two, Boundary, ModelSpec};
use seesim::scaling::{chord_distance, fit_power_law};
use seesim::state::{expectation_pauli_string, Axis};

#[test]
fn lanczos_matches_dense_jacobi_spectra() {
    for spec in [
        ModelSpec::tfim(8, Boundary::Periodic),
        ModelSpec::tfim(8, Boundary::Open),
        ModelSpec::xxz(8, 0.45, Boundary::Periodic),
        ModelSpec::xxz(8, -0.3, Boundary::Open),
    ] {
        let h_dense = dense_hamiltonian(&spec);
        let eigs = jacobi_eigenvalues(&h_dense, 1 << spec.l);
        let h = build_hamiltonian(&spec).unwrap();
        let (e0, _) = lowest_two(&h, 11).unwrap();
        assert!(
            (e0 - eigs[0]).abs() < 1e-9,
            "{spec:?}: lanczos {e0} vs jacobi {}",
            eigs[0]
        );
    }
}

#[test]
fn tfim_energy_matches_free_fermions() {
    for l in [6usize, 10, 12] {
        let h = build_hamiltonian(&ModelSpec::tfim(l, Boundary::Periodic)).unwrap();
        let (e0, _) = lowest_two(&h, 3).unwrap();
        assert!((e0 - jw_tfim_energy(l)).abs() < 1e-8, "L={l}");
    }
}

#[test]
fn critical_order_correlator_decays_with_power_trend() {
    // ⟨Z₀Z_r⟩ of the critical TFIM at L = 12: decreasing in r, and the
    // chord-mapped log-log fit lands within 30% of the free-fermion
    // infinite-chain exponent (≈ 1/4).
    let l = 12usize;
    let h = build_hamiltonian(&ModelSpec::tfim(l, Boundary::Periodic)).unwrap();
    let gs = seesim::model::ground_state(&h, 7).unwrap();
    let mut profile = Vec::new();
    let mut last = f64::INFINITY;
    for r in 1..=l / 2 {
        let zz = expectation_pauli_string(&gs, &[(0, Axis::Z), (r, Axis::Z)]).unwrap();
        assert!(zz.abs() < last + 1e-12, "r={r}: not decreasing");
        last = zz.abs();
        profile.push((chord_distance(l, r), zz.abs()));
    }
    let eta = fit_power_law(&profile).unwrap();
    let eta_oracle = ising_order_exponent_oracle(8, 40);
    assert!(
        (eta - eta_oracle).abs() <= 0.3 * eta_oracle,
        "eta = {eta}, oracle = {eta_oracle}"
    );
}

#[test]
fn canonical_exponent_stable_under_decoherence() {
    // C^I is exactly invariant under the ZZ channel, so the fitted exponent
    // cannot move with p.
    use seesim::doubled::{apply_zz_filter, canonical_correlator, vectorize};
    let l = 12usize;
    let spec = ModelSpec::xxz(l, 0.0, Boundary::Periodic);
    let h = build_hamiltonian(&spec).unwrap();
    let gs = seesim::model::ground_state(&h, 7).unwrap();
    let base = vectorize(&gs).unwrap();
    let mut etas = Vec::new();
    for p in [0.1, 0.45] {
        let ds = apply_zz_filter(base.clone(), p, Boundary::Periodic).unwrap();
        let profile: Vec<(f64, f64)> = (1..=l / 2)
            .map(|r| {
                (chord_distance(l, r), canonical_correlator(&ds, 0, r).unwrap().abs())
            })
            .collect();
        etas.push(fit_power_law(&profile).unwrap());
    }
    assert!((etas[0] - etas[1]).abs() < 1e-9, "{etas:?}");
}

#[test]
fn toeplitz_oracle_sanity() {
    // Nearest-neighbor value is 2/π and the sequence decreases.
    let c1 = common::ising_order_correlator_infinite(1);
    assert!((c1 - 2.0 / std::f64::consts::PI).abs() < 1e-12);
    let mut last = f64::INFINITY;
    for n in 1..=20 {
        let c = common::ising_order_correlator_infinite(n);
        assert!(c > 0.0 && c < last);
        last = c;
    }
}
