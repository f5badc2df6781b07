//! The matrix-product backend against the dense engine, then past the
//! dense limit.
//!
//! Open boundaries throughout: the MPS path exists to extend system size,
//! cross-validated where the dense engine can follow.

use seesim::doubled::{apply_zz_filter, renyi2_susceptibility, see, vectorize, ChannelSpec};
use seesim::model::{build_hamiltonian, ground_state, Boundary, ModelSpec};
use seesim::mps::{
    apply_filter_gates_mps, doubled_mps, ground_state_mps, renyi2_susceptibility_mps, see_mps,
    DmrgOptions, TruncationPolicy,
};

fn main() {
    let policy = TruncationPolicy { chi_max: 64, svd_cutoff: 1e-12, ..Default::default() };

    println!("TFIM open, L = 10, chi_max = 64: MPS vs dense");
    let spec = ModelSpec::tfim(10, Boundary::Open);
    let dmrg = DmrgOptions { chi_max: 64, seed: 7, ..DmrgOptions::default() };
    let result = ground_state_mps(&spec, &dmrg).unwrap();
    let h = build_hamiltonian(&spec).unwrap();
    let gs = ground_state(&h, 7).unwrap();
    println!(
        "  energy: {:+.12} vs {:+.12} (diff {:.1e}), {} sweeps, bonds {:?}",
        result.energy,
        gs.energy.unwrap(),
        (result.energy - gs.energy.unwrap()).abs(),
        result.sweeps,
        result.mps.bond_dims(),
    );
    let base = vectorize(&gs).unwrap();
    for p in [0.1, 0.3, 0.5] {
        let ladder = doubled_mps(&result.mps, &policy).unwrap();
        let ladder =
            apply_filter_gates_mps(ladder, &ChannelSpec::zz(p).unwrap(), &policy).unwrap();
        let dense = apply_zz_filter(base.clone(), p, Boundary::Open).unwrap();
        println!(
            "  p = {p}: S_SE {:.9} vs {:.9}, chi^II {:.9} vs {:.9}, trunc weight {:.1e}",
            see_mps(&ladder).unwrap(),
            see(&dense).unwrap(),
            renyi2_susceptibility_mps(&ladder).unwrap(),
            renyi2_susceptibility(&dense).unwrap(),
            ladder.truncation_weight,
        );
    }

    println!("\nTFIM open, L = 16 (past the dense doubled-space limit), chi_max = 64:");
    let spec = ModelSpec::tfim(16, Boundary::Open);
    let result = ground_state_mps(&spec, &dmrg).unwrap();
    println!("  energy {:+.10}, {} sweeps", result.energy, result.sweeps);
    for p in [0.1, 0.3, 0.5] {
        let ladder = doubled_mps(&result.mps, &policy).unwrap();
        let ladder =
            apply_filter_gates_mps(ladder, &ChannelSpec::zz(p).unwrap(), &policy).unwrap();
        println!(
            "  p = {p}: S_SE = {:.8}, chi^II = {:.6}, trunc weight {:.1e}",
            see_mps(&ladder).unwrap(),
            renyi2_susceptibility_mps(&ladder).unwrap(),
            ladder.truncation_weight,
        );
    }
}
