//! The maximal-decoherence identities, exactly.
//!
//! At p = 1/2 the ZZ channel is a projective link-parity measurement. The
//! decohered matrix expands over glassy GHZ states, and the entanglement
//! reduces to Rényi-2 Shannon entropies:
//!
//!   S_SE(1/2) = S_S(glassy GHZ basis) = S_S(Z basis) − log 2.

use seesim::doubled::{apply_zz_filter, see, vectorize};
use seesim::ghz::{
    ghz_projector_sum, maximal_decohere_oracle, parity_pair_sign, shannon_renyi2, unvectorize,
    ShannonBasis,
};
use seesim::model::{build_hamiltonian, ground_state, Boundary, Model, ModelSpec};

fn main() {
    for (model, delta) in [(Model::Tfim, 0.0), (Model::Xxz, 0.45)] {
        let spec = ModelSpec { model, l: 8, delta, boundary: Boundary::Periodic };
        let h = build_hamiltonian(&spec).unwrap();
        let gs = ground_state(&h, 7).unwrap();

        let beta_sum = maximal_decohere_oracle(&gs, spec.boundary).unwrap();
        let ghz_sum = ghz_projector_sum(&gs).unwrap();
        let filtered = apply_zz_filter(vectorize(&gs).unwrap(), 0.5, spec.boundary).unwrap();
        let channel = unvectorize(&filtered).unwrap();

        println!("{} L = 8:", model.as_str());
        println!("  trace of decohered matrix:        {:.15}", beta_sum.trace());
        println!(
            "  outcome sum vs filter (Frobenius): {:.3e}",
            beta_sum.frobenius_diff(&channel)
        );
        println!(
            "  GHZ projector sum vs filter:       {:.3e}",
            ghz_sum.frobenius_diff(&channel)
        );

        let s_se = see(&filtered).unwrap();
        let s_ghz = shannon_renyi2(&gs, ShannonBasis::GlassyGhz);
        let s_z = shannon_renyi2(&gs, ShannonBasis::ZProduct);
        println!("  S_SE(1/2)                = {s_se:.12}");
        println!("  S_S(glassy GHZ)          = {s_ghz:.12}");
        println!("  S_S(Z product) − log 2   = {:.12}", s_z - 2.0f64.ln());
        println!(
            "  parity-pair sign of the ground state: {:+}",
            parity_pair_sign(&gs).unwrap()
        );
        println!();
    }
}
