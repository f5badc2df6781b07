//! Decoherence of critical spin chains, studied through the doubled Hilbert
//! space.
//!
//! The crate prepares critical ground states of the transverse-field Ising
//! (TFIM) and XXZ chains, vectorizes the density matrix onto a two-leg spin
//! ladder, applies ZZ- and X-type decoherence channels as non-unitary filter
//! operators, and measures
//!
//! * the system-environment entanglement `S_SE = −log Tr[ρ²]`,
//! * the Rényi-2 correlator `C^II` and its susceptibility `χ^II`,
//! * the canonical correlator `C^I = Tr[ρ Z_i Z_j]`,
//!
//! together with the exact maximal-decoherence identities that tie `S_SE` at
//! `p = 1/2` to Rényi-2 Shannon entropies in the Z-product and glassy-GHZ
//! bases.
//!
//! Two backends cover desk scale: exact dense vectors on the `4^L`
//! doubled space up to the dense limit, and an open-boundary matrix-product
//! ladder with truncated gate application beyond it ([`mps`]). The
//! [`scaling`] layer extracts the universal g-function `e^{s₀}` from linear
//! fits of `S_SE = αL − s₀`, extrapolates it in `1/L`, and performs
//! finite-size-scaling collapse. [`sweep`] drives reproducible parameter
//! sweeps with CSV/JSON outputs; the `seesim` binary exposes it all as
//! `sweep`, `fit`, `collapse`, `verify` and `plot` subcommands.

pub mod doubled;
pub mod ghz;
pub mod lanczos;
pub mod model;
pub mod mps;
pub mod scaling;
pub mod state;
pub mod sweep;

pub use doubled::{
    apply_channel, apply_x_filter, apply_zz_filter, canonical_correlator, observable_report,
    renyi2_correlator, renyi2_susceptibility, see, vectorize, ChannelKind, ChannelSpec,
    DoubledState, ObservableReport,
};
pub use ghz::{
    ghz_projector_sum, maximal_decohere_oracle, parity_pair_sign, shannon_renyi2, DenseRho,
    ShannonBasis,
};
pub use model::{
    build_hamiltonian, ground_state, lowest_two, Boundary, Model, ModelSpec, SparseOperator,
};
pub use state::{apply_parity, expectation_pauli_string, Axis, PureState};
