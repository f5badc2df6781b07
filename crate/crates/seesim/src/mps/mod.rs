//! Matrix-product backend for chains beyond the dense limit.
//!
//! The pipeline mirrors the dense engine: a two-site variational sweep
//! ([`chain::ground_state_mps`]) prepares the open-boundary critical chain;
//! [`ladder::doubled_mps`] forms the rung-wise product `|φ⟩⊗|φ⟩` on a
//! two-leg ladder with physical dimension 4, truncating the squared bond by
//! Schmidt-product weight; [`ladder::apply_filter_gates_mps`] applies the
//! decoherence filters as two-rung diagonal gates (ZZ) and single-rung maps
//! (X) with SVD truncation, accumulating per-gate rescalings in log space;
//! [`ladder::see_mps`] reads off the entanglement from the contracted norm.
//!
//! Only open boundaries are supported here; every observable is
//! cross-validated against the dense engine at small sizes.

pub mod chain;
pub mod ladder;
pub mod svd;

pub use chain::{ground_state_mps, ChainMps, DmrgOptions, DmrgResult};
pub use ladder::{
    apply_filter_gates_mps, canonical_correlator_mps, doubled_mps, mps_expectation,
    renyi2_correlator_mps, renyi2_susceptibility_mps, rung_operator, see_mps, MpsLadder,
    TruncationPolicy,
};
pub use svd::{jacobi_svd, Svd};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MpsError {
    #[error("MPS ground-state solve supports open boundaries only")]
    PeriodicUnsupported,
    #[error("no convergence after {sweeps} sweeps (last energy change {delta:.3e})")]
    NotConverged { sweeps: usize, delta: f64 },
    #[error("local eigensolve failed: {0}")]
    LocalSolve(#[from] crate::lanczos::LanczosError),
    #[error("ladder bond {bond} would exceed the hard cap {cap}; lower the chain bond dimension")]
    BondCapExceeded { bond: usize, cap: usize },
    #[error("invalid truncation policy: {0}")]
    BadPolicy(String),
    #[error(
        "gate at link {link} discarded weight {weight:.3e} above the abort threshold {threshold:.3e}"
    )]
    TruncationAbort { link: usize, weight: f64, threshold: f64 },
    #[error("ladder norm vanished; over-truncated or fully projected")]
    ZeroNorm,
    #[error("site {0} out of range")]
    SiteOutOfRange(usize),
    #[error("model error: {0}")]
    Model(#[from] crate::model::ModelError),
}

/// Dense rank-3 tensor with index order (left bond, physical, right bond).
#[derive(Debug, Clone)]
pub struct Tensor3 {
    pub dl: usize,
    pub d: usize,
    pub dr: usize,
    pub data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(dl: usize, d: usize, dr: usize) -> Self {
        Tensor3 { dl, d, dr, data: vec![0.0; dl * d * dr] }
    }

    #[inline]
    pub fn at(&self, a: usize, s: usize, b: usize) -> f64 {
        self.data[(a * self.d + s) * self.dr + b]
    }

    #[inline]
    pub fn at_mut(&mut self, a: usize, s: usize, b: usize) -> &mut f64 {
        &mut self.data[(a * self.d + s) * self.dr + b]
    }
}
