//! Vectorized density matrices on the doubled Hilbert space and the
//! decoherence filters acting on them.
//!
//! A density matrix ρ of an L-site chain maps to a state `|ρ⟩⟩` on a two-leg
//! ladder; for a pure input `|ρ₀⟩⟩ = |φ₀*⟩|φ₀⟩`, so the amplitude at the leg
//! pair `(c_u, c_ℓ)` is `φ₀(c_u)·φ₀(c_ℓ)` (real amplitudes). The squared
//! norm of `|ρ⟩⟩` is the purity `Tr[ρ²]`, and the system-environment
//! entanglement is `S_SE = −log ⟨⟨ρ|ρ⟩⟩`.
//!
//! The nearest-neighbor ZZ channel of strength `p` becomes a diagonal filter
//! in this basis. Writing `m(c_u, c_ℓ)` for the number of links whose ZZ
//! parity differs between the two legs, the per-link factors
//! `√(1−2p)·e^{±τ}` with `τ = tanh⁻¹[p/(1−p)]` collapse to the exact
//! per-element weight
//!
//! ```text
//! amp(c_u, c_ℓ) ← (1 − 2p)^m(c_u, c_ℓ) · amp(c_u, c_ℓ),
//! ```
//!
//! which stays numerically benign all the way to `p = 1/2`, where the filter
//! degenerates into the product of link-parity projectors (maximal
//! decoherence: a projective ZZ measurement without record). All scalar
//! prefactors are carried in log space by `log_prefactor`.
//!
//! The single-site X channel is the rung-local map
//! `(1−p)·amp(s) + p·amp(s with both legs flipped)` applied per site; it is
//! exact at `p = 1/2` as well, where it becomes the rung projector
//! `(1 + X_u X_ℓ)/2`.

use crate::model::{Boundary, DEFAULT_DENSE_LIMIT};
use crate::state::PureState;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ChannelKind {
    Zz,
    X,
    XplusZz,
}

impl ChannelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ChannelKind::Zz => "zz",
            ChannelKind::X => "x",
            ChannelKind::XplusZz => "x+zz",
        }
    }
}

/// Decoherence channel: kind plus probabilities in [0, 1/2].
///
/// The imaginary-time intervals `τ = tanh⁻¹[p/(1−p)]` diverge at `p = 1/2`;
/// that point is handled by projector semantics rather than by evaluating τ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    pub kind: ChannelKind,
    pub p_zz: f64,
    pub p_x: f64,
}

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("decoherence probability {0} outside [0, 1/2]")]
    BadProbability(f64),
    #[error("doubled space for L = {l} exceeds the dense limit {limit}; use the MPS backend")]
    AboveDenseLimit { l: usize, limit: usize },
    #[error("input state is not normalized (|1 − ‖φ‖| = {0:.3e})")]
    NotNormalized(f64),
    #[error("state norm vanished; over-truncated or fully projected")]
    ZeroNorm,
    #[error("site {0} out of range")]
    SiteOutOfRange(usize),
}

fn check_p(p: f64) -> Result<f64, ChannelError> {
    if !(0.0..=0.5).contains(&p) || !p.is_finite() {
        return Err(ChannelError::BadProbability(p));
    }
    Ok(p)
}

impl ChannelSpec {
    pub fn zz(p_zz: f64) -> Result<Self, ChannelError> {
        Ok(ChannelSpec { kind: ChannelKind::Zz, p_zz: check_p(p_zz)?, p_x: 0.0 })
    }

    pub fn x(p_x: f64) -> Result<Self, ChannelError> {
        Ok(ChannelSpec { kind: ChannelKind::X, p_zz: 0.0, p_x: check_p(p_x)? })
    }

    /// Combined channel with equal strengths `p_zz = p_x = p`.
    pub fn x_plus_zz(p: f64) -> Result<Self, ChannelError> {
        let p = check_p(p)?;
        Ok(ChannelSpec { kind: ChannelKind::XplusZz, p_zz: p, p_x: p })
    }

    /// τ_zz = tanh⁻¹[p/(1−p)]; infinite at maximal decoherence.
    pub fn tau_zz(&self) -> f64 {
        tau_of(self.p_zz)
    }

    pub fn tau_x(&self) -> f64 {
        tau_of(self.p_x)
    }
}

fn tau_of(p: f64) -> f64 {
    if p >= 0.5 {
        f64::INFINITY
    } else {
        (p / (1.0 - p)).atanh()
    }
}

/// The vectorized density matrix `|ρ⟩⟩` with a log-domain scalar prefactor.
///
/// Physical amplitudes are `exp(log_prefactor) · amps`; the filters in this
/// module keep `amps` O(1) and fold everything scalar into the log, so the
/// purity `exp(2·log_prefactor)·Σ amps²` never over- or underflows on the
/// way to maximal decoherence.
#[derive(Debug, Clone)]
pub struct DoubledState {
    l: usize,
    pub amps: Vec<f64>,
    pub log_prefactor: f64,
}

/// Pairwise summation of squares: rounding grows like log n instead of n,
/// which matters for the 4^L-term purity sums behind 1e-12 identities.
pub(crate) fn sum_sq(xs: &[f64]) -> f64 {
    if xs.len() <= 64 {
        return xs.iter().map(|x| x * x).sum();
    }
    let mid = xs.len() / 2;
    sum_sq(&xs[..mid]) + sum_sq(&xs[mid..])
}

impl DoubledState {
    pub fn l(&self) -> usize {
        self.l
    }

    /// Amplitude index for the leg pair `(c_u, c_ℓ)`.
    #[inline]
    pub fn index(&self, c_u: usize, c_l: usize) -> usize {
        (c_u << self.l) | c_l
    }

    pub fn norm_sq(&self) -> f64 {
        sum_sq(&self.amps)
    }

    /// Purity `Tr[ρ²] = ⟨⟨ρ|ρ⟩⟩` including the prefactor.
    pub fn purity(&self) -> f64 {
        (2.0 * self.log_prefactor).exp() * self.norm_sq()
    }
}

/// Vectorize a normalized pure state: `|ρ₀⟩⟩ = |φ₀*⟩|φ₀⟩`, purity 1.
pub fn vectorize(state: &PureState) -> Result<DoubledState, ChannelError> {
    vectorize_with_limit(state, DEFAULT_DENSE_LIMIT)
}

pub fn vectorize_with_limit(
    state: &PureState,
    dense_limit: usize,
) -> Result<DoubledState, ChannelError> {
    let l = state.l();
    if l > dense_limit {
        return Err(ChannelError::AboveDenseLimit { l, limit: dense_limit });
    }
    let dev = (state.norm() - 1.0).abs();
    if dev > 1e-10 {
        return Err(ChannelError::NotNormalized(dev));
    }
    let dim = 1usize << l;
    let mut amps = vec![0.0; dim * dim];
    for cu in 0..dim {
        let au = state.amps[cu];
        if au == 0.0 {
            continue;
        }
        let row = cu << l;
        for cl in 0..dim {
            amps[row | cl] = au * state.amps[cl];
        }
    }
    Ok(DoubledState { l, amps, log_prefactor: 0.0 })
}

/// Word whose set bits mark the links where the ZZ parity of the two legs
/// disagrees, for the leg difference `diff = c_u ^ c_ℓ`.
#[inline]
fn link_mismatch_word(l: usize, boundary: Boundary, diff: usize) -> usize {
    match boundary {
        Boundary::Periodic => {
            let mask = (1usize << l) - 1;
            let neighbor = ((diff >> 1) | ((diff & 1) << (l - 1))) & mask;
            diff ^ neighbor
        }
        Boundary::Open => (diff ^ (diff >> 1)) & ((1usize << (l - 1)) - 1),
    }
}

/// Apply the ZZ filter of strength `p_zz`: each amplitude is scaled by
/// `(1−2p)^m` with `m` the link-mismatch count. At `p = 1/2` amplitudes with
/// `m > 0` are projected away exactly.
pub fn apply_zz_filter(
    mut ds: DoubledState,
    p_zz: f64,
    boundary: Boundary,
) -> Result<DoubledState, ChannelError> {
    let p = check_p(p_zz)?;
    let l = ds.l;
    // (1−2p)^m for m = 0..L by repeated multiplication: exact projector
    // weights [1, 0, 0, …] at p = 1/2.
    let base = 1.0 - 2.0 * p;
    let mut weight = vec![1.0f64; l + 1];
    for m in 1..=l {
        weight[m] = weight[m - 1] * base;
    }
    let mask = (1usize << l) - 1;
    for cu in 0..=mask {
        let row = cu << l;
        for cl in 0..=mask {
            let m = link_mismatch_word(l, boundary, cu ^ cl).count_ones() as usize;
            if m > 0 {
                ds.amps[row | cl] *= weight[m];
            }
        }
    }
    Ok(ds)
}

/// Apply the rung-local X filter `Π_j [(1−p) I + p X_{j,u} X_{j,ℓ}]`.
pub fn apply_x_filter(mut ds: DoubledState, p_x: f64) -> Result<DoubledState, ChannelError> {
    let p = check_p(p_x)?;
    if p == 0.0 {
        return Ok(ds);
    }
    let l = ds.l;
    let q = 1.0 - p;
    for j in 0..l {
        let flip = (1usize << (l + j)) | (1usize << j);
        let hi = 1usize << (l + j);
        for s in 0..ds.amps.len() {
            if s & hi != 0 {
                continue;
            }
            let t = s ^ flip;
            let a = ds.amps[s];
            let b = ds.amps[t];
            ds.amps[s] = q * a + p * b;
            ds.amps[t] = q * b + p * a;
        }
    }
    Ok(ds)
}

/// Apply a full channel; the combined X+ZZ channel applies the X layer first
/// and the ZZ layer second (the two commute exactly in the doubled space).
pub fn apply_channel(
    ds: DoubledState,
    spec: &ChannelSpec,
    boundary: Boundary,
) -> Result<DoubledState, ChannelError> {
    match spec.kind {
        ChannelKind::Zz => apply_zz_filter(ds, spec.p_zz, boundary),
        ChannelKind::X => apply_x_filter(ds, spec.p_x),
        ChannelKind::XplusZz => {
            let ds = apply_x_filter(ds, spec.p_x)?;
            apply_zz_filter(ds, spec.p_zz, boundary)
        }
    }
}

/// System-environment entanglement `S_SE = −log ⟨⟨ρ|ρ⟩⟩`.
pub fn see(ds: &DoubledState) -> Result<f64, ChannelError> {
    let n2 = ds.norm_sq();
    if n2 <= 0.0 {
        return Err(ChannelError::ZeroNorm);
    }
    Ok(-(2.0 * ds.log_prefactor + n2.ln()))
}

fn check_site(ds: &DoubledState, i: usize) -> Result<(), ChannelError> {
    if i >= ds.l {
        return Err(ChannelError::SiteOutOfRange(i));
    }
    Ok(())
}

/// Rényi-2 correlator
/// `C^II(i,j) = ⟨⟨ρ|Z_{i,u}Z_{j,u}Z_{i,ℓ}Z_{j,ℓ}|ρ⟩⟩ / ⟨⟨ρ|ρ⟩⟩`;
/// prefactors cancel in the ratio.
pub fn renyi2_correlator(ds: &DoubledState, i: usize, j: usize) -> Result<f64, ChannelError> {
    check_site(ds, i)?;
    check_site(ds, j)?;
    let l = ds.l;
    // XOR so that i = j collapses to the identity (Z² = 1).
    let pair_mask = (1usize << i) ^ (1usize << j);
    let full_mask = pair_mask | (pair_mask << l);
    let mut num = 0.0;
    let mut den = 0.0;
    for (s, &a) in ds.amps.iter().enumerate() {
        let a2 = a * a;
        den += a2;
        if ((s & full_mask).count_ones() & 1) == 1 {
            num -= a2;
        } else {
            num += a2;
        }
    }
    if den <= 0.0 {
        return Err(ChannelError::ZeroNorm);
    }
    Ok(num / den)
}

/// Reduced Rényi-2 susceptibility `χ^II = (2/L) Σ_{r=1}^{L/2} C^II(0, r)`.
pub fn renyi2_susceptibility(ds: &DoubledState) -> Result<f64, ChannelError> {
    let l = ds.l;
    let mut acc = 0.0;
    for r in 1..=l / 2 {
        acc += renyi2_correlator(ds, 0, r)?;
    }
    Ok(2.0 * acc / l as f64)
}

/// Canonical correlator `C^I(i,j) = Tr[ρ Z_i Z_j]`, evaluated as
/// `⟨⟨1|Z_{i,u}Z_{j,u}|ρ⟩⟩ / ⟨⟨1|ρ⟩⟩`. The normalization of `|1⟩⟩` cancels,
/// so the sums run over the diagonal leg pairs only.
pub fn canonical_correlator(ds: &DoubledState, i: usize, j: usize) -> Result<f64, ChannelError> {
    check_site(ds, i)?;
    check_site(ds, j)?;
    let l = ds.l;
    let dim = 1usize << l;
    let pair_mask = (1usize << i) ^ (1usize << j);
    let mut num = 0.0;
    let mut den = 0.0;
    for c in 0..dim {
        let a = ds.amps[(c << l) | c];
        den += a;
        if ((c & pair_mask).count_ones() & 1) == 1 {
            num -= a;
        } else {
            num += a;
        }
    }
    if den.abs() < 1e-300 {
        return Err(ChannelError::ZeroNorm);
    }
    Ok(num / den)
}

/// Observables of one decohered state, as reported by sweeps.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ObservableReport {
    pub p_zz: f64,
    pub p_x: f64,
    pub s_se: f64,
    /// χ^II_ZZ with reference site 0.
    pub chi2: f64,
    /// (r, C^II(0, r)) for r = 1..L/2.
    pub c2_profile: Vec<(usize, f64)>,
    /// (r, C^I(0, r)) for r = 1..L/2.
    pub c1_profile: Vec<(usize, f64)>,
}

pub fn observable_report(
    ds: &DoubledState,
    spec: &ChannelSpec,
) -> Result<ObservableReport, ChannelError> {
    let l = ds.l;
    let mut c2_profile = Vec::with_capacity(l / 2);
    let mut c1_profile = Vec::with_capacity(l / 2);
    for r in 1..=l / 2 {
        c2_profile.push((r, renyi2_correlator(ds, 0, r)?));
        c1_profile.push((r, canonical_correlator(ds, 0, r)?));
    }
    let chi2 = 2.0 * c2_profile.iter().map(|(_, v)| v).sum::<f64>() / l as f64;
    Ok(ObservableReport { p_zz: spec.p_zz, p_x: spec.p_x, s_se: see(ds)?, chi2, c2_profile, c1_profile })
}
