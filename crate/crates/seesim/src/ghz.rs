//! Exact maximal-decoherence oracles on small chains.
//!
//! At `p = 1/2` the ZZ channel is a projective link-parity measurement
//! without record. Three independent routes to the decohered matrix are
//! provided for cross-validation:
//!
//! 1. the filter path ([`crate::apply_zz_filter`] at `p = 1/2`, unvectorized
//!    back to a matrix),
//! 2. the outcome-resolved sum `Σ_β P^β ρ P^β` over the `2^{L−1}` admissible
//!    link-parity patterns β ([`maximal_decohere_oracle`]),
//! 3. the glassy-GHZ projector sum `Σ_{g,α} P^{(g,α)} ρ P^{(g,α)}` over the
//!    basis `|g^±⟩ = (|c⟩ ± |c̄⟩)/√2` ([`ghz_projector_sum`]).
//!
//! The module also evaluates Rényi-2 Shannon entropies in the Z-product and
//! glassy-GHZ bases and measures the parity-pair sign `s` with
//! `φ(c̄) = s·φ(c)` of a `U_X` eigenstate; together these express the
//! maximal-decoherence identities `S_SE = S_S(glassy GHZ)` and
//! `S_SE = S_S(Z) − log 2`.

use crate::doubled::DoubledState;
use crate::model::Boundary;
use crate::state::PureState;
use thiserror::Error;

/// Dense `2^L × 2^L` matrices get large quickly; the oracles stop here.
pub const ORACLE_SITE_LIMIT: usize = 10;

#[derive(Debug, Error)]
pub enum GhzError {
    #[error("L = {0} exceeds the dense-matrix oracle limit {ORACLE_SITE_LIMIT}")]
    AboveOracleLimit(usize),
    #[error("state is not a parity eigenstate (max deviation {0:.3e})")]
    NotParityEigenstate(f64),
    #[error("state has vanishing amplitudes")]
    ZeroState,
}

/// Dense real density matrix, row-major.
#[derive(Debug, Clone)]
pub struct DenseRho {
    pub l: usize,
    pub data: Vec<f64>,
}

impl DenseRho {
    pub fn zeros(l: usize) -> Self {
        let dim = 1usize << l;
        DenseRho { l, data: vec![0.0; dim * dim] }
    }

    pub fn dim(&self) -> usize {
        1usize << self.l
    }

    pub fn trace(&self) -> f64 {
        let dim = self.dim();
        (0..dim).map(|i| self.data[i * dim + i]).sum()
    }

    /// Tr[ρ²] for a symmetric matrix.
    pub fn purity(&self) -> f64 {
        self.data.iter().map(|a| a * a).sum()
    }

    pub fn frobenius_diff(&self, other: &DenseRho) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

fn check_limit(l: usize) -> Result<(), GhzError> {
    if l > ORACLE_SITE_LIMIT {
        return Err(GhzError::AboveOracleLimit(l));
    }
    Ok(())
}

/// ρ = |φ⟩⟨φ| as a dense matrix.
pub fn density_matrix(state: &PureState) -> Result<DenseRho, GhzError> {
    check_limit(state.l())?;
    let dim = 1usize << state.l();
    let mut rho = DenseRho::zeros(state.l());
    for a in 0..dim {
        for b in 0..dim {
            rho.data[a * dim + b] = state.amps[a] * state.amps[b];
        }
    }
    Ok(rho)
}

/// Set bits mark links whose ZZ parity is −1 for configuration `c`.
fn link_word(l: usize, boundary: Boundary, c: usize) -> usize {
    match boundary {
        Boundary::Periodic => {
            let mask = (1usize << l) - 1;
            c ^ (((c >> 1) | ((c & 1) << (l - 1))) & mask)
        }
        Boundary::Open => (c ^ (c >> 1)) & ((1usize << (l - 1)) - 1),
    }
}

/// Maximal ZZ decoherence as the explicit outcome sum `Σ_β P^β ρ₀ P^β`.
///
/// Each β is a pattern of link parities; under periodic boundaries the wrap
/// outcome is fixed by the others (`Π_j Z_jZ_{j+1} = 1`), so both boundary
/// kinds sum over exactly `2^{L−1}` patterns. The channel is
/// trace-preserving.
pub fn maximal_decohere_oracle(
    state: &PureState,
    boundary: Boundary,
) -> Result<DenseRho, GhzError> {
    let l = state.l();
    check_limit(l)?;
    let rho = density_matrix(state)?;
    let dim = 1usize << l;
    let mut out = DenseRho::zeros(l);
    let free_links = l - 1;
    for beta_free in 0..1usize << free_links {
        let beta_word = match boundary {
            Boundary::Periodic => {
                // Wrap parity fixed so the total product of outcomes is +1.
                let wrap = (beta_free.count_ones() & 1) as usize;
                beta_free | (wrap << (l - 1))
            }
            Boundary::Open => beta_free,
        };
        let members: Vec<usize> =
            (0..dim).filter(|&c| link_word(l, boundary, c) == beta_word).collect();
        for &a in &members {
            for &b in &members {
                out.data[a * dim + b] += rho.data[a * dim + b];
            }
        }
    }
    Ok(out)
}

/// Glassy-GHZ expansion `Σ_{g,α=±} |g^α⟩⟨g^α| ρ |g^α⟩⟨g^α|` over the
/// `2^{L−1}` parity pairs `(c, c̄)` and both flip parities α.
pub fn ghz_projector_sum(state: &PureState) -> Result<DenseRho, GhzError> {
    let l = state.l();
    check_limit(l)?;
    let rho = density_matrix(state)?;
    let dim = 1usize << l;
    let mask = dim - 1;
    let mut out = DenseRho::zeros(l);
    for c in 0..dim / 2 {
        let cb = c ^ mask;
        let rcc = rho.data[c * dim + c];
        let rbb = rho.data[cb * dim + cb];
        let rcb = rho.data[c * dim + cb];
        let rbc = rho.data[cb * dim + c];
        for alpha in [1.0f64, -1.0] {
            let w = 0.5 * (rcc + rbb + alpha * (rcb + rbc));
            out.data[c * dim + c] += 0.5 * w;
            out.data[cb * dim + cb] += 0.5 * w;
            out.data[c * dim + cb] += 0.5 * alpha * w;
            out.data[cb * dim + c] += 0.5 * alpha * w;
        }
    }
    Ok(out)
}

/// Recover the density matrix from a vectorized state:
/// `ρ[a][b] = e^{log_prefactor} · amps(c_u = b, c_ℓ = a)`.
pub fn unvectorize(ds: &DoubledState) -> Result<DenseRho, GhzError> {
    let l = ds.l();
    check_limit(l)?;
    let dim = 1usize << l;
    let scale = ds.log_prefactor.exp();
    let mut out = DenseRho::zeros(l);
    for b in 0..dim {
        for a in 0..dim {
            out.data[a * dim + b] = scale * ds.amps[(b << l) | a];
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShannonBasis {
    ZProduct,
    GlassyGhz,
}

/// Rényi-2 Shannon entropy `−log Σ_ℓ p_ℓ²` with `p_ℓ = |⟨e_ℓ|φ⟩|²` in the
/// chosen basis. The glassy-GHZ basis enumerates the `2^{L−1}` parity pairs
/// times α = ±.
pub fn shannon_renyi2(state: &PureState, basis: ShannonBasis) -> f64 {
    let norm_sq: f64 = state.amps.iter().map(|a| a * a).sum();
    let dim = state.amps.len();
    let mask = dim - 1;
    let sum: f64 = match basis {
        ShannonBasis::ZProduct => state
            .amps
            .iter()
            .map(|a| {
                let p = a * a / norm_sq;
                p * p
            })
            .sum(),
        ShannonBasis::GlassyGhz => (0..dim / 2)
            .map(|c| {
                let a = state.amps[c];
                let b = state.amps[c ^ mask];
                let p_plus = 0.5 * (a + b) * (a + b) / norm_sq;
                let p_minus = 0.5 * (a - b) * (a - b) / norm_sq;
                p_plus * p_plus + p_minus * p_minus
            })
            .sum(),
    };
    -sum.ln()
}

/// The uniform sign `s ∈ {+1, −1}` with `φ(c̄) = s·φ(c)` for a `U_X`
/// eigenstate; errors when no single sign fits within 1e-9 of the largest
/// amplitude.
pub fn parity_pair_sign(state: &PureState) -> Result<i32, GhzError> {
    let dim = state.amps.len();
    let mask = dim - 1;
    let mut max_abs = 0.0f64;
    let mut arg = 0usize;
    for (c, &a) in state.amps.iter().enumerate() {
        if a.abs() > max_abs {
            max_abs = a.abs();
            arg = c;
        }
    }
    if max_abs == 0.0 {
        return Err(GhzError::ZeroState);
    }
    let s = if state.amps[arg ^ mask] * state.amps[arg] >= 0.0 { 1.0 } else { -1.0 };
    let mut max_dev = 0.0f64;
    for c in 0..dim {
        let dev = (state.amps[c ^ mask] - s * state.amps[c]).abs();
        max_dev = max_dev.max(dev);
    }
    if max_dev > 1e-9 * max_abs {
        return Err(GhzError::NotParityEigenstate(max_dev / max_abs));
    }
    Ok(s as i32)
}
