//! Spin-1/2 chain models and their sparse Hamiltonians.
//!
//! Both model Hamiltonians are real in the Z product basis:
//!
//! ```text
//! H_TFI = −Σ_j [ Z_j Z_{j+1} + X_j ]
//! H_XXZ =  Σ_j [ X_j X_{j+1} + Y_j Y_{j+1} + Δ Z_j Z_{j+1} ]
//! ```
//!
//! A configuration `c` is an L-bit word; bit `j` set means spin down at site
//! `j`, so `z_j(c) = 1 − 2·bit_j(c)` and `|↑↑…↑⟩` is index 0. The `XX + YY`
//! pair flips antiparallel neighbors with matrix element 2, which keeps the
//! XXZ matrix real. Under periodic boundaries the link sum runs over all `L`
//! links `(j, j+1 mod L)`; at `L = 2` the two links coincide in sites and the
//! bond is counted twice, as the sum dictates.
//!
//! The XXZ ground state is solved in the total-Sz = 0 sector, implemented as
//! an indexing layer over the full `2^L` space; the returned state is always
//! a full-space vector.

use crate::lanczos::{lowest_eigenpair, LanczosError, LanczosOptions, LinearOp};
use crate::state::PureState;
use thiserror::Error;

/// Largest site count solved with dense `2^L` vectors by default. The
/// doubled space grows as `4^L`, so this also caps [`crate::vectorize`].
pub const DEFAULT_DENSE_LIMIT: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Model {
    Tfim,
    Xxz,
}

impl Model {
    pub fn as_str(&self) -> &'static str {
        match self {
            Model::Tfim => "tfim",
            Model::Xxz => "xxz",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Boundary {
    Periodic,
    Open,
}

impl Boundary {
    pub fn as_str(&self) -> &'static str {
        match self {
            Boundary::Periodic => "periodic",
            Boundary::Open => "open",
        }
    }
}

/// Which chain to build: model kind, size, anisotropy and boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    pub model: Model,
    pub l: usize,
    /// Anisotropy Δ; ignored for the TFIM.
    pub delta: f64,
    pub boundary: Boundary,
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("site count must be even and at least 2, got {0}")]
    BadSiteCount(usize),
    #[error("L = {l} exceeds the dense limit {limit}; use the MPS backend")]
    AboveDenseLimit { l: usize, limit: usize },
    #[error("XXZ anisotropy Δ = {0} lies outside the critical window |Δ| < 1")]
    NonCriticalDelta(f64),
    #[error("ground state solve failed: {0}")]
    Solver(#[from] LanczosError),
}

impl ModelSpec {
    pub fn tfim(l: usize, boundary: Boundary) -> Self {
        ModelSpec { model: Model::Tfim, l, delta: 0.0, boundary }
    }

    pub fn xxz(l: usize, delta: f64, boundary: Boundary) -> Self {
        ModelSpec { model: Model::Xxz, l, delta, boundary }
    }

    /// Basic sanity plus, when `require_critical` is set, the |Δ| < 1 window
    /// for the XXZ chain. Criticality is never enforced silently.
    pub fn validate(&self, require_critical: bool) -> Result<(), ModelError> {
        if self.l < 2 || self.l % 2 != 0 {
            return Err(ModelError::BadSiteCount(self.l));
        }
        if require_critical && self.model == Model::Xxz && self.delta.abs() >= 1.0 {
            return Err(ModelError::NonCriticalDelta(self.delta));
        }
        Ok(())
    }

    /// Nearest-neighbor links `(j, j+1)`; includes the wrap link iff periodic.
    pub fn links(&self) -> Vec<(usize, usize)> {
        links_for(self.l, self.boundary)
    }
}

pub(crate) fn links_for(l: usize, boundary: Boundary) -> Vec<(usize, usize)> {
    match boundary {
        Boundary::Periodic => (0..l).map(|j| (j, (j + 1) % l)).collect(),
        Boundary::Open => (0..l - 1).map(|j| (j, j + 1)).collect(),
    }
}

/// Total-Sz sector as an indexing layer over the full `2^L` space.
#[derive(Debug, Clone)]
pub struct SzSector {
    /// Configurations in the sector, ascending.
    pub configs: Vec<usize>,
    /// Full-space config → sector index; `usize::MAX` outside the sector.
    rank: Vec<usize>,
}

impl SzSector {
    fn half_filling(l: usize) -> Self {
        let dim = 1usize << l;
        let mut configs = Vec::new();
        let mut rank = vec![usize::MAX; dim];
        for c in 0..dim {
            if (c as u64).count_ones() as usize == l / 2 {
                rank[c] = configs.len();
                configs.push(c);
            }
        }
        SzSector { configs, rank }
    }
}

/// Sparse Hamiltonian held as a term list: diagonal ZZ links, off-diagonal
/// X flips and XX+YY pair hops. Immutable after construction.
#[derive(Debug, Clone)]
pub struct SparseOperator {
    l: usize,
    zz_links: Vec<(usize, usize, f64)>,
    x_sites: Vec<(usize, f64)>,
    hop_links: Vec<(usize, usize, f64)>,
    sector: Option<SzSector>,
}

impl SparseOperator {
    pub fn l(&self) -> usize {
        self.l
    }

    /// Full Hilbert-space dimension `2^L`.
    pub fn dim(&self) -> usize {
        1usize << self.l
    }

    /// Dimension of the basis the solver works in (sector or full).
    pub fn solve_dim(&self) -> usize {
        match &self.sector {
            Some(s) => s.configs.len(),
            None => self.dim(),
        }
    }

    pub fn sector(&self) -> Option<&SzSector> {
        self.sector.as_ref()
    }

    fn diag_energy(&self, c: usize) -> f64 {
        let mut e = 0.0;
        for &(i, j, w) in &self.zz_links {
            let zi = 1.0 - 2.0 * ((c >> i) & 1) as f64;
            let zj = 1.0 - 2.0 * ((c >> j) & 1) as f64;
            e += w * zi * zj;
        }
        e
    }

    /// `y = H x` over the full `2^L` basis.
    pub fn apply_full(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.dim());
        assert_eq!(y.len(), self.dim());
        y.fill(0.0);
        for c in 0..self.dim() {
            let a = x[c];
            if a == 0.0 {
                continue;
            }
            y[c] += self.diag_energy(c) * a;
            for &(s, w) in &self.x_sites {
                y[c ^ (1 << s)] += w * a;
            }
            for &(i, j, w) in &self.hop_links {
                let bi = (c >> i) & 1;
                let bj = (c >> j) & 1;
                if bi != bj {
                    y[c ^ (1 << i) ^ (1 << j)] += w * a;
                }
            }
        }
    }

    /// `y = H x` in the solve basis (sector-compressed when present).
    pub fn apply_solve(&self, x: &[f64], y: &mut [f64]) {
        match &self.sector {
            None => self.apply_full(x, y),
            Some(sec) => {
                assert_eq!(x.len(), sec.configs.len());
                y.fill(0.0);
                for (idx, &c) in sec.configs.iter().enumerate() {
                    let a = x[idx];
                    if a == 0.0 {
                        continue;
                    }
                    y[idx] += self.diag_energy(c) * a;
                    for &(i, j, w) in &self.hop_links {
                        let bi = (c >> i) & 1;
                        let bj = (c >> j) & 1;
                        if bi != bj {
                            let t = sec.rank[c ^ (1 << i) ^ (1 << j)];
                            y[t] += w * a;
                        }
                    }
                    // X terms change Sz and never appear together with a sector.
                    debug_assert!(self.x_sites.is_empty());
                }
            }
        }
    }

    /// Scatter a solve-basis vector into the full `2^L` space.
    pub fn expand(&self, v: &[f64]) -> Vec<f64> {
        match &self.sector {
            None => v.to_vec(),
            Some(sec) => {
                let mut full = vec![0.0; self.dim()];
                for (idx, &c) in sec.configs.iter().enumerate() {
                    full[c] = v[idx];
                }
                full
            }
        }
    }
}

struct SolveOp<'a>(&'a SparseOperator);

impl LinearOp for SolveOp<'_> {
    fn dim(&self) -> usize {
        self.0.solve_dim()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.0.apply_solve(x, y);
    }
}

/// Build the model Hamiltonian as a [`SparseOperator`].
///
/// Rejects odd `L` and `L` above the dense limit; the MPS backend handles
/// larger chains without ever constructing this operator.
pub fn build_hamiltonian(spec: &ModelSpec) -> Result<SparseOperator, ModelError> {
    build_hamiltonian_with_limit(spec, DEFAULT_DENSE_LIMIT)
}

pub fn build_hamiltonian_with_limit(
    spec: &ModelSpec,
    dense_limit: usize,
) -> Result<SparseOperator, ModelError> {
    spec.validate(false)?;
    if spec.l > dense_limit {
        return Err(ModelError::AboveDenseLimit { l: spec.l, limit: dense_limit });
    }
    let links = spec.links();
    let op = match spec.model {
        Model::Tfim => SparseOperator {
            l: spec.l,
            zz_links: links.iter().map(|&(i, j)| (i, j, -1.0)).collect(),
            x_sites: (0..spec.l).map(|s| (s, -1.0)).collect(),
            hop_links: Vec::new(),
            sector: None,
        },
        Model::Xxz => SparseOperator {
            l: spec.l,
            zz_links: links.iter().map(|&(i, j)| (i, j, spec.delta)).collect(),
            x_sites: Vec::new(),
            // XX + YY maps |↑↓⟩ ↔ |↓↑⟩ with element 2.
            hop_links: links.iter().map(|&(i, j)| (i, j, 2.0)).collect(),
            sector: Some(SzSector::half_filling(spec.l)),
        },
    };
    Ok(op)
}

/// Lanczos ground state of `h`, deterministic for a fixed seed.
///
/// The returned state lives in the full `2^L` space, is normalized, carries
/// its energy, and is gauge-fixed so the largest-magnitude amplitude is
/// positive.
pub fn ground_state(h: &SparseOperator, seed: u64) -> Result<PureState, ModelError> {
    let opts = LanczosOptions { seed, ..LanczosOptions::default() };
    let solve = lowest_eigenpair(&SolveOp(h), &opts)?;
    let mut amps = h.expand(&solve.vector);
    gauge_fix(&mut amps);
    let mut state = PureState::new(h.l(), amps).expect("expanded vector has dimension 2^L");
    state.normalize().expect("converged eigenvector has unit norm");
    state.energy = Some(solve.value);
    Ok(state)
}

/// Two lowest Ritz values of `h`; the gap guards the uniqueness assumption
/// behind parity-sign and GHZ identities.
pub fn lowest_two(h: &SparseOperator, seed: u64) -> Result<(f64, f64), ModelError> {
    let opts = LanczosOptions { seed, ..LanczosOptions::default() };
    let solve = lowest_eigenpair(&SolveOp(h), &opts)?;
    Ok((solve.value, solve.second_value.unwrap_or(f64::INFINITY)))
}

/// Make the largest-magnitude amplitude positive (first index on ties).
fn gauge_fix(amps: &mut [f64]) {
    let mut best = 0usize;
    let mut best_abs = 0.0f64;
    for (i, &a) in amps.iter().enumerate() {
        if a.abs() > best_abs {
            best_abs = a.abs();
            best = i;
        }
    }
    if amps[best] < 0.0 {
        for a in amps.iter_mut() {
            *a = -*a;
        }
    }
}
