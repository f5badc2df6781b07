//! The doubled state as a two-leg ladder MPS and the filter gates on it.
//!
//! Rung physical index: `s = 2·s_u + s_ℓ` over (upper, lower) leg spins, so
//! `s ∈ {↑↑, ↑↓, ↓↑, ↓↓}`. Doubling a chain with bond spectra {λ} gives a
//! ladder whose bond-k Schmidt values are the products λ_i λ_j; the ladder
//! bond is truncated by keeping the heaviest products, which is what keeps
//! the squared bond dimension workable before the gate stage.

use super::chain::ChainMps;
use super::svd::jacobi_svd;
use super::{MpsError, Tensor3};
use crate::doubled::{ChannelKind, ChannelSpec};
use crate::state::Axis;

/// Truncation policy for ladder construction and gate application.
#[derive(Debug, Clone, Copy)]
pub struct TruncationPolicy {
    pub chi_max: usize,
    /// Relative discarded-weight threshold per SVD.
    pub svd_cutoff: f64,
    /// Fold per-gate max-abs rescalings into `log_scale`.
    pub rescale: bool,
    /// Hard per-gate discarded-weight limit; exceeding it aborts the run.
    pub abort_weight: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy { chi_max: 128, svd_cutoff: 1e-12, rescale: true, abort_weight: 1e-6 }
    }
}

impl TruncationPolicy {
    pub fn validate(&self) -> Result<(), MpsError> {
        if self.chi_max < 1 {
            return Err(MpsError::BadPolicy("chi_max must be at least 1".into()));
        }
        if !(0.0..=1e-4).contains(&self.svd_cutoff) {
            return Err(MpsError::BadPolicy(format!(
                "svd_cutoff {} outside [0, 1e-4]",
                self.svd_cutoff
            )));
        }
        if self.abort_weight <= 0.0 {
            return Err(MpsError::BadPolicy("abort_weight must be positive".into()));
        }
        Ok(())
    }
}

/// Chain bond dimensions past this make the pair enumeration of the
/// doubling step unreasonable.
const CHAIN_BOND_CAP: usize = 512;

/// Two-leg ladder MPS (physical dimension 4) with log-domain scale and
/// accumulated relative truncation weight.
#[derive(Debug, Clone)]
pub struct MpsLadder {
    pub l: usize,
    pub tensors: Vec<Tensor3>,
    /// ln of the scalar factored out of the tensors so far.
    pub log_scale: f64,
    /// Sum of relative discarded weights over all truncations; monotone
    /// nondecreasing across gate applications.
    pub truncation_weight: f64,
    /// Orthogonality center; sites left of it are left-canonical, sites
    /// right of it right-canonical.
    pub center: usize,
}

impl MpsLadder {
    pub fn bond_dims(&self) -> Vec<usize> {
        self.tensors.iter().take(self.l - 1).map(|t| t.dr).collect()
    }

    /// Max deviation from the canonical conditions implied by `center`.
    pub fn orthogonality_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for (k, t) in self.tensors.iter().enumerate() {
            if k < self.center {
                // Left-canonical: Σ_{a,s} T[a,s,b] T[a,s,b'] = δ.
                for b in 0..t.dr {
                    for b2 in 0..t.dr {
                        let mut acc = 0.0;
                        for a in 0..t.dl {
                            for s in 0..t.d {
                                acc += t.at(a, s, b) * t.at(a, s, b2);
                            }
                        }
                        let expect = if b == b2 { 1.0 } else { 0.0 };
                        worst = worst.max((acc - expect).abs());
                    }
                }
            } else if k > self.center {
                // Right-canonical: Σ_{s,b} T[a,s,b] T[a',s,b] = δ.
                for a in 0..t.dl {
                    for a2 in 0..t.dl {
                        let mut acc = 0.0;
                        for s in 0..t.d {
                            for b in 0..t.dr {
                                acc += t.at(a, s, b) * t.at(a2, s, b);
                            }
                        }
                        let expect = if a == a2 { 1.0 } else { 0.0 };
                        worst = worst.max((acc - expect).abs());
                    }
                }
            }
        }
        worst
    }

    /// Norm² of the center tensor alone; equals the global norm² when the
    /// canonical structure holds.
    pub fn center_norm_sq(&self) -> f64 {
        self.tensors[self.center].data.iter().map(|x| x * x).sum()
    }

    /// ln ⟨ladder|ladder⟩ of the stored tensors (excludes `log_scale`).
    pub fn ln_norm_sq(&self) -> Result<f64, MpsError> {
        let (sign, ln) = transfer_ln(self, &Default::default())?;
        if sign <= 0.0 {
            return Err(MpsError::ZeroNorm);
        }
        Ok(ln)
    }

    /// Dense doubled-space amplitudes (including the scale), index
    /// `(c_u << L) | c_ℓ`; for small-L cross-checks.
    pub fn statevector(&self) -> Result<Vec<f64>, MpsError> {
        if self.l > 10 {
            return Err(MpsError::SiteOutOfRange(self.l));
        }
        let l = self.l;
        let scale = self.log_scale.exp();
        // Contract with little-endian rung digits, remap bits afterwards.
        let mut v = vec![1.0f64];
        let mut chi = 1usize;
        for (k, t) in self.tensors.iter().enumerate() {
            let configs = 1usize << (2 * k);
            let mut next = vec![0.0; configs * 4 * t.dr];
            for c in 0..configs {
                for a in 0..chi {
                    let amp = v[c * chi + a];
                    if amp == 0.0 {
                        continue;
                    }
                    for s in 0..4 {
                        let c2 = c | (s << (2 * k));
                        for b in 0..t.dr {
                            next[c2 * t.dr + b] += amp * t.at(a, s, b);
                        }
                    }
                }
            }
            v = next;
            chi = t.dr;
        }
        let mut out = vec![0.0; 1usize << (2 * l)];
        for (idx, &val) in v.iter().enumerate() {
            if val == 0.0 {
                continue;
            }
            let mut cu = 0usize;
            let mut cl = 0usize;
            for j in 0..l {
                let s = (idx >> (2 * j)) & 3;
                cu |= (s >> 1) << j;
                cl |= (s & 1) << j;
            }
            out[(cu << l) | cl] = val * scale;
        }
        Ok(out)
    }
}

/// Rung-product doubling `|φ⟩ ⊗ |φ⟩` with per-bond pair truncation.
///
/// At every bond the products λ_i λ_j are ranked and the heaviest kept,
/// subject to `policy.chi_max` and `policy.svd_cutoff` on the relative
/// discarded weight; the dropped weight is recorded. Purity stays 1 up to
/// that weight.
pub fn doubled_mps(chain: &ChainMps, policy: &TruncationPolicy) -> Result<MpsLadder, MpsError> {
    policy.validate()?;
    let l = chain.l;
    for t in &chain.tensors {
        if t.dr > CHAIN_BOND_CAP {
            return Err(MpsError::BondCapExceeded {
                bond: t.dr * t.dr,
                cap: CHAIN_BOND_CAP * CHAIN_BOND_CAP,
            });
        }
    }

    // Kept pair lists per bond; bond L−1 (right edge) is trivial.
    let mut kept: Vec<Vec<(usize, usize)>> = Vec::with_capacity(l - 1);
    let mut dropped_total = 0.0;
    for lam in &chain.lambdas {
        let chi = lam.len();
        let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(chi * chi);
        for i in 0..chi {
            for j in 0..chi {
                pairs.push((lam[i] * lam[j], i, j));
            }
        }
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let total: f64 = pairs.iter().map(|(w, _, _)| w * w).sum();
        let mut keep = pairs.len().min(policy.chi_max);
        let mut dropped: f64 = pairs[keep..].iter().map(|(w, _, _)| w * w).sum();
        while keep > 1 && (dropped + pairs[keep - 1].0 * pairs[keep - 1].0) / total <= policy.svd_cutoff
        {
            dropped += pairs[keep - 1].0 * pairs[keep - 1].0;
            keep -= 1;
        }
        dropped_total += dropped / total;
        kept.push(pairs[..keep].iter().map(|&(_, i, j)| (i, j)).collect());
    }

    let edge = vec![(0usize, 0usize)];
    let mut tensors = Vec::with_capacity(l);
    for k in 0..l {
        let left: &[(usize, usize)] = if k == 0 { &edge } else { &kept[k - 1] };
        let right: &[(usize, usize)] = if k == l - 1 { &edge } else { &kept[k] };
        let b = &chain.tensors[k];
        let mut t = Tensor3::zeros(left.len(), 4, right.len());
        for (ai, &(iu, il)) in left.iter().enumerate() {
            for (bi, &(ju, jl)) in right.iter().enumerate() {
                for su in 0..2 {
                    let up = b.at(iu, su, ju);
                    if up == 0.0 {
                        continue;
                    }
                    for sl in 0..2 {
                        *t.at_mut(ai, su * 2 + sl, bi) = up * b.at(il, sl, jl);
                    }
                }
            }
        }
        tensors.push(t);
    }

    Ok(MpsLadder { l, tensors, log_scale: 0.0, truncation_weight: dropped_total, center: 0 })
}

/// Diagonal two-rung ZZ gate weights: 1 on matching link parities,
/// `1 − 2p` on mismatched ones.
fn zz_gate_weight(p: f64, s1: usize, s2: usize) -> f64 {
    let upper_flip = (s1 >> 1) ^ (s2 >> 1);
    let lower_flip = (s1 & 1) ^ (s2 & 1);
    if upper_flip != lower_flip {
        1.0 - 2.0 * p
    } else {
        1.0
    }
}

/// Apply a decoherence channel to the ladder with per-gate SVD truncation.
///
/// The X layer is rung-local and applied first (the two layers commute in
/// the doubled space); the diagonal ZZ layer sweeps links left to right,
/// dragging the orthogonality center so every truncation happens in a
/// mixed-canonical frame.
pub fn apply_filter_gates_mps(
    mut ladder: MpsLadder,
    channel: &ChannelSpec,
    policy: &TruncationPolicy,
) -> Result<MpsLadder, MpsError> {
    policy.validate()?;
    match channel.kind {
        ChannelKind::Zz => {
            ladder = zz_sweep(ladder, channel.p_zz, policy)?;
        }
        ChannelKind::X => {
            x_layer(&mut ladder, channel.p_x);
            ladder = recanonicalize_right(ladder)?;
        }
        ChannelKind::XplusZz => {
            x_layer(&mut ladder, channel.p_x);
            ladder = recanonicalize_right(ladder)?;
            ladder = zz_sweep(ladder, channel.p_zz, policy)?;
        }
    }
    Ok(ladder)
}

fn x_layer(ladder: &mut MpsLadder, p: f64) {
    if p == 0.0 {
        return;
    }
    let q = 1.0 - p;
    for t in &mut ladder.tensors {
        for a in 0..t.dl {
            for b in 0..t.dr {
                let v0 = t.at(a, 0, b);
                let v1 = t.at(a, 1, b);
                let v2 = t.at(a, 2, b);
                let v3 = t.at(a, 3, b);
                *t.at_mut(a, 0, b) = q * v0 + p * v3;
                *t.at_mut(a, 3, b) = q * v3 + p * v0;
                *t.at_mut(a, 1, b) = q * v1 + p * v2;
                *t.at_mut(a, 2, b) = q * v2 + p * v1;
            }
        }
    }
}

fn zz_sweep(
    mut ladder: MpsLadder,
    p: f64,
    policy: &TruncationPolicy,
) -> Result<MpsLadder, MpsError> {
    if ladder.center != 0 {
        ladder = recanonicalize_right(ladder)?;
    }
    let l = ladder.l;
    for link in 0..l - 1 {
        let (cl, cr) = (ladder.tensors[link].dl, ladder.tensors[link + 1].dr);
        let mid = ladder.tensors[link].dr;
        // theta[a, s1, s2, b] with the gate folded in.
        let mut theta = vec![0.0; cl * 16 * cr];
        for a in 0..cl {
            for s1 in 0..4 {
                for g in 0..mid {
                    let v = ladder.tensors[link].at(a, s1, g);
                    if v == 0.0 {
                        continue;
                    }
                    for s2 in 0..4 {
                        let w = zz_gate_weight(p, s1, s2);
                        if w == 0.0 {
                            continue;
                        }
                        for b in 0..cr {
                            theta[((a * 4 + s1) * 4 + s2) * cr + b] +=
                                w * v * ladder.tensors[link + 1].at(g, s2, b);
                        }
                    }
                }
            }
        }
        if policy.rescale {
            let m = theta.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
            if m == 0.0 {
                return Err(MpsError::ZeroNorm);
            }
            for x in theta.iter_mut() {
                *x /= m;
            }
            ladder.log_scale += m.ln();
        }
        let svd = jacobi_svd(&theta, cl * 4, 4 * cr);
        let (keep, w) = svd.truncation(policy.chi_max, policy.svd_cutoff);
        if w > policy.abort_weight {
            return Err(MpsError::TruncationAbort {
                link,
                weight: w,
                threshold: policy.abort_weight,
            });
        }
        ladder.truncation_weight += w;
        let r = svd.rank();
        let mut left = Tensor3::zeros(cl, 4, keep);
        let mut right = Tensor3::zeros(keep, 4, cr);
        for k in 0..keep {
            for a in 0..cl {
                for s1 in 0..4 {
                    *left.at_mut(a, s1, k) = svd.u[(a * 4 + s1) * r + k];
                }
            }
            for s2 in 0..4 {
                for b in 0..cr {
                    *right.at_mut(k, s2, b) = svd.s[k] * svd.vt[k * (4 * cr) + s2 * cr + b];
                }
            }
        }
        ladder.tensors[link] = left;
        ladder.tensors[link + 1] = right;
        ladder.center = link + 1;
    }
    Ok(ladder)
}

/// Restore full right-canonical form (center back to site 0), no truncation.
fn recanonicalize_right(mut ladder: MpsLadder) -> Result<MpsLadder, MpsError> {
    let l = ladder.l;
    for k in (1..l).rev() {
        let t = &ladder.tensors[k];
        let (m, n) = (t.dl, 4 * t.dr);
        let svd = jacobi_svd(&t.data, m, n);
        let keep = svd.s.iter().filter(|&&s| s > 0.0).count().max(1);
        let r = svd.rank();
        let mut right = Tensor3::zeros(keep, 4, t.dr);
        for k2 in 0..keep {
            for s in 0..4 {
                for b in 0..t.dr {
                    *right.at_mut(k2, s, b) = svd.vt[k2 * n + s * t.dr + b];
                }
            }
        }
        let prev = &ladder.tensors[k - 1];
        let mut carried = Tensor3::zeros(prev.dl, 4, keep);
        for a in 0..prev.dl {
            for s in 0..4 {
                for g in 0..prev.dr {
                    let v = prev.at(a, s, g);
                    if v == 0.0 {
                        continue;
                    }
                    for k2 in 0..keep {
                        *carried.at_mut(a, s, k2) += v * svd.u[g * r + k2] * svd.s[k2];
                    }
                }
            }
        }
        ladder.tensors[k] = right;
        ladder.tensors[k - 1] = carried;
    }
    ladder.center = 0;
    Ok(ladder)
}

/// `S_SE = −(2·log_scale + ln ⟨ladder|ladder⟩)`.
pub fn see_mps(ladder: &MpsLadder) -> Result<f64, MpsError> {
    Ok(-(2.0 * ladder.log_scale + ladder.ln_norm_sq()?))
}

/// 4×4 rung operator from per-leg Pauli axes (identity where `None`).
/// Restricted to X and Z, which keeps everything real.
pub fn rung_operator(upper: Option<Axis>, lower: Option<Axis>) -> [f64; 16] {
    fn pauli(axis: Option<Axis>) -> [[f64; 2]; 2] {
        match axis {
            None => [[1.0, 0.0], [0.0, 1.0]],
            Some(Axis::X) => [[0.0, 1.0], [1.0, 0.0]],
            Some(Axis::Z) => [[1.0, 0.0], [0.0, -1.0]],
            Some(Axis::Y) => panic!("rung operators are real; Y is not supported"),
        }
    }
    let u = pauli(upper);
    let lo = pauli(lower);
    let mut out = [0.0; 16];
    for su in 0..2 {
        for sl in 0..2 {
            for tu in 0..2 {
                for tl in 0..2 {
                    out[(su * 2 + sl) * 4 + (tu * 2 + tl)] = u[su][tu] * lo[sl][tl];
                }
            }
        }
    }
    out
}

/// Log-domain transfer contraction ⟨ladder|O|ladder⟩ with optional 4×4 rung
/// operators; returns (sign, ln |value|).
fn transfer_ln(
    ladder: &MpsLadder,
    ops: &std::collections::BTreeMap<usize, [f64; 16]>,
) -> Result<(f64, f64), MpsError> {
    let mut env = vec![1.0f64];
    let mut chi = 1usize;
    let mut ln_acc = 0.0f64;
    for (k, t) in ladder.tensors.iter().enumerate() {
        let op = ops.get(&k);
        let mut next = vec![0.0; t.dr * t.dr];
        for a in 0..t.dl {
            for a2 in 0..t.dl {
                let e = env[a * chi + a2];
                if e == 0.0 {
                    continue;
                }
                for s in 0..t.d {
                    for b in 0..t.dr {
                        let ta = t.at(a, s, b);
                        if ta == 0.0 {
                            continue;
                        }
                        match op {
                            None => {
                                let w = e * ta;
                                for b2 in 0..t.dr {
                                    next[b * t.dr + b2] += w * t.at(a2, s, b2);
                                }
                            }
                            Some(o) => {
                                for s2 in 0..t.d {
                                    let ov = o[s * 4 + s2];
                                    if ov == 0.0 {
                                        continue;
                                    }
                                    let w = e * ta * ov;
                                    for b2 in 0..t.dr {
                                        next[b * t.dr + b2] += w * t.at(a2, s2, b2);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        let m = next.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        if m == 0.0 {
            return Err(MpsError::ZeroNorm);
        }
        for x in next.iter_mut() {
            *x /= m;
        }
        ln_acc += m.ln();
        env = next;
        chi = t.dr;
    }
    let v = env[0];
    if v == 0.0 {
        return Err(MpsError::ZeroNorm);
    }
    Ok((v.signum(), ln_acc + v.abs().ln()))
}

/// ⟨ladder|Π O_k|ladder⟩ / ⟨ladder|ladder⟩ for rung-operator insertions;
/// repeated sites multiply together.
pub fn mps_expectation(
    ladder: &MpsLadder,
    ops: &[(usize, [f64; 16])],
) -> Result<f64, MpsError> {
    let mut map: std::collections::BTreeMap<usize, [f64; 16]> = Default::default();
    for &(site, op) in ops {
        if site >= ladder.l {
            return Err(MpsError::SiteOutOfRange(site));
        }
        match map.get(&site) {
            None => {
                map.insert(site, op);
            }
            Some(prev) => {
                let mut prod = [0.0; 16];
                for i in 0..4 {
                    for j in 0..4 {
                        for k in 0..4 {
                            prod[i * 4 + j] += op[i * 4 + k] * prev[k * 4 + j];
                        }
                    }
                }
                map.insert(site, prod);
            }
        }
    }
    let (s_num, ln_num) = transfer_ln(ladder, &map)?;
    let (s_den, ln_den) = transfer_ln(ladder, &Default::default())?;
    Ok(s_num * s_den * (ln_num - ln_den).exp())
}

/// Rényi-2 correlator on the ladder: Z_u Z_ℓ inserted at sites i and j.
pub fn renyi2_correlator_mps(ladder: &MpsLadder, i: usize, j: usize) -> Result<f64, MpsError> {
    let zz = rung_operator(Some(Axis::Z), Some(Axis::Z));
    mps_expectation(ladder, &[(i, zz), (j, zz)])
}

pub fn renyi2_susceptibility_mps(ladder: &MpsLadder) -> Result<f64, MpsError> {
    let l = ladder.l;
    let mut acc = 0.0;
    for r in 1..=l / 2 {
        acc += renyi2_correlator_mps(ladder, 0, r)?;
    }
    Ok(2.0 * acc / l as f64)
}

/// `C^I(i,j) = ⟨⟨1|Z_{i,u}Z_{j,u}|ρ⟩⟩ / ⟨⟨1|ρ⟩⟩` by vector transfer against
/// the rung triplet state (1,0,0,1); normalizations cancel in the ratio.
pub fn canonical_correlator_mps(
    ladder: &MpsLadder,
    i: usize,
    j: usize,
) -> Result<f64, MpsError> {
    if i >= ladder.l {
        return Err(MpsError::SiteOutOfRange(i));
    }
    if j >= ladder.l {
        return Err(MpsError::SiteOutOfRange(j));
    }
    let run = |with_op: bool| -> Result<(f64, f64), MpsError> {
        let mut v = vec![1.0f64];
        let mut ln_acc = 0.0f64;
        for (k, t) in ladder.tensors.iter().enumerate() {
            // Rung vector: (1, 0, 0, 1), with Z_u flipping the ↓↓ sign.
            let on = with_op && ((k == i) ^ (k == j));
            let rv = if on { [1.0, 0.0, 0.0, -1.0] } else { [1.0, 0.0, 0.0, 1.0] };
            let mut next = vec![0.0; t.dr];
            for a in 0..t.dl {
                let va = v[a];
                if va == 0.0 {
                    continue;
                }
                for s in 0..t.d {
                    if rv[s] == 0.0 {
                        continue;
                    }
                    let w = va * rv[s];
                    for b in 0..t.dr {
                        next[b] += w * t.at(a, s, b);
                    }
                }
            }
            let m = next.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
            if m == 0.0 {
                return Err(MpsError::ZeroNorm);
            }
            for x in next.iter_mut() {
                *x /= m;
            }
            ln_acc += m.ln();
            v = next;
        }
        Ok((v[0].signum(), ln_acc + v[0].abs().ln()))
    };
    let (s_num, ln_num) = run(true)?;
    let (s_den, ln_den) = run(false)?;
    Ok(s_num * s_den * (ln_num - ln_den).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doubled::{
        apply_channel, apply_zz_filter, canonical_correlator, renyi2_correlator, see, vectorize,
    };
    use crate::model::{Boundary, ModelSpec};
    use crate::mps::chain::{ground_state_mps, DmrgOptions};

    fn chain(l: usize) -> ChainMps {
        let spec = ModelSpec::tfim(l, Boundary::Open);
        ground_state_mps(&spec, &DmrgOptions::default()).unwrap().mps
    }

    fn exact_policy() -> TruncationPolicy {
        TruncationPolicy { chi_max: 4096, svd_cutoff: 0.0, ..Default::default() }
    }

    #[test]
    fn product_chain_doubles_to_bond_one() {
        let mut t = Tensor3::zeros(1, 2, 1);
        *t.at_mut(0, 0, 0) = 1.0;
        let product = ChainMps {
            l: 4,
            tensors: (0..4).map(|_| t.clone()).collect(),
            lambdas: vec![vec![1.0]; 3],
        };
        let ladder = doubled_mps(&product, &TruncationPolicy::default()).unwrap();
        assert!(ladder.bond_dims().iter().all(|&d| d == 1));
        assert!((ladder.statevector().unwrap()[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn doubling_matches_dense_vectorize() {
        let l = 8;
        let mps = chain(l);
        let ladder = doubled_mps(&mps, &exact_policy()).unwrap();
        assert!(ladder.truncation_weight < 1e-14);
        // Purity 1 and overlap 1 − 1e-10 against the dense doubled vector.
        let norm_sq = ladder.ln_norm_sq().unwrap().exp();
        assert!((norm_sq - 1.0).abs() < 1e-10);
        let dense_state = {
            let sv = mps.statevector();
            let mut ps = crate::state::PureState::new(l, sv).unwrap();
            ps.normalize().unwrap();
            vectorize(&ps).unwrap()
        };
        let ladder_vec = ladder.statevector().unwrap();
        let overlap: f64 =
            ladder_vec.iter().zip(&dense_state.amps).map(|(a, b)| a * b).sum();
        assert!(overlap.abs() > 1.0 - 1e-10, "overlap {overlap}");
    }

    #[test]
    fn identity_gate_leaves_ladder_unchanged() {
        let mps = chain(6);
        let ladder = doubled_mps(&mps, &exact_policy()).unwrap();
        let before = see_mps(&ladder).unwrap();
        let out = apply_filter_gates_mps(
            ladder,
            &ChannelSpec::zz(0.0).unwrap(),
            &exact_policy(),
        )
        .unwrap();
        let after = see_mps(&out).unwrap();
        assert!(before.abs() < 1e-10);
        assert!(after.abs() < 1e-10);
    }

    #[test]
    fn filtered_observables_match_dense() {
        let l = 8;
        let mps = chain(l);
        let spec_state = {
            let mut ps = crate::state::PureState::new(l, mps.statevector()).unwrap();
            ps.normalize().unwrap();
            ps
        };
        for p in [0.1, 0.3, 0.5] {
            let ladder = doubled_mps(&mps, &exact_policy()).unwrap();
            let ladder =
                apply_filter_gates_mps(ladder, &ChannelSpec::zz(p).unwrap(), &exact_policy())
                    .unwrap();
            let dense =
                apply_zz_filter(vectorize(&spec_state).unwrap(), p, Boundary::Open).unwrap();
            let s_mps = see_mps(&ladder).unwrap();
            let s_dense = see(&dense).unwrap();
            assert!((s_mps - s_dense).abs() < 1e-8, "p={p}: {s_mps} vs {s_dense}");
            for r in [1usize, 3, 4] {
                let c_mps = renyi2_correlator_mps(&ladder, 0, r).unwrap();
                let c_dense = renyi2_correlator(&dense, 0, r).unwrap();
                assert!((c_mps - c_dense).abs() < 1e-8, "p={p} r={r}");
                let c1_mps = canonical_correlator_mps(&ladder, 0, r).unwrap();
                let c1_dense = canonical_correlator(&dense, 0, r).unwrap();
                assert!((c1_mps - c1_dense).abs() < 1e-8, "p={p} r={r}");
            }
        }
    }

    #[test]
    fn x_layer_matches_dense_combined_channel() {
        let l = 6;
        let mps = chain(l);
        let spec_state = {
            let mut ps = crate::state::PureState::new(l, mps.statevector()).unwrap();
            ps.normalize().unwrap();
            ps
        };
        for p in [0.2, 0.5] {
            let channel = ChannelSpec::x_plus_zz(p).unwrap();
            let ladder = doubled_mps(&mps, &exact_policy()).unwrap();
            let ladder = apply_filter_gates_mps(ladder, &channel, &exact_policy()).unwrap();
            let dense =
                apply_channel(vectorize(&spec_state).unwrap(), &channel, Boundary::Open).unwrap();
            let s_mps = see_mps(&ladder).unwrap();
            let s_dense = see(&dense).unwrap();
            assert!((s_mps - s_dense).abs() < 1e-8, "p={p}: {s_mps} vs {s_dense}");
        }
    }

    #[test]
    fn truncation_weight_monotone_and_bounded_effect() {
        let l = 10;
        let mps = chain(l);
        let chis = [64usize, 32, 16];
        let mut sees = Vec::new();
        let mut weights = Vec::new();
        for &chi in &chis {
            let policy = TruncationPolicy {
                chi_max: chi,
                svd_cutoff: 1e-12,
                abort_weight: 1e-3,
                ..Default::default()
            };
            let ladder = doubled_mps(&mps, &policy).unwrap();
            let w0 = ladder.truncation_weight;
            let ladder =
                apply_filter_gates_mps(ladder, &ChannelSpec::zz(0.3).unwrap(), &policy).unwrap();
            assert!(ladder.truncation_weight >= w0);
            weights.push(ladder.truncation_weight);
            sees.push(see_mps(&ladder).unwrap());
        }
        // Truncation discards norm, so S_SE can only drift up; the drift is
        // bounded by the cross term 2√(w·purity), i.e. ~√w·e^{S/2} in S.
        for k in 1..sees.len() {
            assert!(sees[k] >= sees[0] - 1e-9);
            let budget = 10.0 * (weights[k] + weights[0]).sqrt() * (0.5 * sees[0]).exp() + 1e-9;
            assert!(
                (sees[k] - sees[0]).abs() <= budget,
                "chi={} drift {} weight {} budget {budget}",
                chis[k],
                sees[k] - sees[0],
                weights[k]
            );
        }
    }

    #[test]
    fn gate_order_independence_for_diagonal_layer() {
        // All ZZ gates are diagonal and commute; sweeping the mirrored chain
        // must give the same purity within the truncation budget.
        let l = 8;
        let mps = chain(l);
        let policy = TruncationPolicy { chi_max: 24, svd_cutoff: 1e-12, ..Default::default() };
        let ladder = doubled_mps(&mps, &policy).unwrap();
        let forward =
            apply_filter_gates_mps(ladder.clone(), &ChannelSpec::zz(0.25).unwrap(), &policy)
                .unwrap();

        // Mirror the ladder, sweep, and compare: equivalent to the reverse
        // gate order on the original.
        let mirrored = MpsLadder {
            l,
            tensors: ladder
                .tensors
                .iter()
                .rev()
                .map(|t| {
                    let mut m = Tensor3::zeros(t.dr, t.d, t.dl);
                    for a in 0..t.dl {
                        for s in 0..t.d {
                            for b in 0..t.dr {
                                *m.at_mut(b, s, a) = t.at(a, s, b);
                            }
                        }
                    }
                    m
                })
                .collect(),
            log_scale: ladder.log_scale,
            truncation_weight: ladder.truncation_weight,
            center: l - 1,
        };
        let mirrored = recanonicalize_right(mirrored).unwrap();
        let backward =
            apply_filter_gates_mps(mirrored, &ChannelSpec::zz(0.25).unwrap(), &policy).unwrap();
        let s_f = see_mps(&forward).unwrap();
        let s_b = see_mps(&backward).unwrap();
        let w_total = forward.truncation_weight + backward.truncation_weight;
        let budget = 10.0 * w_total.sqrt() * (0.5 * s_f).exp() + 1e-9;
        assert!((s_f - s_b).abs() <= budget, "{s_f} vs {s_b}, budget {budget}");
    }

    #[test]
    fn canonical_structure_checks() {
        let mps = chain(8);
        let ladder = doubled_mps(&mps, &exact_policy()).unwrap();
        assert!(ladder.orthogonality_error() < 1e-10);
        assert!((ladder.center_norm_sq() - ladder.ln_norm_sq().unwrap().exp()).abs() < 1e-10);
        let filtered = apply_filter_gates_mps(
            ladder,
            &ChannelSpec::zz(0.3).unwrap(),
            &exact_policy(),
        )
        .unwrap();
        assert_eq!(filtered.center, 7);
        assert!(filtered.orthogonality_error() < 1e-10);
        assert!(
            (filtered.center_norm_sq() - filtered.ln_norm_sq().unwrap().exp()).abs() < 1e-10
        );
    }

    #[test]
    fn identity_rung_expectation_is_one() {
        let mps = chain(6);
        let ladder = doubled_mps(&mps, &exact_policy()).unwrap();
        let id = rung_operator(None, None);
        assert!((mps_expectation(&ladder, &[(2, id)]).unwrap() - 1.0).abs() < 1e-12);
        // C^II(i, i) = 1 via the repeated-site product path.
        assert!((renyi2_correlator_mps(&ladder, 3, 3).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn x_gates_never_grow_bonds() {
        let mps = chain(8);
        let ladder = doubled_mps(&mps, &exact_policy()).unwrap();
        let bonds_before = ladder.bond_dims();
        let out =
            apply_filter_gates_mps(ladder, &ChannelSpec::x(0.3).unwrap(), &exact_policy())
                .unwrap();
        assert!(out
            .bond_dims()
            .iter()
            .zip(&bonds_before)
            .all(|(after, before)| after <= before));
    }

    #[test]
    fn policy_validation() {
        assert!(TruncationPolicy { chi_max: 0, ..Default::default() }.validate().is_err());
        assert!(TruncationPolicy { svd_cutoff: 1e-3, ..Default::default() }
            .validate()
            .is_err());
        assert!(TruncationPolicy::default().validate().is_ok());
    }
}
