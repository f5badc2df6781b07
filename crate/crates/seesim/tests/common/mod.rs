#![allow(dead_code)] // each test target compiles its own copy and uses a subset

//! Independent oracles shared by the integration suites.
//!
//! Everything here is deliberately built through different routes than the
//! library: Hamiltonians from explicit two-site matrix embeddings, spectra
//! from cyclic Jacobi rotations, reference correlators from free-fermion
//! Toeplitz determinants.

use seesim::model::{Boundary, Model, ModelSpec};

/// Dense symmetric-matrix eigensolve by cyclic Jacobi rotations.
/// Returns eigenvalues ascending.
pub fn jacobi_eigenvalues(a: &[f64], n: usize) -> Vec<f64> {
    let mut m = a.to_vec();
    for _ in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off += m[p * n + q] * m[p * n + q];
            }
        }
        if off.sqrt() < 1e-14 {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    eigs.sort_by(f64::total_cmp);
    eigs
}

fn add_two_site_term(h: &mut [f64], l: usize, i: usize, j: usize, m4: &[[f64; 4]; 4], coeff: f64) {
    let dim = 1usize << l;
    for c in 0..dim {
        let bi = (c >> i) & 1;
        let bj = (c >> j) & 1;
        let row = (bi << 1) | bj;
        for bi2 in 0..2 {
            for bj2 in 0..2 {
                let col = (bi2 << 1) | bj2;
                let v = m4[row][col];
                if v == 0.0 {
                    continue;
                }
                let c2 = (c & !(1 << i) & !(1 << j)) | (bi2 << i) | (bj2 << j);
                h[c * dim + c2] += coeff * v;
            }
        }
    }
}

fn add_one_site_term(h: &mut [f64], l: usize, i: usize, m2: &[[f64; 2]; 2], coeff: f64) {
    let dim = 1usize << l;
    for c in 0..dim {
        let bi = (c >> i) & 1;
        for bi2 in 0..2 {
            let v = m2[bi][bi2];
            if v == 0.0 {
                continue;
            }
            let c2 = (c & !(1 << i)) | (bi2 << i);
            h[c * dim + c2] += coeff * v;
        }
    }
}

/// Dense Hamiltonian built from explicit matrix embeddings; an independent
/// construction path from the library's term-list matvec.
pub fn dense_hamiltonian(spec: &ModelSpec) -> Vec<f64> {
    let l = spec.l;
    let dim = 1usize << l;
    let mut h = vec![0.0; dim * dim];
    let zz = [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, -1.0, 0.0, 0.0],
        [0.0, 0.0, -1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ];
    let flipflop = [
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 2.0, 0.0],
        [0.0, 2.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0],
    ];
    let x = [[0.0, 1.0], [1.0, 0.0]];
    let links: Vec<(usize, usize)> = match spec.boundary {
        Boundary::Periodic => (0..l).map(|k| (k, (k + 1) % l)).collect(),
        Boundary::Open => (0..l - 1).map(|k| (k, k + 1)).collect(),
    };
    match spec.model {
        Model::Tfim => {
            for &(i, j) in &links {
                add_two_site_term(&mut h, l, i, j, &zz, -1.0);
            }
            for i in 0..l {
                add_one_site_term(&mut h, l, i, &x, -1.0);
            }
        }
        Model::Xxz => {
            for &(i, j) in &links {
                add_two_site_term(&mut h, l, i, j, &flipflop, 1.0);
                add_two_site_term(&mut h, l, i, j, &zz, spec.delta);
            }
        }
    }
    h
}

/// Free-fermion ground energy of the periodic critical TFIM (even sector):
/// `E₀(L) = −2 / sin(π / 2L)`.
pub fn jw_tfim_energy(l: usize) -> f64 {
    -2.0 / (std::f64::consts::PI / (2.0 * l as f64)).sin()
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(a: &[f64], n: usize) -> f64 {
    let mut m = a.to_vec();
    let mut det = 1.0f64;
    for k in 0..n {
        let mut piv = k;
        for r in k + 1..n {
            if m[r * n + k].abs() > m[piv * n + k].abs() {
                piv = r;
            }
        }
        if m[piv * n + k] == 0.0 {
            return 0.0;
        }
        if piv != k {
            for c in 0..n {
                m.swap(k * n + c, piv * n + c);
            }
            det = -det;
        }
        det *= m[k * n + k];
        for r in k + 1..n {
            let f = m[r * n + k] / m[k * n + k];
            for c in k..n {
                m[r * n + c] -= f * m[k * n + c];
            }
        }
    }
    det
}

/// Infinite-chain critical order correlator ⟨Z₀Z_n⟩ of the TFIM as the
/// Toeplitz determinant `det[G(1 + i − j)]` with `G(m) = 2/(π(2m−1))`;
/// asymptotically ∝ n^{−1/4}.
pub fn ising_order_correlator_infinite(n: usize) -> f64 {
    let g = |m: i64| 2.0 / (std::f64::consts::PI * (2 * m - 1) as f64);
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = g(1 + i as i64 - j as i64);
        }
    }
    determinant(&a, n)
}

/// Decay exponent of the infinite-chain oracle correlator over n ∈ [lo, hi].
pub fn ising_order_exponent_oracle(lo: usize, hi: usize) -> f64 {
    let pts: Vec<(f64, f64)> = (lo..=hi)
        .map(|n| ((n as f64).ln(), ising_order_correlator_infinite(n).ln()))
        .collect();
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|(x, _)| x).sum();
    let sy: f64 = pts.iter().map(|(_, y)| y).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = pts.iter().map(|(x, y)| x * y).sum();
    -(n * sxy - sx * sy) / (n * sxx - sx * sx)
}
