//! One-sided Jacobi singular value decomposition.
//!
//! Columns of the working matrix are orthogonalized pairwise by plane
//! rotations until every off-diagonal coherence falls below tolerance; the
//! singular values are then the column norms. Simple, dependency-free and
//! accurate for the modestly sized matrices of two-site gate updates.

/// Thin SVD `A = U · diag(s) · Vᵀ` with rank `min(m, n)`, singular values
/// descending. `u` is m×r, `vt` is r×n, both row-major.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Vec<f64>,
    pub s: Vec<f64>,
    pub vt: Vec<f64>,
    pub m: usize,
    pub n: usize,
}

impl Svd {
    pub fn rank(&self) -> usize {
        self.s.len()
    }

    /// Number of leading singular values to keep under `chi_max` and a
    /// relative discarded-weight cutoff, plus that discarded weight.
    pub fn truncation(&self, chi_max: usize, cutoff: f64) -> (usize, f64) {
        let total: f64 = self.s.iter().map(|s| s * s).sum();
        if total <= 0.0 {
            return (1.min(self.rank()), 0.0);
        }
        let mut keep = self.rank().min(chi_max.max(1));
        let mut discarded: f64 = self.s[keep..].iter().map(|s| s * s).sum();
        while keep > 1 && (discarded + self.s[keep - 1] * self.s[keep - 1]) / total <= cutoff {
            discarded += self.s[keep - 1] * self.s[keep - 1];
            keep -= 1;
        }
        (keep, discarded / total)
    }
}

/// Compute the thin SVD of the row-major m×n matrix `a`.
pub fn jacobi_svd(a: &[f64], m: usize, n: usize) -> Svd {
    assert_eq!(a.len(), m * n);
    if m < n {
        // Factor the transpose and swap the roles of U and V.
        let mut at = vec![0.0; m * n];
        for i in 0..m {
            for j in 0..n {
                at[j * m + i] = a[i * n + j];
            }
        }
        let svd_t = jacobi_svd(&at, n, m);
        let r = svd_t.rank();
        let mut u = vec![0.0; m * r];
        for i in 0..m {
            for k in 0..r {
                u[i * r + k] = svd_t.vt[k * m + i];
            }
        }
        let mut vt = vec![0.0; r * n];
        for k in 0..r {
            for j in 0..n {
                vt[k * n + j] = svd_t.u[j * r + k];
            }
        }
        return Svd { u, s: svd_t.s, vt, m, n };
    }

    // Column-major working copy; rotations act on columns.
    let mut w = vec![0.0; m * n];
    for i in 0..m {
        for j in 0..n {
            w[j * m + i] = a[i * n + j];
        }
    }
    let mut v = vec![0.0; n * n];
    for j in 0..n {
        v[j * n + j] = 1.0;
    }

    let eps = 1e-14;
    let max_sweeps = 64;
    let mut norms: Vec<f64> = (0..n).map(|j| col_dot(&w, m, j, j)).collect();
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let app = norms[p];
                let aqq = norms[q];
                if app <= 0.0 || aqq <= 0.0 {
                    continue;
                }
                let apq = col_dot(&w, m, p, q);
                if apq.abs() <= eps * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_cols(&mut w, m, p, q, c, s);
                rotate_cols(&mut v, n, p, q, c, s);
                norms[p] = app - t * apq;
                norms[q] = aqq + t * apq;
            }
        }
        if !rotated {
            break;
        }
        // Refresh cached norms once per sweep against drift.
        for (j, norm) in norms.iter_mut().enumerate() {
            *norm = col_dot(&w, m, j, j);
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let sigmas: Vec<f64> = norms.iter().map(|&x| x.max(0.0).sqrt()).collect();
    order.sort_by(|&i, &j| sigmas[j].total_cmp(&sigmas[i]));

    let r = n;
    let mut u = vec![0.0; m * r];
    let mut s = vec![0.0; r];
    let mut vt = vec![0.0; r * n];
    for (k, &j) in order.iter().enumerate() {
        let sigma = sigmas[j];
        s[k] = sigma;
        if sigma > 0.0 {
            for i in 0..m {
                u[i * r + k] = w[j * m + i] / sigma;
            }
        }
        for row in 0..n {
            vt[k * n + row] = v[j * n + row];
        }
    }
    Svd { u, s, vt, m, n }
}

#[inline]
fn col_dot(w: &[f64], m: usize, p: usize, q: usize) -> f64 {
    let cp = &w[p * m..(p + 1) * m];
    let cq = &w[q * m..(q + 1) * m];
    cp.iter().zip(cq).map(|(a, b)| a * b).sum()
}

#[inline]
fn rotate_cols(w: &mut [f64], m: usize, p: usize, q: usize, c: f64, s: f64) {
    let (lo, hi) = if p < q { (p, q) } else { (q, p) };
    let (head, tail) = w.split_at_mut(hi * m);
    let cp = &mut head[lo * m..(lo + 1) * m];
    let cq = &mut tail[..m];
    if p < q {
        for (a, b) in cp.iter_mut().zip(cq.iter_mut()) {
            let (x, y) = (*a, *b);
            *a = c * x - s * y;
            *b = s * x + c * y;
        }
    } else {
        for (b, a) in cp.iter_mut().zip(cq.iter_mut()) {
            let (x, y) = (*a, *b);
            *a = c * x - s * y;
            *b = s * x + c * y;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lanczos::test_rng;

    fn reconstruct(svd: &Svd) -> Vec<f64> {
        let r = svd.rank();
        let mut out = vec![0.0; svd.m * svd.n];
        for i in 0..svd.m {
            for j in 0..svd.n {
                let mut acc = 0.0;
                for k in 0..r {
                    acc += svd.u[i * r + k] * svd.s[k] * svd.vt[k * svd.n + j];
                }
                out[i * svd.n + j] = acc;
            }
        }
        out
    }

    fn frob(a: &[f64]) -> f64 {
        a.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    fn check_matrix(a: &[f64], m: usize, n: usize) {
        let svd = jacobi_svd(a, m, n);
        let rec = reconstruct(&svd);
        let diff: Vec<f64> = a.iter().zip(&rec).map(|(x, y)| x - y).collect();
        assert!(
            frob(&diff) < 1e-10 * frob(a).max(1.0),
            "{m}x{n}: reconstruction error {}",
            frob(&diff)
        );
        // Orthonormal factors.
        let r = svd.rank();
        for k1 in 0..r {
            for k2 in 0..r {
                if svd.s[k1] == 0.0 || svd.s[k2] == 0.0 {
                    continue;
                }
                let udot: f64 = (0..m).map(|i| svd.u[i * r + k1] * svd.u[i * r + k2]).sum();
                let vdot: f64 = (0..n).map(|j| svd.vt[k1 * n + j] * svd.vt[k2 * n + j]).sum();
                let expect = if k1 == k2 { 1.0 } else { 0.0 };
                assert!((udot - expect).abs() < 1e-10);
                assert!((vdot - expect).abs() < 1e-10);
            }
        }
        // Descending singular values.
        assert!(svd.s.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn random_matrices_reconstruct() {
        let mut rng = test_rng(13);
        for &(m, n) in &[(4usize, 4usize), (16, 7), (7, 16), (64, 64), (256, 256), (96, 256)] {
            let a: Vec<f64> = (0..m * n).map(|_| rng.next() - 0.5).collect();
            check_matrix(&a, m, n);
        }
    }

    #[test]
    fn rank_deficient_matrix() {
        // Rank-3 outer-product sum embedded in 40×30.
        let (m, n) = (40usize, 30usize);
        let mut rng = test_rng(99);
        let mut a = vec![0.0; m * n];
        for _ in 0..3 {
            let x: Vec<f64> = (0..m).map(|_| rng.next() - 0.5).collect();
            let y: Vec<f64> = (0..n).map(|_| rng.next() - 0.5).collect();
            for i in 0..m {
                for j in 0..n {
                    a[i * n + j] += x[i] * y[j];
                }
            }
        }
        let svd = jacobi_svd(&a, m, n);
        assert!(svd.s[2] > 1e-8);
        assert!(svd.s[3] < 1e-10);
        check_matrix(&a, m, n);
    }

    #[test]
    fn known_diagonal_values() {
        // diag(3, 2, 1) stays put.
        let a = vec![3.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 1.0];
        let svd = jacobi_svd(&a, 3, 3);
        assert!((svd.s[0] - 3.0).abs() < 1e-12);
        assert!((svd.s[1] - 2.0).abs() < 1e-12);
        assert!((svd.s[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn truncation_accounting() {
        let a = vec![3.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 1.0];
        let svd = jacobi_svd(&a, 3, 3);
        let (keep, w) = svd.truncation(2, 0.0);
        assert_eq!(keep, 2);
        assert!((w - 1.0 / 14.0).abs() < 1e-12);
        let (keep, w) = svd.truncation(8, 0.2);
        assert_eq!(keep, 2);
        assert!((w - 1.0 / 14.0).abs() < 1e-12);
        let (keep, w) = svd.truncation(8, 0.0);
        assert_eq!(keep, 3);
        assert_eq!(w, 0.0);
    }
}
