//! Lanczos iteration with full reorthogonalization for the lowest eigenpair
//! of a real symmetric operator.
//!
//! The Krylov tridiagonal is analyzed with Sturm-count bisection for its
//! lowest eigenvalues and inverse iteration for the matching eigenvector;
//! the Ritz residual bound `β_m |y_m|` drives convergence. The start vector
//! comes from a seeded ChaCha stream, so results are bitwise reproducible
//! for a fixed seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Minimal matrix-free interface: dimension plus `y = A x`.
pub trait LinearOp {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

#[derive(Debug, Clone)]
pub struct LanczosOptions {
    /// Ritz residual tolerance relative to `max(1, |λ|)`.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    /// Optional start vector; overrides the seeded random start.
    pub start: Option<Vec<f64>>,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions { tol: 1e-12, max_iter: 2000, seed: 1, start: None }
    }
}

#[derive(Debug, Clone)]
pub struct LanczosSolve {
    pub value: f64,
    /// Second-lowest Ritz value, when the Krylov space grew past dimension 1.
    pub second_value: Option<f64>,
    pub vector: Vec<f64>,
    /// Explicit final residual ‖Av − λv‖.
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Error)]
pub enum LanczosError {
    #[error("operator has dimension zero")]
    EmptyOperator,
    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("start vector has zero norm")]
    ZeroStart,
}

pub fn lowest_eigenpair(
    op: &impl LinearOp,
    opts: &LanczosOptions,
) -> Result<LanczosSolve, LanczosError> {
    let n = op.dim();
    if n == 0 {
        return Err(LanczosError::EmptyOperator);
    }
    if n == 1 {
        let mut y = vec![0.0];
        op.apply(&[1.0], &mut y);
        return Ok(LanczosSolve {
            value: y[0],
            second_value: None,
            vector: vec![1.0],
            residual: 0.0,
            iterations: 1,
        });
    }

    let mut v = match &opts.start {
        Some(s) => {
            assert_eq!(s.len(), n, "start vector dimension mismatch");
            s.clone()
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            (0..n).map(|_| rng.gen::<f64>() - 0.5).collect()
        }
    };
    let norm = norm2(&v);
    if norm == 0.0 {
        return Err(LanczosError::ZeroStart);
    }
    scale(&mut v, 1.0 / norm);

    let m_max = opts.max_iter.min(n);
    let mut alpha: Vec<f64> = Vec::with_capacity(m_max);
    let mut beta: Vec<f64> = Vec::with_capacity(m_max);
    let mut basis: Vec<Vec<f64>> = vec![v.clone()];
    let mut w = vec![0.0; n];
    let mut converged = false;

    for j in 0..m_max {
        op.apply(&basis[j], &mut w);
        if j > 0 {
            axpy(&mut w, -beta[j - 1], &basis[j - 1]);
        }
        let a = dot(&w, &basis[j]);
        alpha.push(a);
        axpy(&mut w, -a, &basis[j]);
        // Full reorthogonalization against the whole basis.
        for prev in &basis {
            let proj = dot(&w, prev);
            axpy(&mut w, -proj, prev);
        }
        let b = norm2(&w);

        let m = alpha.len();
        if m >= 1 {
            let lo = kth_smallest_eigenvalue(&alpha, &beta, 0);
            let y = tridiag_eigvec(&alpha, &beta, lo);
            let resid_bound = b * y[m - 1].abs();
            if resid_bound <= opts.tol * lo.abs().max(1.0) || b < 1e-14 || m == n {
                converged = true;
            }
        }
        if converged {
            break;
        }
        beta.push(b);
        let mut next = w.clone();
        scale(&mut next, 1.0 / b);
        basis.push(next);
    }

    let m = alpha.len();
    let value = kth_smallest_eigenvalue(&alpha, &beta[..m - 1], 0);
    let second_value =
        if m >= 2 { Some(kth_smallest_eigenvalue(&alpha, &beta[..m - 1], 1)) } else { None };
    let y = tridiag_eigvec(&alpha, &beta[..m - 1], value);

    let mut vector = vec![0.0; n];
    for (k, basis_vec) in basis.iter().take(m).enumerate() {
        axpy(&mut vector, y[k], basis_vec);
    }
    let vn = norm2(&vector);
    scale(&mut vector, 1.0 / vn);

    op.apply(&vector, &mut w);
    axpy(&mut w, -value, &vector);
    let residual = norm2(&w);

    if !converged || residual > 100.0 * opts.tol * value.abs().max(1.0) {
        return Err(LanczosError::NotConverged { iterations: m, residual });
    }
    Ok(LanczosSolve { value, second_value, vector, residual, iterations: m })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn scale(a: &mut [f64], s: f64) {
    for x in a.iter_mut() {
        *x *= s;
    }
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Number of eigenvalues of the tridiagonal (alpha, beta) strictly below x,
/// via the Sturm sequence of the LDLᵀ pivots.
fn sturm_count(alpha: &[f64], beta: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = alpha[0] - x;
    if d < 0.0 {
        count += 1;
    }
    for k in 1..alpha.len() {
        let b2 = beta[k - 1] * beta[k - 1];
        let denom = if d.abs() < 1e-300 { 1e-300f64.copysign(d) } else { d };
        d = alpha[k] - x - b2 / denom;
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// k-th smallest eigenvalue (k = 0 is the lowest) by bisection.
fn kth_smallest_eigenvalue(alpha: &[f64], beta: &[f64], k: usize) -> f64 {
    let m = alpha.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..m {
        let r = if i > 0 { beta[i - 1].abs() } else { 0.0 }
            + if i < m - 1 { beta[i].abs() } else { 0.0 };
        lo = lo.min(alpha[i] - r);
        hi = hi.max(alpha[i] + r);
    }
    lo -= 1e-12;
    hi += 1e-12;
    for _ in 0..120 {
        let mid = 0.5 * (lo + hi);
        if sturm_count(alpha, beta, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= f64::EPSILON * hi.abs().max(lo.abs()).max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Eigenvector of the tridiagonal for a known eigenvalue, by inverse
/// iteration with partially pivoted elimination. Deterministic start.
///
/// A shift this close to an eigenvalue makes the solve grow components by
/// ~1/ε, which is the point; the iterate is rescaled by its max-abs before
/// the 2-norm so nothing overflows. If the solve still degenerates (two
/// near-zero pivots), the shift is nudged and the iteration retried.
fn tridiag_eigvec(alpha: &[f64], beta: &[f64], lambda: f64) -> Vec<f64> {
    let m = alpha.len();
    if m == 1 {
        return vec![1.0];
    }
    let scale_ref = alpha
        .iter()
        .chain(beta.iter())
        .fold(1.0f64, |acc, x| acc.max(x.abs()));
    let start: Vec<f64> = (0..m).map(|i| 1.0 + 0.3 * ((i * 7919 + 13) % 17) as f64).collect();
    for attempt in 0..5 {
        let shift = lambda + scale_ref * 1e-14 * attempt as f64;
        let mut y = start.clone();
        let n0 = norm2(&y);
        scale(&mut y, 1.0 / n0);
        let mut ok = true;
        for _ in 0..3 {
            let mut z = solve_shifted_tridiag(alpha, beta, shift, &y);
            let mz = z.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
            if mz == 0.0 || !mz.is_finite() {
                ok = false;
                break;
            }
            scale(&mut z, 1.0 / mz);
            let nz = norm2(&z);
            scale(&mut z, 1.0 / nz);
            y = z;
        }
        if !ok {
            continue;
        }
        // Accept when the tridiagonal residual is small.
        let mut resid = 0.0f64;
        for i in 0..m {
            let mut r = (alpha[i] - lambda) * y[i];
            if i > 0 {
                r += beta[i - 1] * y[i - 1];
            }
            if i + 1 < m {
                r += beta[i] * y[i + 1];
            }
            resid += r * r;
        }
        if resid.sqrt() <= 1e-8 * scale_ref || attempt == 4 {
            return y;
        }
    }
    let mut y = start;
    let n0 = norm2(&y);
    scale(&mut y, 1.0 / n0);
    y
}

/// Solve (T − λI) z = r by Gaussian elimination with row pivoting (fill-in
/// on the second super-diagonal). Near-singular pivots are nudged, which is
/// exactly what inverse iteration wants.
fn solve_shifted_tridiag(alpha: &[f64], beta: &[f64], lambda: f64, r: &[f64]) -> Vec<f64> {
    let m = alpha.len();
    let mut d: Vec<f64> = alpha.iter().map(|a| a - lambda).collect();
    let mut du: Vec<f64> = beta.to_vec();
    let dl: Vec<f64> = beta.to_vec();
    let mut du2 = vec![0.0; m.saturating_sub(2)];
    let mut rhs = r.to_vec();

    let tiny = 1e-280;
    for k in 0..m - 1 {
        if d[k].abs() >= dl[k].abs() {
            let piv = if d[k].abs() < tiny { tiny.copysign(d[k]) } else { d[k] };
            let fact = dl[k] / piv;
            d[k + 1] -= fact * du[k];
            rhs[k + 1] -= fact * rhs[k];
        } else {
            // Swap rows k and k+1; the pivot row brings old du[k+1] into the
            // second super-diagonal.
            let fact = d[k] / dl[k];
            d[k] = dl[k];
            let temp = du[k];
            du[k] = d[k + 1];
            d[k + 1] = temp - fact * d[k + 1];
            if k + 2 < m {
                du2[k] = du[k + 1];
                du[k + 1] = -fact * du[k + 1];
            }
            rhs.swap(k, k + 1);
            rhs[k + 1] -= fact * rhs[k];
        }
    }

    let mut z = vec![0.0; m];
    let safe = |x: f64| if x.abs() < tiny { tiny.copysign(x) } else { x };
    z[m - 1] = rhs[m - 1] / safe(d[m - 1]);
    if m >= 2 {
        z[m - 2] = (rhs[m - 2] - du[m - 2] * z[m - 1]) / safe(d[m - 2]);
    }
    for k in (0..m.saturating_sub(2)).rev() {
        z[k] = (rhs[k] - du[k] * z[k + 1] - du2[k] * z[k + 2]) / safe(d[k]);
    }
    z
}

/// Small deterministic generator for tests elsewhere in the crate.
#[cfg(test)]
pub(crate) struct TestRng(u64);

#[cfg(test)]
pub(crate) fn test_rng(seed: u64) -> TestRng {
    TestRng(seed.wrapping_mul(0x9E3779B97F4A7C15).max(1))
}

#[cfg(test)]
impl TestRng {
    /// Uniform in [0, 1).
    pub fn next(&mut self) -> f64 {
        // xorshift64*
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        let v = x.wrapping_mul(0x2545F4914F6CDD1D);
        (v >> 11) as f64 / (1u64 << 53) as f64
    }
}
