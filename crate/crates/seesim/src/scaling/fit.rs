//! Least-squares fits for the SEE scaling law and correlator decay.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum BackendKind {
    Dense,
    Mps,
}

impl BackendKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BackendKind::Dense => "dense",
            BackendKind::Mps => "mps",
        }
    }
}

/// One (L, p, S_SE) observation.
#[derive(Debug, Clone, Copy)]
pub struct SeeSample {
    pub l: usize,
    pub p: f64,
    pub s_se: f64,
    pub backend: BackendKind,
    /// 0 for the dense backend.
    pub truncation_weight: f64,
}

/// Result of fitting `S_SE = α·L − s₀` over one size window.
#[derive(Debug, Clone, serde::Serialize)]
pub struct FitResult {
    /// Slope per site (non-universal).
    pub alpha: f64,
    /// Negated intercept: the universal size-independent term.
    pub s0: f64,
    pub residual_rms: f64,
    pub l_window: Vec<usize>,
    /// Standard error of the intercept; 0 when the fit is exact or has no
    /// spare degrees of freedom.
    pub s0_stderr: f64,
}

impl FitResult {
    /// The g-function `e^{s₀}`.
    pub fn g(&self) -> f64 {
        self.s0.exp()
    }
}

#[derive(Debug, Error)]
pub enum FitError {
    #[error("need at least {need} distinct points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("samples mix p values or backends")]
    MixedSamples,
    #[error("duplicate L = {l} with S_SE differing by {diff:.3e}")]
    InconsistentDuplicate { l: usize, diff: f64 },
    #[error("degenerate regressor: all x values equal")]
    DegenerateInput,
    #[error("collapse needs at least 3 system sizes, got {0}")]
    TooFewSizes(usize),
    #[error("scaled curves do not overlap; no quality could be evaluated")]
    InsufficientOverlap,
}

/// Plain least squares y = a·x + b. Returns (a, b, residual_rms, stderr_b).
fn ols(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64, f64), FitError> {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 * (n * sxx).abs().max(1e-300) {
        return Err(FitError::DegenerateInput);
    }
    let a = (n * sxy - sx * sy) / denom;
    let b = (sy - a * sx) / n;
    let ssr: f64 = xs.iter().zip(ys).map(|(x, y)| (y - a * x - b).powi(2)).sum();
    let rms = (ssr / n).sqrt();
    let stderr_b = if xs.len() > 2 {
        let s2 = ssr / (n - 2.0);
        (s2 * sxx / denom).max(0.0).sqrt()
    } else {
        0.0
    };
    Ok((a, b, rms, stderr_b))
}

/// Fit `S_SE = α·L − s₀` over samples taken at one fixed p with one backend.
///
/// Duplicate sizes must agree within 1e-9 and are averaged; at least three
/// distinct sizes are required.
pub fn fit_linear_s0(samples: &[SeeSample]) -> Result<FitResult, FitError> {
    if samples.is_empty() {
        return Err(FitError::TooFewPoints { need: 3, got: 0 });
    }
    let p0 = samples[0].p;
    let backend = samples[0].backend;
    if samples.iter().any(|s| (s.p - p0).abs() > 1e-12 || s.backend != backend) {
        return Err(FitError::MixedSamples);
    }
    let mut by_l: Vec<(usize, f64, usize)> = Vec::new();
    for s in samples {
        match by_l.iter_mut().find(|(l, _, _)| *l == s.l) {
            Some((l, acc, count)) => {
                let mean = *acc / *count as f64;
                let diff = (mean - s.s_se).abs();
                if diff > 1e-9 {
                    return Err(FitError::InconsistentDuplicate { l: *l, diff });
                }
                *acc += s.s_se;
                *count += 1;
            }
            None => by_l.push((s.l, s.s_se, 1)),
        }
    }
    if by_l.len() < 3 {
        return Err(FitError::TooFewPoints { need: 3, got: by_l.len() });
    }
    by_l.sort_by_key(|(l, _, _)| *l);
    let xs: Vec<f64> = by_l.iter().map(|(l, _, _)| *l as f64).collect();
    let ys: Vec<f64> = by_l.iter().map(|(_, acc, n)| acc / *n as f64).collect();
    let (alpha, intercept, residual_rms, stderr_b) = ols(&xs, &ys)?;
    Ok(FitResult {
        alpha,
        s0: -intercept,
        residual_rms,
        l_window: by_l.iter().map(|(l, _, _)| *l).collect(),
        s0_stderr: stderr_b,
    })
}

/// Least-squares line of `s₀` against `1/L_sd`; returns (slope, intercept),
/// the intercept being the L → ∞ estimate. Needs at least three windows.
pub fn extrapolate_s0(points: &[(f64, f64)]) -> Result<(f64, f64), FitError> {
    if points.len() < 3 {
        return Err(FitError::TooFewPoints { need: 3, got: points.len() });
    }
    let xs: Vec<f64> = points.iter().map(|(l_sd, _)| 1.0 / l_sd).collect();
    let ys: Vec<f64> = points.iter().map(|(_, s0)| *s0).collect();
    let (slope, intercept, _, _) = ols(&xs, &ys)?;
    Ok((slope, intercept))
}

/// Decay exponent η from `v ∝ r^{−η}` by log–log least squares.
///
/// Nonpositive values are filtered out first; at least four usable points
/// must remain. Distances should already be chord-mapped for periodic
/// chains (see [`chord_distance`]).
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<f64, FitError> {
    let usable: Vec<(f64, f64)> =
        points.iter().copied().filter(|&(r, v)| r > 0.0 && v > 0.0).collect();
    if usable.len() < 4 {
        return Err(FitError::TooFewPoints { need: 4, got: usable.len() });
    }
    let xs: Vec<f64> = usable.iter().map(|(r, _)| r.ln()).collect();
    let ys: Vec<f64> = usable.iter().map(|(_, v)| v.ln()).collect();
    let (slope, _, _, _) = ols(&xs, &ys)?;
    Ok(-slope)
}

/// Chord substitution `r → (L/π)·sin(πr/L)` for critical correlators on a
/// periodic chain.
pub fn chord_distance(l: usize, r: usize) -> f64 {
    let lf = l as f64;
    (lf / std::f64::consts::PI) * (std::f64::consts::PI * r as f64 / lf).sin()
}
