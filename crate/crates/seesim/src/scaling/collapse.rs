//! Finite-size-scaling collapse of g-function curves.
//!
//! Given per-size curves `(p, e^{s₀} ± σ)`, the ansatz
//! `e^{s₀} = L^{ζ/ν} g((p − p_c) L^{1/ν})` is optimized so all scaled points
//! fall on one master curve. The quality function follows the
//! Houdayer–Hartmann construction: every scaled point is compared against a
//! weighted local line through the bracketing points of the *other* sizes,
//! normalized by the propagated uncertainties, and the mean of those
//! normalized squared residuals is minimized by Nelder–Mead simplex descent
//! with seeded multi-start.

use super::fit::FitError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One curve point: decoherence strength, g-function value, uncertainty.
#[derive(Debug, Clone, Copy)]
pub struct CurvePoint {
    pub p: f64,
    pub g: f64,
    pub sigma: f64,
}

/// All points measured at one system size `l_sd`.
#[derive(Debug, Clone)]
pub struct SizeCurve {
    pub l_sd: usize,
    pub points: Vec<CurvePoint>,
}

#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct CollapseParams {
    pub p_c: f64,
    pub nu: f64,
    pub zeta: f64,
}

/// Box bounds for the three parameters.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct CollapseBounds {
    pub p_c: (f64, f64),
    pub nu: (f64, f64),
    pub zeta: (f64, f64),
}

impl CollapseBounds {
    /// Default windows: p_c inside the data range, ν ∈ [0.5, 6], ζ ∈ ±0.5.
    pub fn for_curves(curves: &[SizeCurve]) -> Self {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for c in curves {
            for pt in &c.points {
                lo = lo.min(pt.p);
                hi = hi.max(pt.p);
            }
        }
        CollapseBounds { p_c: (lo, hi), nu: (0.5, 6.0), zeta: (-0.5, 0.5) }
    }

    fn clamp(&self, x: &mut [f64; 3]) {
        x[0] = x[0].clamp(self.p_c.0, self.p_c.1);
        x[1] = x[1].clamp(self.nu.0, self.nu.1);
        x[2] = x[2].clamp(self.zeta.0, self.zeta.1);
    }
}

/// Summary of one optimizer restart, kept as the trace of the search.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RestartTrace {
    pub start: [f64; 3],
    pub end: [f64; 3],
    pub quality: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct CollapseResult {
    pub p_c: f64,
    pub nu: f64,
    pub zeta: f64,
    /// Mean normalized squared deviation from the master curve; ~1 means
    /// deviations compatible with the stated uncertainties.
    pub quality: f64,
    pub restarts: Vec<RestartTrace>,
}

struct ScaledPoint {
    size_index: usize,
    x: f64,
    y: f64,
    dy2: f64,
}

/// Master-curve quality S(p_c, ν, ζ); lower is better. Infinite when no
/// point has bracketing neighbors from other sizes.
pub fn collapse_quality(curves: &[SizeCurve], params: &CollapseParams) -> f64 {
    let mut scaled: Vec<ScaledPoint> = Vec::new();
    for (k, curve) in curves.iter().enumerate() {
        let l = curve.l_sd as f64;
        let lx = l.powf(1.0 / params.nu);
        let ly = l.powf(-params.zeta / params.nu);
        for pt in &curve.points {
            let dy = pt.sigma * ly;
            scaled.push(ScaledPoint {
                size_index: k,
                x: (pt.p - params.p_c) * lx,
                y: pt.g * ly,
                dy2: dy * dy,
            });
        }
    }

    let mut total = 0.0;
    let mut used = 0usize;
    for pt in &scaled {
        // Bracketing points from every other size: nearest left and right.
        let mut neighbors: Vec<&ScaledPoint> = Vec::new();
        let mut has_left = false;
        let mut has_right = false;
        for k in 0..curves.len() {
            if k == pt.size_index {
                continue;
            }
            let mut left: Option<&ScaledPoint> = None;
            let mut right: Option<&ScaledPoint> = None;
            for other in scaled.iter().filter(|o| o.size_index == k) {
                if other.x <= pt.x {
                    if left.map_or(true, |l| other.x > l.x) {
                        left = Some(other);
                    }
                } else if right.map_or(true, |r| other.x < r.x) {
                    right = Some(other);
                }
            }
            if let Some(l) = left {
                neighbors.push(l);
                has_left = true;
            }
            if let Some(r) = right {
                neighbors.push(r);
                has_right = true;
            }
        }
        if !has_left || !has_right || neighbors.len() < 2 {
            continue;
        }
        // Weighted local line through the neighbors.
        let mut kw = 0.0;
        let mut kx = 0.0;
        let mut ky = 0.0;
        let mut kxx = 0.0;
        let mut kxy = 0.0;
        for n in &neighbors {
            let w = 1.0 / n.dy2.max(1e-300);
            kw += w;
            kx += w * n.x;
            ky += w * n.y;
            kxx += w * n.x * n.x;
            kxy += w * n.x * n.y;
        }
        let delta = kw * kxx - kx * kx;
        let (yhat, dy2hat) = if delta.abs() < 1e-14 * kw * kxx.max(1e-300) {
            // Neighbors collinear in x: fall back to the weighted mean.
            (ky / kw, 1.0 / kw)
        } else {
            let a = (kw * kxy - kx * ky) / delta;
            let b = (kxx * ky - kx * kxy) / delta;
            let var = (kxx - 2.0 * pt.x * kx + pt.x * pt.x * kw) / delta;
            (a * pt.x + b, var.max(0.0))
        };
        total += (pt.y - yhat).powi(2) / (pt.dy2 + dy2hat).max(1e-300);
        used += 1;
    }
    if used == 0 {
        return f64::INFINITY;
    }
    total / used as f64
}

/// Nelder–Mead on the clamped box. Returns (best point, best value, evals).
fn nelder_mead<F: FnMut(&[f64; 3]) -> f64>(
    mut f: F,
    start: [f64; 3],
    scale: [f64; 3],
    bounds: &CollapseBounds,
    max_iter: usize,
) -> ([f64; 3], f64, usize) {
    let mut evals = 0usize;
    let mut eval = |x: &[f64; 3], evals: &mut usize| {
        *evals += 1;
        f(x)
    };

    let mut simplex: Vec<[f64; 3]> = vec![start];
    for d in 0..3 {
        let mut v = start;
        v[d] += scale[d];
        bounds.clamp(&mut v);
        // Degenerate vertex (start on the boundary): step the other way.
        if (v[d] - start[d]).abs() < 1e-12 * scale[d].abs().max(1e-12) {
            v[d] = start[d] - scale[d];
            bounds.clamp(&mut v);
        }
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| eval(x, &mut evals)).collect();

    for _ in 0..max_iter {
        let mut order: Vec<usize> = (0..simplex.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let best = order[0];
        let worst = order[3];
        let second_worst = order[2];

        if (values[worst] - values[best]).abs() <= 1e-12 * (1.0 + values[best].abs()) {
            break;
        }

        let mut centroid = [0.0f64; 3];
        for &i in &order[..3] {
            for d in 0..3 {
                centroid[d] += simplex[i][d] / 3.0;
            }
        }

        let mut reflected = [0.0f64; 3];
        for d in 0..3 {
            reflected[d] = centroid[d] + (centroid[d] - simplex[worst][d]);
        }
        bounds.clamp(&mut reflected);
        let fr = eval(&reflected, &mut evals);

        if fr < values[best] {
            let mut expanded = [0.0f64; 3];
            for d in 0..3 {
                expanded[d] = centroid[d] + 2.0 * (centroid[d] - simplex[worst][d]);
            }
            bounds.clamp(&mut expanded);
            let fe = eval(&expanded, &mut evals);
            if fe < fr {
                simplex[worst] = expanded;
                values[worst] = fe;
            } else {
                simplex[worst] = reflected;
                values[worst] = fr;
            }
        } else if fr < values[second_worst] {
            simplex[worst] = reflected;
            values[worst] = fr;
        } else {
            let mut contracted = [0.0f64; 3];
            for d in 0..3 {
                contracted[d] = centroid[d] + 0.5 * (simplex[worst][d] - centroid[d]);
            }
            bounds.clamp(&mut contracted);
            let fc = eval(&contracted, &mut evals);
            if fc < values[worst] {
                simplex[worst] = contracted;
                values[worst] = fc;
            } else {
                // Shrink toward the best vertex.
                for i in 0..simplex.len() {
                    if i == best {
                        continue;
                    }
                    for d in 0..3 {
                        simplex[i][d] = simplex[best][d] + 0.5 * (simplex[i][d] - simplex[best][d]);
                    }
                    values[i] = eval(&simplex[i].clone(), &mut evals);
                }
            }
        }
    }

    let mut best = 0;
    for i in 1..values.len() {
        if values[i] < values[best] {
            best = i;
        }
    }
    (simplex[best], values[best], evals)
}

/// Collapse `curves` onto one master curve.
///
/// Runs `restarts` Nelder–Mead descents (the first from `init`, the rest
/// from seeded uniform draws inside the bounds) and keeps the best quality;
/// ties break toward lower p_c, then lower ν.
pub fn fss_collapse(
    curves: &[SizeCurve],
    init: &CollapseParams,
    bounds: &CollapseBounds,
    restarts: usize,
    seed: u64,
) -> Result<CollapseResult, FitError> {
    if curves.len() < 3 {
        return Err(FitError::TooFewSizes(curves.len()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut traces: Vec<RestartTrace> = Vec::new();
    let mut best: Option<([f64; 3], f64)> = None;

    let scale = [
        0.1 * (bounds.p_c.1 - bounds.p_c.0).max(1e-6),
        0.1 * (bounds.nu.1 - bounds.nu.0),
        0.1 * (bounds.zeta.1 - bounds.zeta.0),
    ];

    for k in 0..restarts.max(1) {
        let mut start = if k == 0 {
            [init.p_c, init.nu, init.zeta]
        } else {
            [
                rng.gen_range(bounds.p_c.0..=bounds.p_c.1),
                rng.gen_range(bounds.nu.0..=bounds.nu.1),
                rng.gen_range(bounds.zeta.0..=bounds.zeta.1),
            ]
        };
        bounds.clamp(&mut start);
        let quality_fn = |x: &[f64; 3]| {
            collapse_quality(curves, &CollapseParams { p_c: x[0], nu: x[1], zeta: x[2] })
        };
        let (end, q, evals) = nelder_mead(quality_fn, start, scale, bounds, 400);
        traces.push(RestartTrace { start, end, quality: q, evaluations: evals });
        let better = match &best {
            None => true,
            Some((bx, bq)) => {
                q < bq - 1e-12
                    || ((q - bq).abs() <= 1e-12
                        && (end[0] < bx[0] - 1e-15
                            || ((end[0] - bx[0]).abs() <= 1e-15 && end[1] < bx[1])))
            }
        };
        if better {
            best = Some((end, q));
        }
    }

    let (x, q) = best.unwrap();
    if !q.is_finite() {
        return Err(FitError::InsufficientOverlap);
    }
    Ok(CollapseResult { p_c: x[0], nu: x[1], zeta: x[2], quality: q, restarts: traces })
}
