//! Finite-size-scaling collapse on planted synthetic curves.
//!
//! Curves are generated from a known master function with
//! (p_c, ν, ζ) = (0.44, 2.5, 0) and 0.5% multiplicative noise; the
//! optimizer has to find its way back from a deliberately bad start.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seesim::scaling::{
    collapse::collapse_quality, fss_collapse, CollapseBounds, CollapseParams, CurvePoint,
    SizeCurve,
};

fn main() {
    let (p_c, nu) = (0.44f64, 2.5f64);
    let g_master = |x: f64| 1.2 + 0.8 * (2.0 * x).tanh();
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    let curves: Vec<SizeCurve> = [8usize, 12, 16, 24]
        .iter()
        .map(|&l| {
            let lf = l as f64;
            let points = (0..=30)
                .map(|k| {
                    let p = 0.2 + 0.01 * k as f64;
                    let clean = g_master((p - p_c) * lf.powf(1.0 / nu));
                    let eps: f64 = rng.gen_range(-1.0..1.0);
                    CurvePoint {
                        p,
                        g: clean * (1.0 + 0.005 * eps),
                        sigma: (0.005 * clean).max(1e-4),
                    }
                })
                .collect();
            SizeCurve { l_sd: l, points }
        })
        .collect();

    let init = CollapseParams { p_c: 0.30, nu: 1.0, zeta: 0.3 };
    let bounds = CollapseBounds::for_curves(&curves);
    println!(
        "start ({:.2}, {:.2}, {:.2}) quality = {:.3}",
        init.p_c,
        init.nu,
        init.zeta,
        collapse_quality(&curves, &init)
    );
    let result = fss_collapse(&curves, &init, &bounds, 16, 7).unwrap();
    println!(
        "found (p_c, nu, zeta) = ({:.4}, {:.3}, {:+.4}), quality = {:.3}",
        result.p_c, result.nu, result.zeta, result.quality
    );
    println!("planted               = (0.4400, 2.500, +0.0000)");
    let best = result.restarts.iter().map(|r| r.evaluations).sum::<usize>();
    println!("{} restarts, {} quality evaluations total", result.restarts.len(), best);
}
