//! Locating the measurement-induced transition by data collapse.
//!
//! Sweeps the measurement rate across the entangling/disentangling
//! transition for several chain lengths, then fits the scaling form
//! g3(p, N) = F((p - p_c) N^{1/nu}). Small sizes keep this example quick;
//! expect p_c near 0.16 with generous error bars.

use ghz_clifford::circuit::CircuitConfig;
use ghz_clifford::ensemble::{run_ensemble, EnsembleSpec};
use ghz_clifford::partition::Partition;
use ghz_clifford::scaling::{
    collapse, crossing_estimate, CollapseOptions, ScalingCurveSet, SizeCurve,
};

fn main() {
    let sizes = [12usize, 16, 20, 24];
    let ps: Vec<f64> = (0..9).map(|i| 0.08 + 0.02 * i as f64).collect();
    let trajectories = 250;

    let mut curves = Vec::new();
    for &n in &sizes {
        let part = Partition::config1_fraction(n, 1.0 / 3.0).unwrap();
        let mut y = Vec::new();
        let mut s = Vec::new();
        for &p in &ps {
            let mut cfg = CircuitConfig::new(n, p);
            cfg.seed = 1400 + n as u64;
            let spec = EnsembleSpec::steady(cfg, vec![part.clone()], trajectories);
            let r = run_ensemble(&spec, 0).unwrap();
            let g = r.channel(0, "g3").unwrap();
            y.push(g.mean[0]);
            s.push(g.stderr[0]);
        }
        println!(
            "N = {n:2}: g3 = [{}]",
            y.iter()
                .map(|v| format!("{v:.2}"))
                .collect::<Vec<_>>()
                .join(", ")
        );
        curves.push(SizeCurve::new(n, ps.clone(), y, s).unwrap());
    }

    let set = ScalingCurveSet::new(curves).unwrap();
    if let Some(xc) = crossing_estimate(&set) {
        println!("\ncurves cross near p = {xc:.3}");
    }
    let fit = collapse(&set, &CollapseOptions::default()).unwrap();
    println!(
        "collapse: p_c = {:.3} +- {:.3}, 1/nu = {:.2} +- {:.2}, quality = {:.2}",
        fit.critical_value,
        fit.critical_uncertainty,
        fit.inv_exponent,
        fit.inv_exponent_uncertainty,
        fit.quality
    );
}
