//! The mean GHZ count of a uniformly random stabilizer state has a closed
//! form upper bound. Deep unmeasured circuits scramble to exactly that
//! ensemble, so the measured plateau must sit below the bound, and does:
//! near log2(3) when no party dominates, zero when one does.

use ghz_clifford::circuit::CircuitConfig;
use ghz_clifford::ensemble::{run_ensemble, EnsembleSpec};
use ghz_clifford::oracle::typicality_bound;
use ghz_clifford::partition::Partition;

fn main() {
    println!("closed form, large N:");
    for (n, sizes) in [
        (300usize, [100usize, 100, 100]),
        (300, [150, 75, 75]),
        (300, [170, 65, 65]),
    ] {
        let b = typicality_bound(n, sizes).unwrap();
        println!("  N = {n}, parties {sizes:?}: bound = {b:.4}");
    }
    println!("  (log2 3 = {:.4})\n", 3f64.log2());

    let n = 12;
    let trajectories = 400;
    println!("measured plateau vs bound at N = {n} (depth 4N, no measurements):");
    for sizes in [[4usize, 4, 4], [8, 2, 2]] {
        let bound = typicality_bound(n, sizes).unwrap();
        let part = Partition::from_blocks(&sizes).unwrap();
        let mut cfg = CircuitConfig::new(n, 0.0);
        cfg.depth_layers = 4 * n;
        cfg.seed = 77;
        let spec = EnsembleSpec::steady(cfg, vec![part], trajectories);
        let r = run_ensemble(&spec, 0).unwrap();
        let g = r.channel(0, "g3").unwrap();
        println!(
            "  parties {sizes:?}: <g3> = {:.3} +- {:.3} <= {bound:.3}",
            g.mean[0], g.stderr[0]
        );
        assert!(g.mean[0] <= bound + 3.0 * g.stderr[0]);
    }
}
