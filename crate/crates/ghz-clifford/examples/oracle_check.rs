//! Runs the tableau engine and a dense statevector side by side on the same
//! random circuit, consuming the same random stream, and cross-checks GHZ
//! counts (four independent computations), entropies, mutual information,
//! Bell identities, and every measurement probability after every layer.

use ghz_clifford::circuit::{Boundary, CircuitConfig};
use ghz_clifford::oracle::run_mirrored_trajectory;
use ghz_clifford::partition::Partition;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let n = 8;
    let cfg = CircuitConfig {
        boundary: Boundary::Periodic,
        depth_layers: 10,
        ..CircuitConfig::new(n, 0.2)
    };
    let partitions = vec![
        Partition::config1_fraction(n, 1.0 / 3.0).unwrap(),
        Partition::from_blocks(&[4, 4]).unwrap(),
        Partition::from_ratios(n, &[1, 1, 1, 1]).unwrap(),
    ];
    let mut total = 0;
    for k in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        rng.set_stream(k);
        let report = run_mirrored_trajectory(&cfg, &partitions, &mut rng).unwrap();
        total += report.comparisons;
        println!(
            "trajectory {k}: {} comparisons, all agree",
            report.comparisons
        );
    }
    println!("\n{total} checks passed");
}
