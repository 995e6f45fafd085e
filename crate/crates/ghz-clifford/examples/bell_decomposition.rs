//! Every tripartite stabilizer state is GHZ states plus Bell pairs plus
//! local junk. This example takes a few states apart and checks the
//! bookkeeping identities that tie the pieces to entropies:
//!
//!   S(A)    = g3 + n_ab + n_ac
//!   I(A:C)  = g3 + 2 n_ac
//!   N       = 3 g3 + 2 (n_ab + n_bc + n_ac) + local qubits

use ghz_clifford::circuit::{run_trajectory, CircuitConfig, ObservableSet, Recording};
use ghz_clifford::entanglement::{bell_counts, entanglement_entropy, mutual_information};
use ghz_clifford::partition::Partition;
use ghz_clifford::pauli::PauliString;
use ghz_clifford::tableau::StabilizerTableau;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn state(symbols: &[&str]) -> StabilizerTableau {
    let gens: Vec<PauliString> = symbols
        .iter()
        .map(|s| PauliString::from_symbols(s).unwrap())
        .collect();
    StabilizerTableau::from_generators(&gens).unwrap()
}

fn describe(label: &str, t: &StabilizerTableau, part: &Partition) {
    let dec = bell_counts(t, part).unwrap();
    let s_a = entanglement_entropy(t, &part.party_qubits(0)).unwrap();
    let i_ac = mutual_information(t, &part.party_qubits(0), &part.party_qubits(2)).unwrap();
    println!(
        "{label:24} g3 = {}, bell (ab, bc, ac) = {:?}, local dims = {:?}",
        dec.ghz, dec.bell, dec.local_dims
    );
    assert_eq!(s_a, dec.ghz + dec.bell_ab() + dec.bell_ac());
    assert_eq!(i_ac, dec.ghz + 2 * dec.bell_ac());
}

fn main() {
    // GHZ on three qubits, one per party
    let ghz = state(&["+XXX", "+ZZI", "+IZZ"]);
    describe("GHZ(3)", &ghz, &Partition::new(vec![0, 1, 2]).unwrap());

    // two Bell pairs bridging A-B and B-C
    let ladder = state(&["+XXII", "+ZZII", "+IIXX", "+IIZZ"]);
    describe(
        "Bell ladder",
        &ladder,
        &Partition::new(vec![0, 1, 1, 2]).unwrap(),
    );

    // deep monitored circuit snapshot
    let n = 18;
    let cfg = CircuitConfig {
        depth_layers: 2 * n,
        ..CircuitConfig::new(n, 0.1)
    };
    let part = Partition::config1_fraction(n, 1.0 / 3.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    // run and then rebuild the final state for inspection
    let mut t = StabilizerTableau::new_product_state(n).unwrap();
    for _ in 0..cfg.depth_layers {
        for parity in 0..2 {
            ghz_clifford::circuit::step_level(&mut t, &cfg, parity, &mut rng).unwrap();
        }
    }
    describe("monitored snapshot", &t, &part);

    // a four-party ring split merges into a tripartite split
    let rec = Recording::default();
    let out = run_trajectory(
        &CircuitConfig::new(8, 0.2),
        &[Partition::from_ratios(8, &[1, 3, 1, 3]).unwrap()],
        &ObservableSet::all(),
        &rec,
        &mut ChaCha8Rng::seed_from_u64(4),
    )
    .unwrap();
    let last = out.layer_values(out.layers.len() - 1);
    println!(
        "four-party run, final layer: g4 = {}, party entropies = {:?}",
        last[0],
        &last[1..5]
    );
}
