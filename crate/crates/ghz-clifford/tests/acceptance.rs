//! Full-pipeline verification gates at reduced scale: dense-oracle
//! equivalence, the measurement-driven and partitioning-driven transitions,
//! dynamical birth/death of the GHZ plateau, four-party structure at
//! criticality, the typicality bound, and a randomized invariant sweep.
//!
//! Every test prints one PASS/FAIL line; run with
//! `cargo test --test acceptance -- --nocapture` to see them all. Seeds are
//! pinned so each gate is reproducible; tolerance bands account for the
//! reduced trajectory counts.

use ghz_clifford::circuit::{step_level, Boundary, CircuitConfig, ObservableSet};
use ghz_clifford::clifford::TwoQubitClifford;
use ghz_clifford::config::{ComboMeta, ExperimentConfig};
use ghz_clifford::ensemble::{
    birth_death_times, birth_death_times_at, run_ensemble, EnsembleResult, EnsembleSpec,
};
use ghz_clifford::entanglement::{
    bell_counts, entanglement_entropy, ghz_index, mutual_information,
};
use ghz_clifford::oracle::{run_mirrored_trajectory, typicality_bound};
use ghz_clifford::partition::Partition;
use ghz_clifford::scaling::{collapse, linear_fit, CollapseOptions, ScalingCurveSet, SizeCurve};
use ghz_clifford::tableau::StabilizerTableau;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn gate<F>(name: &str, body: F)
where
    F: FnOnce() -> (bool, String) + std::panic::UnwindSafe,
{
    match std::panic::catch_unwind(body) {
        Ok((ok, detail)) => {
            println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
            assert!(ok, "{name}: {detail}");
        }
        Err(e) => {
            println!("FAIL {name}: aborted mid-check");
            std::panic::resume_unwind(e);
        }
    }
}

/// Expands a sweep description and runs every combination in order.
fn run_sweep(toml: &str) -> Vec<(ComboMeta, EnsembleResult)> {
    ExperimentConfig::from_toml(toml)
        .unwrap()
        .expand(None)
        .unwrap()
        .into_iter()
        .map(|(meta, spec)| {
            let r = run_ensemble(&spec, 0).unwrap();
            (meta, r)
        })
        .collect()
}

fn find<'a>(
    results: &'a [(ComboMeta, EnsembleResult)],
    n: usize,
    p: f64,
    param: f64,
) -> &'a (ComboMeta, EnsembleResult) {
    results
        .iter()
        .find(|(m, _)| {
            m.n_qubits == n && (m.meas_prob - p).abs() < 1e-9 && (m.parameter - param).abs() < 1e-9
        })
        .unwrap_or_else(|| panic!("no combination N={n} p={p} param={param}"))
}

fn steady_mean(r: &EnsembleResult, name: &str) -> (f64, f64) {
    let ch = r.channel(0, name).unwrap();
    (ch.mean[0], ch.stderr[0])
}

/// Steady point with the same error floor the file-backed curve reader
/// applies: a sample spread of exactly zero would otherwise dominate the
/// weighted collapse.
fn steady_point(r: &EnsembleResult, name: &str) -> (f64, f64) {
    let (m, e) = steady_mean(r, name);
    (m, e.max(1.0 / r.n_trajectories as f64))
}

#[test]
fn tableau_matches_dense_oracle_across_rates() {
    gate("tableau_matches_dense_oracle_across_rates", || {
        let started = Instant::now();
        let partitions = vec![
            Partition::config1_fraction(8, 1.0 / 3.0).unwrap(),
            Partition::from_blocks(&[4, 4]).unwrap(),
            Partition::from_ratios(8, &[1, 1, 1, 1]).unwrap(),
        ];
        let mut comparisons = 0usize;
        for (pi, &p) in [0.0, 0.1, 0.3].iter().enumerate() {
            let cfg = CircuitConfig {
                depth_layers: 8,
                ..CircuitConfig::new(8, p)
            };
            for k in 0..200u64 {
                let mut rng = ChaCha8Rng::seed_from_u64(2001 + pi as u64);
                rng.set_stream(k);
                let report = run_mirrored_trajectory(&cfg, &partitions, &mut rng)
                    .unwrap_or_else(|e| panic!("p={p} trajectory {k}: {e}"));
                comparisons += report.comparisons;
            }
        }
        let elapsed = started.elapsed();
        (
            elapsed.as_secs_f64() < 120.0,
            format!(
                "600 trajectories, 3- / 2- / 4-party counts, entropies, I(A:C), \
                 {comparisons} comparisons in {elapsed:.2?} (cap 120s)"
            ),
        )
    });
}

#[test]
fn volume_law_plateau_is_size_independent() {
    gate("volume_law_plateau_is_size_independent", || {
        let started = Instant::now();
        let results = run_sweep(
            r#"
[circuit]
n_qubits = [24, 48]
meas_prob = 0.05

[partition]
config = "config1"
parameter = 0.3333333333333333

[ensemble]
trajectories = 2000
mode = "steady"
observables = ["ghz"]
seed = 2002
"#,
        );
        let (g24, e24) = steady_mean(&find(&results, 24, 0.05, 1.0 / 3.0).1, "g3");
        let (g48, e48) = steady_mean(&find(&results, 48, 0.05, 1.0 / 3.0).1, "g3");
        let elapsed = started.elapsed();
        let in_band = (1.10..=1.40).contains(&g24) && (1.10..=1.40).contains(&g48);
        let flat = (g24 - g48).abs() < 0.15;
        (
            in_band && flat && elapsed.as_secs_f64() < 600.0,
            format!(
                "g3 = {g24:.4}+-{e24:.4} (N=24), {g48:.4}+-{e48:.4} (N=48), \
                 band [1.10, 1.40], |diff| = {:.4} < 0.15, {elapsed:.2?} (cap 600s)",
                (g24 - g48).abs()
            ),
        )
    });
}

#[test]
fn measurement_transition_location_and_exponent() {
    gate("measurement_transition_location_and_exponent", || {
        let started = Instant::now();
        let results = run_sweep(
            r#"
[circuit]
n_qubits = [24, 48, 96]
meas_prob = [0.08, 0.1, 0.12, 0.14, 0.16, 0.18, 0.2, 0.22, 0.24]

[partition]
config = "config1"
parameter = 0.3333333333333333

[ensemble]
trajectories = 1000
mode = "steady"
observables = ["ghz"]
seed = 2003
"#,
        );
        let mut curves = Vec::new();
        for &n in &[24usize, 48, 96] {
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            let mut ss = Vec::new();
            for (meta, r) in results.iter().filter(|(m, _)| m.n_qubits == n) {
                let (m, e) = steady_point(r, "g3");
                xs.push(meta.meas_prob);
                ys.push(m);
                ss.push(e);
            }
            curves.push(SizeCurve::new(n, xs, ys, ss).unwrap());
        }
        let set = ScalingCurveSet::new(curves).unwrap();
        let fit = collapse(&set, &CollapseOptions::default()).unwrap();
        let elapsed = started.elapsed();
        let ok = (0.14..=0.18).contains(&fit.critical_value)
            && (0.5..=1.1).contains(&fit.inv_exponent)
            && elapsed.as_secs_f64() < 3600.0;
        (
            ok,
            format!(
                "p_c = {:.4}+-{:.4} (band [0.14, 0.18]), 1/nu = {:.3}+-{:.3} \
                 (band [0.5, 1.1]), quality {:.2}, {elapsed:.2?} (cap 1h)",
                fit.critical_value,
                fit.critical_uncertainty,
                fit.inv_exponent,
                fit.inv_exponent_uncertainty,
                fit.quality
            ),
        )
    });
}

#[test]
fn partitioning_transition_at_half_fraction() {
    gate("partitioning_transition_at_half_fraction", || {
        let started = Instant::now();
        let plateau = run_sweep(
            r#"
[circuit]
n_qubits = [24, 48, 96]
meas_prob = 0.0

[partition]
config = "config1"
parameter = [0.3333333333333333, 0.6666666666666666]

[ensemble]
trajectories = 600
mode = "steady"
observables = ["ghz"]
seed = 2103
"#,
        );
        let (g_third, _) = steady_mean(&find(&plateau, 96, 0.0, 1.0 / 3.0).1, "g3");
        let (g_two_thirds, _) = steady_mean(&find(&plateau, 96, 0.0, 2.0 / 3.0).1, "g3");

        // the transition narrows as 1/N, so a fraction grid shared across
        // sizes leaves the larger chains with no points on the slope; each
        // size instead gets middle blocks N/2 + u for the same offsets u
        let grids = [
            r#"
[circuit]
n_qubits = 24
meas_prob = 0.0

[partition]
config = "config1"
parameter = [0.25, 0.3333333333333333, 0.4166666666666667, 0.5, 0.5833333333333334, 0.6666666666666666, 0.75]

[ensemble]
trajectories = 800
mode = "steady"
observables = ["ghz"]
seed = 2104
"#,
            r#"
[circuit]
n_qubits = 48
meas_prob = 0.0

[partition]
config = "config1"
parameter = [0.375, 0.4166666666666667, 0.4583333333333333, 0.5, 0.5416666666666666, 0.5833333333333334, 0.625]

[ensemble]
trajectories = 800
mode = "steady"
observables = ["ghz"]
seed = 2105
"#,
            r#"
[circuit]
n_qubits = 96
meas_prob = 0.0

[partition]
config = "config1"
parameter = [0.4375, 0.4583333333333333, 0.4791666666666667, 0.5, 0.5208333333333334, 0.5416666666666666, 0.5625]

[ensemble]
trajectories = 800
mode = "steady"
observables = ["ghz"]
seed = 2106
"#,
        ];
        let mut curves = Vec::new();
        for toml in &grids {
            let results = run_sweep(toml);
            let n = results[0].0.n_qubits;
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            let mut ss = Vec::new();
            for (meta, r) in &results {
                let part = Partition::config1_fraction(n, meta.parameter).unwrap();
                let realized = part.party_sizes()[1] as f64 / n as f64;
                let (m, e) = steady_point(r, "g3");
                xs.push(realized);
                ys.push(m);
                ss.push(e);
            }
            curves.push(SizeCurve::new(n, xs, ys, ss).unwrap());
        }
        let set = ScalingCurveSet::new(curves).unwrap();
        let opts = CollapseOptions {
            fix_critical: Some(0.5),
            ..Default::default()
        };
        let fit = collapse(&set, &opts).unwrap();
        let mu = fit.exponent();
        let mu_err = fit.inv_exponent_uncertainty * mu * mu;
        let elapsed = started.elapsed();
        let ok = g_two_thirds < 0.1 && g_third > 1.0 && (0.7..=1.3).contains(&mu);
        (
            ok,
            format!(
                "N=96: g3(2/3) = {g_two_thirds:.4} < 0.1, g3(1/3) = {g_third:.4} > 1.0; \
                 pinned n_B^cr = 1/2 gives mu = {mu:.3}+-{mu_err:.3} (band [0.7, 1.3]), \
                 {elapsed:.2?}"
            ),
        )
    });
}

#[test]
fn early_measurements_remove_the_partitioning_transition() {
    gate(
        "early_measurements_remove_the_partitioning_transition",
        || {
            let started = Instant::now();
            let results = run_sweep(
                r#"
[circuit]
n_qubits = 96
meas_prob = [0.0, 0.02]

[partition]
config = "config2"
parameter = 0.6666666666666666

[ensemble]
trajectories = 600
mode = "steady"
observables = ["ghz"]
seed = 2005
"#,
            );
            let (g_unitary, _) = steady_mean(&find(&results, 96, 0.0, 2.0 / 3.0).1, "g3");
            let (g_monitored, e_m) = steady_mean(&find(&results, 96, 0.02, 2.0 / 3.0).1, "g3");
            let elapsed = started.elapsed();
            (
                g_monitored > 0.3 && g_unitary < 0.1,
                format!(
                    "majority leading party at N=96: g3 = {g_monitored:.4}+-{e_m:.4} > 0.3 \
                 at p=0.02 but {g_unitary:.4} < 0.1 at p=0, {elapsed:.2?}"
                ),
            )
        },
    );
}

#[test]
fn transient_ghz_birth_and_death_collapse_in_rescaled_time() {
    gate(
        "transient_ghz_birth_and_death_collapse_in_rescaled_time",
        || {
            let started = Instant::now();
            let results = run_sweep(
                r#"
[circuit]
n_qubits = [24, 48, 96]
meas_prob = 0.0

[partition]
config = "config2"
parameter = 0.6

[ensemble]
trajectories = 400
mode = "dynamics"
observables = ["ghz"]
seed = 2006
"#,
            );
            let mut births = Vec::new();
            let mut deaths = Vec::new();
            let mut finals = Vec::new();
            for &n in &[24usize, 48, 96] {
                let (_, r) = find(&results, n, 0.0, 0.6);
                let ch = r.channel(0, "g3").unwrap();
                let taus: Vec<f64> = (0..r.layers.len()).map(|s| r.tau(s)).collect();
                let life = birth_death_times(&taus, &ch.mean);
                births.push(life.birth);
                deaths.push(life.death);
                finals.push(*ch.mean.last().unwrap());
            }
            let all_finite =
                births.iter().all(|b| b.is_some()) && deaths.iter().all(|d| d.is_some());
            let all_die = finals.iter().all(|&f| f < 0.1);
            let (birth_spread, death_spread) = if all_finite {
                (
                    (births[1].unwrap() - births[2].unwrap()).abs(),
                    (deaths[1].unwrap() - deaths[2].unwrap()).abs(),
                )
            } else {
                (f64::NAN, f64::NAN)
            };
            let elapsed = started.elapsed();
            (
            all_finite && all_die && birth_spread < 0.15 && death_spread < 0.15,
            format!(
                "births {:?}, deaths {:?}, final g3 {:?}; two largest sizes differ by \
                 {birth_spread:.4} (birth) and {death_spread:.4} (death), both < 0.15, {elapsed:.2?}",
                births
                    .iter()
                    .map(|b| b.map(|v| (v * 1e4).round() / 1e4))
                    .collect::<Vec<_>>(),
                deaths
                    .iter()
                    .map(|d| d.map(|v| (v * 1e4).round() / 1e4))
                    .collect::<Vec<_>>(),
                finals.iter().map(|v| (v * 1e4).round() / 1e4).collect::<Vec<_>>()
            ),
        )
        },
    );
}

#[test]
fn birth_times_scale_linearly_with_middle_fraction() {
    gate("birth_times_scale_linearly_with_middle_fraction", || {
        let started = Instant::now();
        let fractions = [1.0 / 6.0, 0.25, 1.0 / 3.0, 0.4166666666666667];
        let results = run_sweep(
            r#"
[circuit]
n_qubits = 96
meas_prob = [0.0, 0.05]

[partition]
config = "config1"
parameter = [0.16666666666666666, 0.25, 0.3333333333333333, 0.4166666666666667]

[ensemble]
trajectories = 400
mode = "dynamics"
observables = ["ghz"]
seed = 2007
"#,
        );
        // crossings are read at a fixed absolute level: an adaptive threshold
        // would move with the plateau, which measurements raise, skewing the
        // comparison where the shift is smallest
        let birth_at = |p: f64, f: f64| -> f64 {
            let (_, r) = find(&results, 96, p, f);
            let ch = r.channel(0, "g3").unwrap();
            let taus: Vec<f64> = (0..r.layers.len()).map(|s| r.tau(s)).collect();
            birth_death_times_at(&taus, &ch.mean, 0.5)
                .birth
                .unwrap_or_else(|| panic!("no birth at p={p} f={f}"))
        };
        let unitary: Vec<f64> = fractions.iter().map(|&f| birth_at(0.0, f)).collect();
        let monitored: Vec<f64> = fractions.iter().map(|&f| birth_at(0.05, f)).collect();
        let (slope, intercept, r2) = linear_fit(&fractions, &unitary).unwrap();
        let all_earlier = unitary.iter().zip(&monitored).all(|(b, a)| a < b);
        let elapsed = started.elapsed();
        (
            r2 > 0.9 && all_earlier,
            format!(
                "tau_birth = {slope:.3} * n_B/N + {intercept:.4} with R^2 = {r2:.5} > 0.9; \
                 raising p to 0.05 moves every birth earlier ({:?} -> {:?}), {elapsed:.2?}",
                unitary
                    .iter()
                    .map(|v| (v * 1e3).round() / 1e3)
                    .collect::<Vec<_>>(),
                monitored
                    .iter()
                    .map(|v| (v * 1e3).round() / 1e3)
                    .collect::<Vec<_>>()
            ),
        )
    });
}

#[test]
fn four_party_ghz_peaks_at_criticality() {
    gate("four_party_ghz_peaks_at_criticality", || {
        let started = Instant::now();
        let results = run_sweep(
            r#"
[circuit]
n_qubits = 96
meas_prob = [0.08, 0.16, 0.24]

[partition]
config = "custom"
ratios = [1, 2, 2, 1]

[ensemble]
trajectories = 1000
mode = "steady"
observables = ["ghz"]
seed = 2008
"#,
        );
        let g4 = |p: f64| steady_mean(&find(&results, 96, p, -1.0).1, "g4").0;
        let (low, critical, high) = (g4(0.08), g4(0.16), g4(0.24));
        let elapsed = started.elapsed();
        (
            critical > 3.0 * low && critical > 3.0 * high && critical > 0.0,
            format!(
                "g4 = {low:.5} (p=0.08), {critical:.5} (p=0.16), {high:.5} (p=0.24); \
                 critical value exceeds 3x both flanks, {elapsed:.2?}"
            ),
        )
    });
}

#[test]
fn mutual_information_decomposes_at_criticality() {
    gate("mutual_information_decomposes_at_criticality", || {
        let started = Instant::now();
        let four = Partition::from_ratios(48, &[1, 3, 1, 3]).unwrap();
        let merged = four.merge(1, 3).unwrap();
        let cfg = CircuitConfig {
            boundary: Boundary::Periodic,
            seed: 2009,
            ..CircuitConfig::new(48, 0.16)
        };
        let spec = EnsembleSpec::steady(cfg, vec![four, merged.clone()], 1000);
        let r = run_ensemble(&spec, 0).unwrap();
        let i_ac = r.channel(1, "i_ac").unwrap().mean[0];
        let g3 = r.channel(1, "g3").unwrap().mean[0];
        let n_ac = r.channel(1, "n_ac").unwrap().mean[0];
        let g4 = r.channel(0, "g4").unwrap().mean[0];

        // the identity must hold term by term on every single state
        let mut exact = true;
        for k in 0..50u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(9009);
            rng.set_stream(k);
            let mut t = StabilizerTableau::new_product_state(48).unwrap();
            for _ in 0..cfg.depth_layers {
                step_level(&mut t, &cfg, 0, &mut rng).unwrap();
                step_level(&mut t, &cfg, 1, &mut rng).unwrap();
            }
            let d = bell_counts(&t, &merged).unwrap();
            let mi =
                mutual_information(&t, &merged.party_qubits(0), &merged.party_qubits(2)).unwrap();
            exact &= mi == d.ghz + 2 * d.bell_ac();
        }
        let elapsed = started.elapsed();
        (
            exact && n_ac < 0.05 && (i_ac - g3).abs() < 0.1,
            format!(
                "merged outer parties: <I_AC> = {i_ac:.4} vs <g3> = {g3:.4} \
                 (gap {:.4} = 2<n_AC>, <n_AC> = {n_ac:.4} < 0.05), identity exact on \
                 50/50 final states, <g4> = {g4:.4}, {elapsed:.2?}",
                (i_ac - g3).abs()
            ),
        )
    });
}

#[test]
fn deep_circuit_means_respect_the_typicality_bound() {
    gate("deep_circuit_means_respect_the_typicality_bound", || {
        let started = Instant::now();
        let balanced = run_sweep(
            r#"
[circuit]
n_qubits = 12
meas_prob = 0.0
depth_layers = 48

[partition]
config = "config1"
parameter = 0.3333333333333333

[ensemble]
trajectories = 2000
mode = "steady"
observables = ["ghz"]
seed = 2010
"#,
        );
        let skewed = run_sweep(
            r#"
[circuit]
n_qubits = 12
meas_prob = 0.0
depth_layers = 48

[partition]
config = "config2"
parameter = 0.6666666666666666

[ensemble]
trajectories = 2000
mode = "steady"
observables = ["ghz"]
seed = 2011
"#,
        );
        let (g_bal, e_bal) = steady_mean(&balanced[0].1, "g3");
        let (g_skew, e_skew) = steady_mean(&skewed[0].1, "g3");
        let bound_bal = typicality_bound(12, [4, 4, 4]).unwrap();
        let bound_skew = typicality_bound(12, [8, 2, 2]).unwrap();
        let log2_3 = 3.0f64.log2();
        let elapsed = started.elapsed();
        let ok = (1.0..=log2_3).contains(&g_bal)
            && g_bal <= bound_bal
            && g_skew < 0.05
            && g_skew <= bound_skew;
        (
            ok,
            format!(
                "balanced g3 = {g_bal:.4}+-{e_bal:.4} in [1.0, log2(3)] and <= bound \
                 {bound_bal:.4}; majority-party g3 = {g_skew:.4}+-{e_skew:.4} < 0.05 \
                 (bound {bound_skew:.4}), {elapsed:.2?}"
            ),
        )
    });
}

#[test]
fn invariant_sweep_over_random_states() {
    gate("invariant_sweep_over_random_states", || {
        let started = Instant::now();
        let mut states = 0usize;
        let mut rng = ChaCha8Rng::seed_from_u64(1111);
        for &n in &[6usize, 8, 10] {
            for &p in &[0.0, 0.15, 0.4] {
                let cfg = CircuitConfig {
                    depth_layers: n,
                    ..CircuitConfig::new(n, p)
                };
                for _ in 0..4 {
                    let mut t = StabilizerTableau::new_product_state(n).unwrap();
                    for _ in 0..cfg.depth_layers {
                        step_level(&mut t, &cfg, 0, &mut rng).unwrap();
                        step_level(&mut t, &cfg, 1, &mut rng).unwrap();
                        t.check_invariants().unwrap();
                    }
                    let gens = t.generators();
                    for i in 0..n {
                        for j in (i + 1)..n {
                            assert!(gens[i].commutes_with(&gens[j]));
                        }
                    }

                    let cut = rng.random_range(1..n);
                    let bip = Partition::from_blocks(&[cut, n - cut]).unwrap();
                    assert_eq!(
                        ghz_index(&t, &bip).unwrap(),
                        entanglement_entropy(&t, &bip.party_qubits(0)).unwrap(),
                        "bipartite count vs cut entropy"
                    );

                    let third = (n / 3).max(1);
                    let tri = Partition::from_blocks(&[third, n - 2 * third, third]).unwrap();
                    let d = bell_counts(&t, &tri).unwrap();
                    let s_a = entanglement_entropy(&t, &tri.party_qubits(0)).unwrap();
                    assert_eq!(s_a, d.ghz + d.bell_ab() + d.bell_ac());
                    let budget = 3 * d.ghz
                        + 2 * (d.bell_ab() + d.bell_bc() + d.bell_ac())
                        + d.local_dims.iter().sum::<usize>();
                    assert_eq!(budget, n, "generator budget");

                    let quarter = (n / 4).max(1);
                    let quad =
                        Partition::from_blocks(&[quarter, quarter, quarter, n - 3 * quarter])
                            .unwrap();
                    let g4 = ghz_index(&t, &quad).unwrap();
                    for (a, b) in [(0usize, 1usize), (1, 3), (0, 2)] {
                        let m = quad.merge(a, b).unwrap();
                        assert!(
                            ghz_index(&t, &m).unwrap() >= g4,
                            "coarse-graining lowered the count"
                        );
                    }

                    let mut unsigned = t.clone();
                    unsigned.zero_phases();
                    assert_eq!(
                        bell_counts(&unsigned, &tri).unwrap(),
                        d,
                        "signs leaked into the counts"
                    );

                    let mut scrambled = t.clone();
                    for party in 0..3 {
                        let qs = tri.party_qubits(party);
                        for _ in 0..4 {
                            if qs.len() < 2 {
                                break;
                            }
                            let i = rng.random_range(0..qs.len() - 1);
                            let gate = TwoQubitClifford::sample_uniform(&mut rng);
                            scrambled.apply_clifford(&gate, qs[i], qs[i + 1]).unwrap();
                        }
                    }
                    assert_eq!(
                        bell_counts(&scrambled, &tri).unwrap(),
                        d,
                        "party-local gates moved the counts"
                    );
                    states += 1;
                }
            }
        }

        // ensemble statistics cannot depend on the worker count
        let cfg = CircuitConfig {
            seed: 555,
            depth_layers: 8,
            ..CircuitConfig::new(10, 0.2)
        };
        let part = Partition::config1_fraction(10, 1.0 / 3.0).unwrap();
        let mut spec = EnsembleSpec::dynamics(cfg, vec![part], 8);
        spec.observables = ObservableSet::all();
        assert_eq!(
            run_ensemble(&spec, 1).unwrap(),
            run_ensemble(&spec, 4).unwrap(),
            "worker count changed the statistics"
        );

        // collapse fit recovers planted critical parameters
        let mut noise = ChaCha8Rng::seed_from_u64(4242);
        let (planted_xc, planted_b) = (0.16, 0.8);
        let mut curves = Vec::new();
        for &size in &[16usize, 32, 64] {
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            let mut ss = Vec::new();
            for k in 0..13 {
                let x = 0.08 + 0.0133 * k as f64;
                let u = (x - planted_xc) * (size as f64).powf(planted_b);
                xs.push(x);
                ys.push(1.3 / (1.0 + (1.6 * u).exp()) + 0.004 * noise.random_range(-1.0..1.0));
                ss.push(0.004);
            }
            curves.push(SizeCurve::new(size, xs, ys, ss).unwrap());
        }
        let fit = collapse(
            &ScalingCurveSet::new(curves).unwrap(),
            &CollapseOptions::default(),
        )
        .unwrap();
        assert!(
            (fit.critical_value - planted_xc).abs() < 0.008,
            "planted critical value not recovered: {}",
            fit.critical_value
        );
        assert!(
            (fit.inv_exponent - planted_b).abs() < 0.15,
            "planted exponent not recovered: {}",
            fit.inv_exponent
        );

        let elapsed = started.elapsed();
        (
            true,
            format!(
                "{states} random monitored states: layer-by-layer tableau invariants, \
                 cut entropies, decomposition identities, coarse-graining, sign and \
                 local-unitary blindness; worker determinism; planted collapse recovered \
                 ({:.4}, {:.3}), {elapsed:.2?}",
                fit.critical_value, fit.inv_exponent
            ),
        )
    });
}
