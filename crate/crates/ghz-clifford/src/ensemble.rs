//! Trajectory ensembles.
//!
//! Each trajectory k draws from an independent ChaCha stream (master seed,
//! stream k), so results are reproducible bit for bit regardless of how many
//! worker threads execute them: the streams decouple trajectories from
//! scheduling, and aggregation always runs in trajectory order.

use crate::circuit::{
    channel_layout, run_trajectory, ChannelDesc, CircuitConfig, ObservableSet, Recording,
};
use crate::error::{Error, Result};
use crate::partition::Partition;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnsembleMode {
    /// Average each trajectory over the final tenth of its layers, then
    /// aggregate across trajectories. The result has a single time slot.
    SteadyState,
    /// Keep the recorded time series, aggregated layer by layer.
    Dynamics,
}

#[derive(Clone, Debug)]
pub struct EnsembleSpec {
    pub circuit: CircuitConfig,
    pub partitions: Vec<Partition>,
    pub observables: ObservableSet,
    pub mode: EnsembleMode,
    pub n_trajectories: usize,
    /// Layer stride between recordings in dynamics mode.
    pub record_stride: usize,
}

impl EnsembleSpec {
    pub fn steady(
        circuit: CircuitConfig,
        partitions: Vec<Partition>,
        n_trajectories: usize,
    ) -> Self {
        EnsembleSpec {
            circuit,
            partitions,
            observables: ObservableSet::all(),
            mode: EnsembleMode::SteadyState,
            n_trajectories,
            record_stride: 1,
        }
    }

    pub fn dynamics(
        circuit: CircuitConfig,
        partitions: Vec<Partition>,
        n_trajectories: usize,
    ) -> Self {
        EnsembleSpec {
            mode: EnsembleMode::Dynamics,
            ..EnsembleSpec::steady(circuit, partitions, n_trajectories)
        }
    }

    pub fn recording(&self) -> Recording {
        match self.mode {
            EnsembleMode::SteadyState => Recording::steady_window(self.circuit.depth_layers),
            EnsembleMode::Dynamics => Recording {
                from_layer: 1,
                stride: self.record_stride.max(1),
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.circuit.validate()?;
        if self.partitions.is_empty() {
            return Err(Error::Config("no partitions selected".into()));
        }
        for p in &self.partitions {
            if p.n_qubits() != self.circuit.n_qubits {
                return Err(Error::Dimension(format!(
                    "partition covers {} qubits, circuit has {}",
                    p.n_qubits(),
                    self.circuit.n_qubits
                )));
            }
        }
        if self.n_trajectories == 0 {
            return Err(Error::Config("need at least one trajectory".into()));
        }
        Ok(())
    }
}

/// Per-channel ensemble statistics, one slot per recorded layer (steady mode
/// has exactly one slot).
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelSeries {
    pub desc: ChannelDesc,
    pub mean: Vec<f64>,
    /// Unbiased sample variance across trajectories.
    pub variance: Vec<f64>,
    /// Standard error of the mean.
    pub stderr: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleResult {
    pub n_qubits: usize,
    /// Recorded layer indices; in steady mode the single entry is the final
    /// layer.
    pub layers: Vec<usize>,
    pub channels: Vec<ChannelSeries>,
    pub n_trajectories: usize,
    pub seed: u64,
    pub steady: bool,
}

impl EnsembleResult {
    /// Layer index rescaled by chain length.
    pub fn tau(&self, slot: usize) -> f64 {
        self.layers[slot] as f64 / self.n_qubits as f64
    }

    pub fn channel(&self, partition: usize, name: &str) -> Option<&ChannelSeries> {
        self.channels
            .iter()
            .find(|c| c.desc.partition == partition && c.desc.name == name)
    }
}

fn steady_average(values: &[f64], slots: usize, nc: usize) -> Vec<f64> {
    let mut row = vec![0.0; nc];
    for s in 0..slots {
        for c in 0..nc {
            row[c] += values[s * nc + c];
        }
    }
    for v in &mut row {
        *v /= slots as f64;
    }
    row
}

/// Runs the ensemble on `workers` threads (0 = library default). Output is
/// independent of the worker count.
pub fn run_ensemble(spec: &EnsembleSpec, workers: usize) -> Result<EnsembleResult> {
    spec.validate()?;
    let rec = spec.recording();
    let layers: Vec<usize> = (1..=spec.circuit.depth_layers)
        .filter(|&l| rec.records(l))
        .collect();
    let channels = channel_layout(&spec.partitions, &spec.observables);
    let nc = channels.len();
    if nc == 0 {
        return Err(Error::Config("no observables selected".into()));
    }
    let window = layers.len();

    let run_one = |k: usize| -> Result<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.circuit.seed);
        rng.set_stream(k as u64);
        let out = run_trajectory(
            &spec.circuit,
            &spec.partitions,
            &spec.observables,
            &rec,
            &mut rng,
        )?;
        Ok(match spec.mode {
            EnsembleMode::SteadyState => steady_average(&out.values, window, nc),
            EnsembleMode::Dynamics => out.values,
        })
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let rows: Result<Vec<Vec<f64>>> = pool.install(|| {
        (0..spec.n_trajectories)
            .into_par_iter()
            .map(run_one)
            .collect()
    });
    let rows = rows?;

    let (slots, out_layers) = match spec.mode {
        EnsembleMode::SteadyState => (1usize, vec![spec.circuit.depth_layers]),
        EnsembleMode::Dynamics => (window, layers),
    };
    let cols = slots * nc;
    let nt = spec.n_trajectories as f64;
    let mut mean = vec![0.0; cols];
    for row in &rows {
        debug_assert_eq!(row.len(), cols);
        for (m, v) in mean.iter_mut().zip(row.iter()) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= nt;
    }
    let mut var = vec![0.0; cols];
    if spec.n_trajectories > 1 {
        for row in &rows {
            for ((v, x), m) in var.iter_mut().zip(row.iter()).zip(mean.iter()) {
                let d = x - m;
                *v += d * d;
            }
        }
        for v in &mut var {
            *v /= nt - 1.0;
        }
    }

    let channels = channels
        .into_iter()
        .enumerate()
        .map(|(c, desc)| {
            let mut cm = Vec::with_capacity(slots);
            let mut cv = Vec::with_capacity(slots);
            let mut ce = Vec::with_capacity(slots);
            for s in 0..slots {
                cm.push(mean[s * nc + c]);
                cv.push(var[s * nc + c]);
                ce.push((var[s * nc + c] / nt).sqrt());
            }
            ChannelSeries {
                desc,
                mean: cm,
                variance: cv,
                stderr: ce,
            }
        })
        .collect();

    Ok(EnsembleResult {
        n_qubits: spec.circuit.n_qubits,
        layers: out_layers,
        channels,
        n_trajectories: spec.n_trajectories,
        seed: spec.circuit.seed,
        steady: spec.mode == EnsembleMode::SteadyState,
    })
}

/// Birth and death times of a transient signal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LifeTimes {
    pub birth: Option<f64>,
    pub death: Option<f64>,
    pub threshold: f64,
}

/// Locates when a mean curve first climbs above the given threshold and
/// when it finally drops back below, with linear interpolation between
/// recorded times. Curves that never reach the threshold count as never
/// born; a curve still above it at the last recorded time has no death.
pub fn birth_death_times_at(taus: &[f64], mean: &[f64], threshold: f64) -> LifeTimes {
    debug_assert_eq!(taus.len(), mean.len());
    let peak = mean.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(peak >= threshold) {
        return LifeTimes {
            birth: None,
            death: None,
            threshold,
        };
    }
    let thr = threshold;
    let first = mean.iter().position(|&v| v >= thr).unwrap();
    let birth = if first == 0 {
        taus[0]
    } else {
        let (t0, t1) = (taus[first - 1], taus[first]);
        let (v0, v1) = (mean[first - 1], mean[first]);
        t0 + (thr - v0) / (v1 - v0) * (t1 - t0)
    };
    let last = mean.iter().rposition(|&v| v >= thr).unwrap();
    let death = if last + 1 == mean.len() {
        None
    } else {
        let (t0, t1) = (taus[last], taus[last + 1]);
        let (v0, v1) = (mean[last], mean[last + 1]);
        Some(t0 + (v0 - thr) / (v0 - v1) * (t1 - t0))
    };
    LifeTimes {
        birth: Some(birth),
        death,
        threshold: thr,
    }
}

/// Threshold-free variant. A signal that survives to the end of the run is
/// judged against half its late-time plateau (mean over the final tenth of
/// recorded slots); a transient that dies out has no plateau to halve, so an
/// absolute level of 0.5 is used instead. Fixed-level comparisons across
/// runs should call [`birth_death_times_at`] directly: an adaptive threshold
/// moves with the plateau, which skews crossing times when the plateaus
/// differ.
pub fn birth_death_times(taus: &[f64], mean: &[f64]) -> LifeTimes {
    if mean.is_empty() {
        return LifeTimes {
            birth: None,
            death: None,
            threshold: 0.0,
        };
    }
    let peak = mean.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let k = (mean.len() / 10).max(1);
    let plateau = mean[mean.len() - k..].iter().sum::<f64>() / k as f64;
    let threshold = if plateau >= 0.4 * peak {
        plateau / 2.0
    } else {
        0.5
    };
    birth_death_times_at(taus, mean, threshold)
}
