//! Brickwork monitored circuits.
//!
//! One layer is two half-layers (levels): even pairs (0,1)(2,3)... then odd
//! pairs (1,2)(3,4)...; on a ring the odd level also couples the chain ends.
//! Each level applies an independent uniform two-qubit Clifford per pair and
//! then measures each qubit in the Z basis independently with probability p.
//!
//! Randomness protocol per level, in order: two draws per gate (symplectic
//! class, signs) left to right, then one decision draw per qubit left to
//! right, with one extra outcome draw immediately after any decision that
//! triggers a non-deterministic measurement. Everything downstream relies on
//! this order staying fixed.

use crate::clifford::TwoQubitClifford;
use crate::entanglement::{bell_counts, entanglement_entropy, ghz_index, mutual_information};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::tableau::StabilizerTableau;
use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    Open,
    Periodic,
}

impl std::fmt::Display for Boundary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Boundary::Open => write!(f, "open"),
            Boundary::Periodic => write!(f, "periodic"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircuitConfig {
    pub n_qubits: usize,
    pub meas_prob: f64,
    pub boundary: Boundary,
    /// Number of full layers (two levels each). Defaults to n_qubits.
    pub depth_layers: usize,
    pub seed: u64,
}

impl CircuitConfig {
    pub fn new(n_qubits: usize, meas_prob: f64) -> Self {
        CircuitConfig {
            n_qubits,
            meas_prob,
            boundary: Boundary::Open,
            depth_layers: n_qubits,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits < 4 || self.n_qubits % 2 != 0 {
            return Err(Error::Config(format!(
                "chain length must be even and at least 4, got {}",
                self.n_qubits
            )));
        }
        if !(0.0..=1.0).contains(&self.meas_prob) {
            return Err(Error::Config(format!(
                "measurement probability {} outside [0, 1]",
                self.meas_prob
            )));
        }
        if self.depth_layers == 0 {
            return Err(Error::Config("depth must be at least one layer".into()));
        }
        Ok(())
    }
}

/// Gate pairs of one level. `parity` 0 is the even level.
pub fn level_pairs(n: usize, parity: usize, boundary: Boundary) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(n / 2);
    if parity % 2 == 0 {
        let mut q = 0;
        while q + 1 < n {
            pairs.push((q, q + 1));
            q += 2;
        }
    } else {
        let mut q = 1;
        while q + 1 < n {
            pairs.push((q, q + 1));
            q += 2;
        }
        if boundary == Boundary::Periodic && n >= 4 {
            pairs.push((n - 1, 0));
        }
    }
    pairs
}

/// Applies one level: gates, then the measurement round.
pub fn step_level<R: Rng + ?Sized>(
    t: &mut StabilizerTableau,
    cfg: &CircuitConfig,
    parity: usize,
    rng: &mut R,
) -> Result<()> {
    for (q1, q2) in level_pairs(cfg.n_qubits, parity, cfg.boundary) {
        let gate = TwoQubitClifford::sample_uniform(rng);
        t.apply_clifford(&gate, q1, q2)?;
    }
    for q in 0..cfg.n_qubits {
        if rng.random_bool(cfg.meas_prob) {
            t.measure_z(q, rng)?;
        }
    }
    Ok(())
}

/// Which per-layer quantities to record.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ObservableSet {
    pub ghz: bool,
    /// Tripartite Bell-pair counts; only emitted for 3-party partitions.
    pub bell: bool,
    /// One entropy channel per party.
    pub entropy: bool,
    /// I(A : C) between the first and third party; needs >= 3 parties.
    pub mutual_information: bool,
}

impl Default for ObservableSet {
    fn default() -> Self {
        ObservableSet {
            ghz: true,
            bell: false,
            entropy: false,
            mutual_information: false,
        }
    }
}

impl ObservableSet {
    pub fn all() -> Self {
        ObservableSet {
            ghz: true,
            bell: true,
            entropy: true,
            mutual_information: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChannelDesc {
    /// Index into the partition list this channel belongs to.
    pub partition: usize,
    /// Short name: g2/g3/g4..., n_ab, n_bc, n_ac, s_0..., i_ac.
    pub name: String,
}

/// Channel layout for a partition list and observable selection. The order
/// here is the order of values in every recorded layer.
pub fn channel_layout(partitions: &[Partition], obs: &ObservableSet) -> Vec<ChannelDesc> {
    let mut out = Vec::new();
    for (pi, part) in partitions.iter().enumerate() {
        let k = part.n_parties();
        if obs.ghz {
            out.push(ChannelDesc {
                partition: pi,
                name: format!("g{k}"),
            });
        }
        if obs.bell && k == 3 {
            for name in ["n_ab", "n_bc", "n_ac"] {
                out.push(ChannelDesc {
                    partition: pi,
                    name: name.to_string(),
                });
            }
        }
        if obs.entropy {
            for i in 0..k {
                out.push(ChannelDesc {
                    partition: pi,
                    name: format!("s_{i}"),
                });
            }
        }
        if obs.mutual_information && k >= 3 {
            out.push(ChannelDesc {
                partition: pi,
                name: "i_ac".to_string(),
            });
        }
    }
    out
}

/// Recording schedule over layers (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Recording {
    /// First layer eligible for recording.
    pub from_layer: usize,
    /// Record the first eligible layer and every stride-th layer after it.
    pub stride: usize,
}

impl Default for Recording {
    fn default() -> Self {
        Recording {
            from_layer: 1,
            stride: 1,
        }
    }
}

impl Recording {
    /// The steady-state window: the final tenth of the circuit, at least one
    /// layer.
    pub fn steady_window(depth_layers: usize) -> Self {
        let w = (depth_layers / 10).max(1);
        Recording {
            from_layer: depth_layers - w + 1,
            stride: 1,
        }
    }

    pub fn records(&self, layer: usize) -> bool {
        layer >= self.from_layer && (layer - self.from_layer) % self.stride == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryObservables {
    /// Recorded layer indices, 1-based.
    pub layers: Vec<usize>,
    pub channels: Vec<ChannelDesc>,
    /// Layer-major: values[l * channels.len() + c].
    pub values: Vec<f64>,
}

impl TrajectoryObservables {
    pub fn layer_values(&self, l: usize) -> &[f64] {
        let c = self.channels.len();
        &self.values[l * c..(l + 1) * c]
    }
}

fn record_channels(
    t: &StabilizerTableau,
    partitions: &[Partition],
    obs: &ObservableSet,
    out: &mut Vec<f64>,
) -> Result<()> {
    for part in partitions {
        let k = part.n_parties();
        let dec = if obs.bell && k == 3 {
            Some(bell_counts(t, part)?)
        } else {
            None
        };
        if obs.ghz {
            let g = match &dec {
                Some(d) => d.ghz,
                None => ghz_index(t, part)?,
            };
            out.push(g as f64);
        }
        if let Some(d) = &dec {
            out.push(d.bell[0] as f64);
            out.push(d.bell[1] as f64);
            out.push(d.bell[2] as f64);
        }
        if obs.entropy {
            for i in 0..k {
                out.push(entanglement_entropy(t, &part.party_qubits(i))? as f64);
            }
        }
        if obs.mutual_information && k >= 3 {
            out.push(mutual_information(t, &part.party_qubits(0), &part.party_qubits(2))? as f64);
        }
    }
    Ok(())
}

/// Runs one monitored trajectory from |0...0>, recording the selected
/// observables on the given schedule.
pub fn run_trajectory<R: Rng + ?Sized>(
    cfg: &CircuitConfig,
    partitions: &[Partition],
    obs: &ObservableSet,
    rec: &Recording,
    rng: &mut R,
) -> Result<TrajectoryObservables> {
    cfg.validate()?;
    if rec.stride == 0 || rec.from_layer == 0 {
        return Err(Error::Config("recording schedule must be 1-based".into()));
    }
    for p in partitions {
        if p.n_qubits() != cfg.n_qubits {
            return Err(Error::Dimension(format!(
                "partition covers {} qubits, circuit has {}",
                p.n_qubits(),
                cfg.n_qubits
            )));
        }
    }
    let channels = channel_layout(partitions, obs);
    let mut t = StabilizerTableau::new_product_state(cfg.n_qubits)?;
    let mut layers = Vec::new();
    let mut values = Vec::new();
    for layer in 1..=cfg.depth_layers {
        step_level(&mut t, cfg, 0, rng)?;
        step_level(&mut t, cfg, 1, rng)?;
        debug_assert!(
            t.check_invariants().is_ok(),
            "invariants broken at layer {layer}"
        );
        if rec.records(layer) {
            layers.push(layer);
            record_channels(&t, partitions, obs, &mut values)?;
        }
    }
    Ok(TrajectoryObservables {
        layers,
        channels,
        values,
    })
}
