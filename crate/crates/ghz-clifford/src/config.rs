//! TOML experiment configuration.
//!
//! A config file describes a family of ensembles: `n_qubits`, `meas_prob`
//! and the partition `parameter` each accept a single value or a list, and
//! [`ExperimentConfig::expand`] takes the cartesian product in document
//! order (sizes outermost, then measurement rates, then parameters). Every
//! combination gets its own seed derived from the master seed with
//! splitmix64, so runs stay reproducible when the sweep grid changes shape.

use crate::circuit::{Boundary, CircuitConfig, ObservableSet};
use crate::ensemble::{EnsembleMode, EnsembleSpec};
use crate::error::{Error, Result};
use crate::partition::Partition;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// A scalar or a list; lists become sweep axes.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn values(&self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryChoice {
    Open,
    Periodic,
}

impl From<BoundaryChoice> for Boundary {
    fn from(b: BoundaryChoice) -> Boundary {
        match b {
            BoundaryChoice::Open => Boundary::Open,
            BoundaryChoice::Periodic => Boundary::Periodic,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum ModeChoice {
    Steady,
    Dynamics,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitSection {
    pub n_qubits: OneOrMany<usize>,
    pub meas_prob: OneOrMany<f64>,
    #[serde(default = "default_boundary")]
    pub boundary: BoundaryChoice,
    /// Fixed depth in layers. Mutually exclusive with `depth_factor`.
    #[serde(default)]
    pub depth_layers: Option<usize>,
    /// Depth as a multiple of the chain length, rounded up.
    #[serde(default)]
    pub depth_factor: Option<f64>,
}

fn default_boundary() -> BoundaryChoice {
    BoundaryChoice::Open
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionSection {
    /// One of: config1, config2, config3, custom.
    pub config: String,
    /// Size fraction of the distinguished party; sweepable. Required for the
    /// named families, ignored for custom.
    #[serde(default)]
    pub parameter: Option<OneOrMany<f64>>,
    /// Custom partition as party proportions scaled to the chain.
    #[serde(default)]
    pub ratios: Option<Vec<u32>>,
    /// Custom partition as absolute party sizes; only valid when the sweep
    /// has a single matching chain length.
    #[serde(default)]
    pub blocks: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSection {
    pub trajectories: usize,
    #[serde(default = "default_mode")]
    pub mode: ModeChoice,
    #[serde(default = "default_stride")]
    pub record_stride: usize,
    /// Subset of: ghz, bell, entropy, mutual_information. Defaults to all.
    #[serde(default)]
    pub observables: Option<Vec<String>>,
    #[serde(default)]
    pub seed: u64,
}

fn default_mode() -> ModeChoice {
    ModeChoice::Steady
}

fn default_stride() -> usize {
    1
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default)]
    pub directory: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub circuit: CircuitSection,
    pub partition: PartitionSection,
    pub ensemble: EnsembleSection,
    #[serde(default)]
    pub output: OutputSection,
}

/// Identifies one point of the sweep grid.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ComboMeta {
    pub index: usize,
    pub n_qubits: usize,
    pub meas_prob: f64,
    pub config: String,
    /// Partition parameter; -1 for custom partitions.
    pub parameter: f64,
    pub boundary: BoundaryChoice,
    pub mode: ModeChoice,
    pub seed: u64,
}

impl ComboMeta {
    /// Stable file stem for this combination.
    pub fn file_stem(&self) -> String {
        let b = match self.boundary {
            BoundaryChoice::Open => "open",
            BoundaryChoice::Periodic => "per",
        };
        let m = match self.mode {
            ModeChoice::Steady => "steady",
            ModeChoice::Dynamics => "dyn",
        };
        format!(
            "run_N{}_p{:.4}_{}_{:.4}_{}_{}",
            self.n_qubits, self.meas_prob, self.config, self.parameter, b, m
        )
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for sweep point `index` under a master seed.
pub fn combo_seed(master: u64, index: usize) -> u64 {
    splitmix64(master ^ splitmix64(index as u64 + 1))
}

fn parse_observables(names: &Option<Vec<String>>) -> Result<ObservableSet> {
    let Some(names) = names else {
        return Ok(ObservableSet::all());
    };
    let mut set = ObservableSet {
        ghz: false,
        bell: false,
        entropy: false,
        mutual_information: false,
    };
    for n in names {
        match n.as_str() {
            "ghz" => set.ghz = true,
            "bell" => set.bell = true,
            "entropy" => set.entropy = true,
            "mutual_information" => set.mutual_information = true,
            other => {
                return Err(Error::Config(format!(
                    "unknown observable {other:?}; expected ghz, bell, entropy, mutual_information"
                )))
            }
        }
    }
    if !(set.ghz || set.bell || set.entropy || set.mutual_information) {
        return Err(Error::Config("observable list is empty".into()));
    }
    Ok(set)
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("config parse: {e}")))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }

    fn build_partition(&self, n: usize, parameter: Option<f64>) -> Result<Partition> {
        match self.partition.config.as_str() {
            "config1" | "config2" | "config3" => {
                let p = parameter.ok_or_else(|| {
                    Error::Config(format!(
                        "partition family {:?} needs `parameter`",
                        self.partition.config
                    ))
                })?;
                match self.partition.config.as_str() {
                    "config1" => Partition::config1_fraction(n, p),
                    "config2" => Partition::config2_fraction(n, p),
                    _ => Partition::config3_fraction(n, p),
                }
            }
            "custom" => match (&self.partition.ratios, &self.partition.blocks) {
                (Some(r), None) => Partition::from_ratios(n, r),
                (None, Some(b)) => {
                    if b.iter().sum::<usize>() != n {
                        return Err(Error::Config(format!(
                            "blocks {:?} sum to {}, chain has {} qubits",
                            b,
                            b.iter().sum::<usize>(),
                            n
                        )));
                    }
                    Partition::from_blocks(b)
                }
                _ => Err(Error::Config(
                    "custom partition needs exactly one of `ratios` or `blocks`".into(),
                )),
            },
            other => Err(Error::Config(format!("unknown partition family {other:?}"))),
        }
    }

    fn depth_for(&self, n: usize) -> Result<usize> {
        match (self.circuit.depth_layers, self.circuit.depth_factor) {
            (Some(_), Some(_)) => Err(Error::Config(
                "set either depth_layers or depth_factor, not both".into(),
            )),
            (Some(d), None) => Ok(d),
            (None, Some(f)) => {
                if !(f > 0.0) {
                    return Err(Error::Config(format!("depth_factor {f} must be positive")));
                }
                Ok((f * n as f64).ceil() as usize)
            }
            (None, None) => Ok(n),
        }
    }

    /// All sweep combinations with their derived seeds, in document order.
    pub fn expand(&self, seed_override: Option<u64>) -> Result<Vec<(ComboMeta, EnsembleSpec)>> {
        let master = seed_override.unwrap_or(self.ensemble.seed);
        let observables = parse_observables(&self.ensemble.observables)?;
        let params: Vec<Option<f64>> =
            match (&self.partition.parameter, self.partition.config.as_str()) {
                (Some(p), _) => p.values().into_iter().map(Some).collect(),
                (None, "custom") => vec![None],
                (None, other) => {
                    return Err(Error::Config(format!(
                        "partition family {other:?} needs `parameter`"
                    )))
                }
            };
        let mode = match self.ensemble.mode {
            ModeChoice::Steady => EnsembleMode::SteadyState,
            ModeChoice::Dynamics => EnsembleMode::Dynamics,
        };
        let mut out = Vec::new();
        for &n in &self.circuit.n_qubits.values() {
            for &p in &self.circuit.meas_prob.values() {
                for &param in &params {
                    let index = out.len();
                    let seed = combo_seed(master, index);
                    let partition = self.build_partition(n, param)?;
                    let circuit = CircuitConfig {
                        n_qubits: n,
                        meas_prob: p,
                        boundary: self.circuit.boundary.into(),
                        depth_layers: self.depth_for(n)?,
                        seed,
                    };
                    let spec = EnsembleSpec {
                        circuit,
                        partitions: vec![partition],
                        observables,
                        mode,
                        n_trajectories: self.ensemble.trajectories,
                        record_stride: self.ensemble.record_stride,
                    };
                    spec.validate()?;
                    out.push((
                        ComboMeta {
                            index,
                            n_qubits: n,
                            meas_prob: p,
                            config: self.partition.config.clone(),
                            parameter: param.unwrap_or(-1.0),
                            boundary: self.circuit.boundary,
                            mode: self.ensemble.mode,
                            seed,
                        },
                        spec,
                    ));
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SWEEP: &str = r#"
[circuit]
n_qubits = [24, 48]
meas_prob = [0.08, 0.10, 0.12]
boundary = "periodic"
depth_factor = 2.0

[partition]
config = "config1"
parameter = 0.3333333333

[ensemble]
trajectories = 100
mode = "steady"
seed = 42
"#;

    #[test]
    fn sweep_expansion_order_and_seeds() {
        let cfg = ExperimentConfig::from_toml(SWEEP).unwrap();
        let combos = cfg.expand(None).unwrap();
        assert_eq!(combos.len(), 6);
        let ns: Vec<usize> = combos.iter().map(|(m, _)| m.n_qubits).collect();
        assert_eq!(ns, vec![24, 24, 24, 48, 48, 48]);
        let ps: Vec<f64> = combos.iter().map(|(m, _)| m.meas_prob).collect();
        assert_eq!(ps[..3], [0.08, 0.10, 0.12]);
        // depth scales with size
        assert_eq!(combos[0].1.circuit.depth_layers, 48);
        assert_eq!(combos[3].1.circuit.depth_layers, 96);
        // distinct per-combo seeds, stable under re-expansion
        let seeds: Vec<u64> = combos.iter().map(|(m, _)| m.seed).collect();
        let mut uniq = seeds.clone();
        uniq.sort_unstable();
        uniq.dedup();
        assert_eq!(uniq.len(), 6);
        assert_eq!(
            seeds,
            cfg.expand(None)
                .unwrap()
                .iter()
                .map(|(m, _)| m.seed)
                .collect::<Vec<_>>()
        );
        // override rederives everything
        let other = cfg.expand(Some(7)).unwrap();
        assert_ne!(other[0].0.seed, seeds[0]);
        // partition realized at the right size
        assert_eq!(combos[0].1.partitions[0].party_sizes(), vec![8, 8, 8]);
        assert_eq!(combos[3].1.partitions[0].party_sizes(), vec![16, 16, 16]);
        assert_eq!(combos[0].1.circuit.boundary, Boundary::Periodic);
    }

    #[test]
    fn custom_partitions_and_observables() {
        let text = r#"
[circuit]
n_qubits = 96
meas_prob = 0.16

[partition]
config = "custom"
ratios = [1, 2, 2, 1]

[ensemble]
trajectories = 10
mode = "dynamics"
record_stride = 2
observables = ["ghz", "entropy"]
"#;
        let cfg = ExperimentConfig::from_toml(text).unwrap();
        let combos = cfg.expand(None).unwrap();
        assert_eq!(combos.len(), 1);
        let (meta, spec) = &combos[0];
        assert_eq!(meta.parameter, -1.0);
        assert_eq!(spec.partitions[0].party_sizes(), vec![16, 32, 32, 16]);
        assert!(spec.observables.ghz && spec.observables.entropy);
        assert!(!spec.observables.bell && !spec.observables.mutual_information);
        assert_eq!(spec.record_stride, 2);
        assert_eq!(meta.file_stem(), "run_N96_p0.1600_custom_-1.0000_open_dyn");
    }

    #[test]
    fn rejects_bad_configs() {
        // unknown field
        let bad = SWEEP.replace("trajectories", "trajectoriez");
        assert!(ExperimentConfig::from_toml(&bad).is_err());
        // missing parameter for a named family
        let text = r#"
[circuit]
n_qubits = 24
meas_prob = 0.1

[partition]
config = "config1"

[ensemble]
trajectories = 5
"#;
        assert!(ExperimentConfig::from_toml(text)
            .unwrap()
            .expand(None)
            .is_err());
        // blocks not matching the chain
        let text = r#"
[circuit]
n_qubits = 24
meas_prob = 0.1

[partition]
config = "custom"
blocks = [8, 8]

[ensemble]
trajectories = 5
"#;
        assert!(ExperimentConfig::from_toml(text)
            .unwrap()
            .expand(None)
            .is_err());
        // both depth settings at once
        let text = r#"
[circuit]
n_qubits = 24
meas_prob = 0.1
depth_layers = 10
depth_factor = 2.0

[partition]
config = "config1"
parameter = 0.33

[ensemble]
trajectories = 5
"#;
        assert!(ExperimentConfig::from_toml(text)
            .unwrap()
            .expand(None)
            .is_err());
        // unknown observable
        let text = r#"
[circuit]
n_qubits = 24
meas_prob = 0.1

[partition]
config = "config1"
parameter = 0.33

[ensemble]
trajectories = 5
observables = ["negativity"]
"#;
        assert!(ExperimentConfig::from_toml(text)
            .unwrap()
            .expand(None)
            .is_err());
    }
}
