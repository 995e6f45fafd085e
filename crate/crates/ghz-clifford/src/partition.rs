//! Partitions of the qubit chain into labeled parties.
//!
//! The three standard families used throughout:
//! - family 1: contiguous [A|B|C] with equal outer blocks, parameterized by
//!   the middle fraction N_B/N, open chain;
//! - family 2: contiguous [A|B|C] with equal trailing blocks, parameterized
//!   by the leading fraction N_A/N, open chain;
//! - family 3: the same blocks as family 2 on a ring.
//!
//! Block sizes deriving from a fraction are rounded to the nearest integer
//! that keeps the remaining qubits evenly splittable between the other two
//! blocks.

use crate::error::{Error, Result};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConfigTag {
    Config1,
    Config2,
    Config3,
    Custom,
}

impl fmt::Display for ConfigTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConfigTag::Config1 => "config1",
            ConfigTag::Config2 => "config2",
            ConfigTag::Config3 => "config3",
            ConfigTag::Custom => "custom",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    labels: Vec<u8>,
    n_parties: usize,
    tag: ConfigTag,
    parameter: Option<f64>,
}

impl Partition {
    /// Builds from explicit per-qubit labels; labels must cover 0..k-1 for
    /// some k >= 2 with every party non-empty.
    pub fn new(labels: Vec<u8>) -> Result<Self> {
        Self::with_tag(labels, ConfigTag::Custom, None)
    }

    fn with_tag(labels: Vec<u8>, tag: ConfigTag, parameter: Option<f64>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidPartition("no qubits".into()));
        }
        let k = *labels.iter().max().unwrap() as usize + 1;
        if k < 2 {
            return Err(Error::InvalidPartition("need at least two parties".into()));
        }
        let mut counts = vec![0usize; k];
        for &l in &labels {
            counts[l as usize] += 1;
        }
        if let Some(empty) = counts.iter().position(|&c| c == 0) {
            return Err(Error::InvalidPartition(format!("party {empty} is empty")));
        }
        Ok(Partition {
            labels,
            n_parties: k,
            tag,
            parameter,
        })
    }

    /// Contiguous blocks with the given sizes, labeled 0, 1, 2, ... in order.
    pub fn from_blocks(sizes: &[usize]) -> Result<Self> {
        Self::blocks_tagged(sizes, ConfigTag::Custom, None)
    }

    fn blocks_tagged(sizes: &[usize], tag: ConfigTag, parameter: Option<f64>) -> Result<Self> {
        if sizes.len() < 2 {
            return Err(Error::InvalidPartition("need at least two blocks".into()));
        }
        if sizes.len() > 256 {
            return Err(Error::InvalidPartition("too many blocks".into()));
        }
        let mut labels = Vec::with_capacity(sizes.iter().sum());
        for (i, &s) in sizes.iter().enumerate() {
            if s == 0 {
                return Err(Error::InvalidPartition(format!("block {i} is empty")));
            }
            labels.extend(std::iter::repeat_n(i as u8, s));
        }
        Self::with_tag(labels, tag, parameter)
    }

    /// [A|B|C] with |A| = |C| = (n - n_b) / 2.
    pub fn config1(n: usize, n_b: usize) -> Result<Self> {
        if n_b == 0 || n_b + 2 > n || (n - n_b) % 2 != 0 {
            return Err(Error::InvalidPartition(format!(
                "middle block {n_b} does not leave an even positive remainder of {n}"
            )));
        }
        let side = (n - n_b) / 2;
        Self::blocks_tagged(
            &[side, n_b, side],
            ConfigTag::Config1,
            Some(n_b as f64 / n as f64),
        )
    }

    /// [A|B|C] with the middle fraction n_b/n nearest to `fraction`.
    pub fn config1_fraction(n: usize, fraction: f64) -> Result<Self> {
        let n_b = nearest_block(n, fraction)?;
        let mut p = Self::config1(n, n_b)?;
        p.parameter = Some(fraction);
        Ok(p)
    }

    /// [A|B|C] with |B| = |C| = (n - n_a) / 2.
    pub fn config2(n: usize, n_a: usize) -> Result<Self> {
        if n_a == 0 || n_a + 2 > n || (n - n_a) % 2 != 0 {
            return Err(Error::InvalidPartition(format!(
                "leading block {n_a} does not leave an even positive remainder of {n}"
            )));
        }
        let side = (n - n_a) / 2;
        Self::blocks_tagged(
            &[n_a, side, side],
            ConfigTag::Config2,
            Some(n_a as f64 / n as f64),
        )
    }

    pub fn config2_fraction(n: usize, fraction: f64) -> Result<Self> {
        let n_a = nearest_block(n, fraction)?;
        let mut p = Self::config2(n, n_a)?;
        p.parameter = Some(fraction);
        Ok(p)
    }

    /// Same blocks as family 2; meant for periodic chains where A wraps
    /// against C.
    pub fn config3(n: usize, n_a: usize) -> Result<Self> {
        let mut p = Self::config2(n, n_a)?;
        p.tag = ConfigTag::Config3;
        Ok(p)
    }

    pub fn config3_fraction(n: usize, fraction: f64) -> Result<Self> {
        let mut p = Self::config2_fraction(n, fraction)?;
        p.tag = ConfigTag::Config3;
        Ok(p)
    }

    /// Contiguous blocks proportional to `ratios`, largest-remainder rounded
    /// to sum to n.
    pub fn from_ratios(n: usize, ratios: &[u32]) -> Result<Self> {
        if ratios.len() < 2 || ratios.iter().any(|&r| r == 0) {
            return Err(Error::InvalidPartition("ratios must be >= 1".into()));
        }
        let total: u64 = ratios.iter().map(|&r| r as u64).sum();
        let mut sizes: Vec<usize> = Vec::with_capacity(ratios.len());
        let mut rema: Vec<(usize, f64)> = Vec::new();
        let mut assigned = 0usize;
        for (i, &r) in ratios.iter().enumerate() {
            let exact = n as f64 * r as f64 / total as f64;
            let floor = exact.floor() as usize;
            sizes.push(floor);
            assigned += floor;
            rema.push((i, exact - floor as f64));
        }
        rema.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        for k in 0..(n - assigned) {
            sizes[rema[k % rema.len()].0] += 1;
        }
        if sizes.iter().any(|&s| s == 0) {
            return Err(Error::InvalidPartition(format!(
                "{n} qubits cannot realize ratios {ratios:?}"
            )));
        }
        Self::blocks_tagged(&sizes, ConfigTag::Custom, None)
    }

    pub fn n_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn label(&self, qubit: usize) -> u8 {
        self.labels[qubit]
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn tag(&self) -> ConfigTag {
        self.tag
    }

    /// The producing fraction for the standard families, if any.
    pub fn parameter(&self) -> Option<f64> {
        self.parameter
    }

    pub fn party_qubits(&self, party: usize) -> Vec<usize> {
        (0..self.labels.len())
            .filter(|&q| self.labels[q] as usize == party)
            .collect()
    }

    pub fn party_sizes(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.n_parties];
        for &l in &self.labels {
            counts[l as usize] += 1;
        }
        counts
    }

    /// Coarse-grains by merging party b into party a. Labels are compacted
    /// so they stay contiguous.
    pub fn merge(&self, a: usize, b: usize) -> Result<Self> {
        if a >= self.n_parties || b >= self.n_parties || a == b {
            return Err(Error::InvalidPartition(format!(
                "cannot merge parties {a} and {b} out of {}",
                self.n_parties
            )));
        }
        if self.n_parties == 2 {
            return Err(Error::InvalidPartition(
                "merging a bipartition leaves one party".into(),
            ));
        }
        let (lo, hi) = (a.min(b) as u8, a.max(b) as u8);
        let labels = self
            .labels
            .iter()
            .map(|&l| {
                let l = if l == hi { lo } else { l };
                if l > hi {
                    l - 1
                } else {
                    l
                }
            })
            .collect();
        Self::with_tag(labels, ConfigTag::Custom, None)
    }
}

/// Nearest block size to fraction * n with n - size even and both leftover
/// blocks non-empty. Ties go to the smaller size.
fn nearest_block(n: usize, fraction: f64) -> Result<usize> {
    if !(0.0..1.0).contains(&fraction) || fraction <= 0.0 {
        return Err(Error::InvalidPartition(format!(
            "fraction {fraction} outside (0, 1)"
        )));
    }
    let t = fraction * n as f64;
    let mut best: Option<(f64, usize)> = None;
    let mut k = 1usize;
    while k + 2 <= n {
        if (n - k) % 2 == 0 {
            let d = (k as f64 - t).abs();
            let better = match best {
                None => true,
                Some((bd, bk)) => d < bd - 1e-12 || (d < bd + 1e-12 && k < bk),
            };
            if better {
                best = Some((d, k));
            }
        }
        k += 1;
    }
    best.map(|(_, k)| k)
        .ok_or_else(|| Error::InvalidPartition(format!("no valid block size for n = {n}")))
}
