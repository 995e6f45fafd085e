//! Result files: long-format CSV per run, a JSON manifest per sweep, and a
//! JSON fit report per collapse.
//!
//! CSV columns: N, p, boundary, config, partition_param, t, tau, observable,
//! mean, variance, stderr, n_traj, seed. Steady-state rows carry t = -1 and
//! tau = -1; dynamics rows carry the 1-based layer and tau = t/N. Custom
//! partitions carry partition_param = -1.

use crate::config::ComboMeta;
use crate::ensemble::EnsembleResult;
use crate::error::{Error, Result};
use crate::scaling::{ScalingCurveSet, SizeCurve};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub fn tool_version() -> String {
    format!(
        "ghz-clifford {} ({})",
        env!("CARGO_PKG_VERSION"),
        env!("GIT_DESCRIBE")
    )
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CsvRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub p: f64,
    pub boundary: String,
    pub config: String,
    pub partition_param: f64,
    pub t: i64,
    pub tau: f64,
    pub observable: String,
    pub mean: f64,
    pub variance: f64,
    pub stderr: f64,
    pub n_traj: usize,
    pub seed: u64,
}

/// Writes one ensemble result as long-format CSV.
pub fn write_result_csv(path: &Path, meta: &ComboMeta, result: &EnsembleResult) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let multi = result.channels.iter().any(|c| c.desc.partition != 0);
    let boundary = match meta.boundary {
        crate::config::BoundaryChoice::Open => "open",
        crate::config::BoundaryChoice::Periodic => "periodic",
    };
    for ch in &result.channels {
        let name = if multi {
            format!("p{}.{}", ch.desc.partition, ch.desc.name)
        } else {
            ch.desc.name.clone()
        };
        for slot in 0..ch.mean.len() {
            let (t, tau) = if result.steady {
                (-1i64, -1.0)
            } else {
                (result.layers[slot] as i64, result.tau(slot))
            };
            w.serialize(CsvRow {
                n: meta.n_qubits,
                p: meta.meas_prob,
                boundary: boundary.to_string(),
                config: meta.config.clone(),
                partition_param: meta.parameter,
                t,
                tau,
                observable: name.clone(),
                mean: ch.mean[slot],
                variance: ch.variance[slot],
                stderr: ch.stderr[slot],
                n_traj: result.n_trajectories,
                seed: meta.seed,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows(path: &Path) -> Result<Vec<CsvRow>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for row in r.deserialize() {
        out.push(row?);
    }
    Ok(out)
}

/// Control-parameter axis for building scaling curves out of CSV rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    MeasProb,
    PartitionParam,
    Tau,
}

impl std::str::FromStr for Axis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Axis> {
        match s {
            "p" | "meas_prob" => Ok(Axis::MeasProb),
            "param" | "partition_param" => Ok(Axis::PartitionParam),
            "tau" | "t" => Ok(Axis::Tau),
            other => Err(Error::Config(format!(
                "unknown axis {other:?}; expected p, param, or tau"
            ))),
        }
    }
}

/// Collects curves of one observable from result files, grouped by chain
/// length; points sharing an x value are averaged. Standard errors are
/// floored at one event in n_traj: a sample spread of exactly zero badly
/// understates the uncertainty of a rare-event mean and would otherwise
/// dominate any weighted fit.
pub fn read_curves(paths: &[PathBuf], observable: &str, axis: Axis) -> Result<ScalingCurveSet> {
    let mut by_size: BTreeMap<usize, Vec<(f64, f64, f64)>> = BTreeMap::new();
    for path in paths {
        for row in read_rows(path)? {
            if row.observable != observable {
                continue;
            }
            let steady = row.t < 0;
            let x = match axis {
                Axis::MeasProb if steady => row.p,
                Axis::PartitionParam if steady => row.partition_param,
                Axis::Tau if !steady => row.tau,
                _ => continue,
            };
            let floor = 1.0 / row.n_traj.max(1) as f64;
            by_size
                .entry(row.n)
                .or_default()
                .push((x, row.mean, row.stderr.max(floor)));
        }
    }
    let mut curves = Vec::new();
    for (size, mut pts) in by_size {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut x = Vec::new();
        let mut y = Vec::new();
        let mut s = Vec::new();
        let mut i = 0;
        while i < pts.len() {
            let mut j = i;
            let (mut ym, mut sm) = (0.0, 0.0);
            while j < pts.len() && (pts[j].0 - pts[i].0).abs() < 1e-12 {
                ym += pts[j].1;
                sm += pts[j].2;
                j += 1;
            }
            let k = (j - i) as f64;
            x.push(pts[i].0);
            y.push(ym / k);
            s.push(sm / k);
            i = j;
        }
        curves.push(SizeCurve::new(size, x, y, s)?);
    }
    if curves.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "found {} chain length(s) with observable {observable:?}, need at least 2",
            curves.len()
        )));
    }
    ScalingCurveSet::new(curves)
}

#[derive(Clone, Debug, Serialize)]
pub struct ManifestEntry {
    #[serde(flatten)]
    pub meta: ComboMeta,
    pub file: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub tool: String,
    pub master_seed: u64,
    pub workers: usize,
    pub combos: Vec<ManifestEntry>,
}

pub fn write_manifest(path: &Path, manifest: &Manifest) -> Result<()> {
    let text = serde_json::to_string_pretty(manifest)?;
    std::fs::write(path, text)?;
    Ok(())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FitReport {
    pub observable: String,
    pub axis: String,
    pub files: Vec<String>,
    pub critical_value: f64,
    pub critical_uncertainty: f64,
    pub exponent_inv: f64,
    pub exponent_inv_uncertainty: f64,
    pub exponent: f64,
    pub quality: f64,
    pub window: [f64; 2],
    pub n_points: usize,
    pub fixed_critical: bool,
}

pub fn write_fit_report(path: &Path, report: &FitReport) -> Result<()> {
    let text = serde_json::to_string_pretty(report)?;
    std::fs::write(path, text)?;
    Ok(())
}
