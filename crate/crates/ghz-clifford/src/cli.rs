//! Command-line front end.
//!
//! Exit codes: 0 success, 1 runtime or consistency failure, 2 bad arguments
//! or config, 3 not enough data for a requested fit.

use crate::circuit::{Boundary, CircuitConfig};
use crate::config::ExperimentConfig;
use crate::ensemble::run_ensemble;
use crate::error::{Error, Result};
use crate::oracle::{run_mirrored_trajectory, typicality_bound, MAX_DENSE_QUBITS};
use crate::partition::Partition;
use crate::report::{
    read_curves, tool_version, write_fit_report, write_manifest, write_result_csv, Axis, FitReport,
    Manifest, ManifestEntry,
};
use crate::scaling::{collapse, crossing_estimate, CollapseOptions};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;
use std::time::Instant;

const WORKERS_ENV: &str = "GHZ_CLIFFORD_WORKERS";

#[derive(Parser)]
#[command(
    name = "ghz-clifford",
    version,
    about = "Monitored Clifford circuits: GHZ structure, entropies, and scaling collapses"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the single ensemble described by a config file
    Run(RunArgs),
    /// Run every combination of a sweep config file
    Sweep(RunArgs),
    /// Fit a finite-size-scaling collapse to result files
    Collapse(CollapseArgs),
    /// Cross-check the tableau engine against a dense statevector
    OracleCheck(OracleArgs),
    /// Print the typicality upper bound on the tripartite GHZ count
    Bound(BoundArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment description (TOML)
    #[arg(long)]
    config: PathBuf,
    /// Worker threads; 0 lets the runtime decide
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory (default: [output].directory from the config, else "out")
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the master seed from the config
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct CollapseArgs {
    /// Result CSV files or glob patterns
    #[arg(required = true)]
    files: Vec<String>,
    /// Observable column to collapse
    #[arg(long, default_value = "g3")]
    observable: String,
    /// Control parameter: p, param, or tau
    #[arg(long, default_value = "p")]
    axis: String,
    /// Pin the critical value and fit only the exponent
    #[arg(long)]
    fix_critical: Option<f64>,
    /// Restrict the fit to LO:HI on the control axis
    #[arg(long)]
    window: Option<String>,
    /// Gaussian resamples for the uncertainty estimate
    #[arg(long, default_value_t = 100)]
    bootstrap: usize,
    #[arg(long, default_value_t = 0x5ca1_ab1e)]
    seed: u64,
    /// Directory for the fit report JSON
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    /// Chain length (even, at most the dense limit)
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 0.15)]
    meas_prob: f64,
    #[arg(long, default_value_t = 20)]
    trajectories: usize,
    /// Layers per trajectory; defaults to the chain length
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Close the chain into a ring
    #[arg(long)]
    periodic: bool,
}

#[derive(Args)]
struct BoundArgs {
    /// Total number of qubits
    #[arg(long)]
    n: usize,
    /// Comma-separated party sizes, e.g. 4,4,4
    #[arg(long)]
    sizes: String,
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args, true),
        Command::Sweep(args) => cmd_run(args, false),
        Command::Collapse(args) => cmd_collapse(args),
        Command::OracleCheck(args) => cmd_oracle_check(args),
        Command::Bound(args) => cmd_bound(args),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) => 2,
                Error::InsufficientData(_) | Error::DegenerateData(_) => 3,
                _ => 1,
            }
        }
    }
}

fn resolve_workers(flag: Option<usize>) -> Result<usize> {
    if let Some(w) = flag {
        return Ok(w);
    }
    match std::env::var(WORKERS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("{WORKERS_ENV}={v:?} is not a worker count"))),
        Err(_) => Ok(0),
    }
}

fn cmd_run(args: RunArgs, single: bool) -> Result<()> {
    let cfg = ExperimentConfig::from_path(&args.config)?;
    let combos = cfg.expand(args.seed)?;
    if single && combos.len() != 1 {
        return Err(Error::Config(format!(
            "config expands to {} combinations; use `sweep` for grids",
            combos.len()
        )));
    }
    let workers = resolve_workers(args.workers)?;
    let out_dir = args
        .out
        .or_else(|| cfg.output.directory.clone().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    std::fs::create_dir_all(&out_dir)?;
    let master_seed = args.seed.unwrap_or(cfg.ensemble.seed);

    let mut entries = Vec::new();
    let total = combos.len();
    for (meta, spec) in combos {
        let started = Instant::now();
        let result = run_ensemble(&spec, workers)?;
        let file = format!("{}.csv", meta.file_stem());
        write_result_csv(&out_dir.join(&file), &meta, &result)?;
        println!(
            "[{}/{}] N={} p={:.4} {}={:.4} -> {} ({} trajectories in {:.2?})",
            meta.index + 1,
            total,
            meta.n_qubits,
            meta.meas_prob,
            meta.config,
            meta.parameter,
            file,
            result.n_trajectories,
            started.elapsed()
        );
        entries.push(ManifestEntry { meta, file });
    }
    let manifest = Manifest {
        tool: tool_version(),
        master_seed,
        workers,
        combos: entries,
    };
    write_manifest(&out_dir.join("manifest.json"), &manifest)?;
    println!(
        "wrote {total} result file(s) and manifest.json to {}",
        out_dir.display()
    );
    Ok(())
}

fn expand_patterns(patterns: &[String]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for pat in patterns {
        let literal = PathBuf::from(pat);
        if literal.is_file() {
            out.push(literal);
            continue;
        }
        let matches =
            glob::glob(pat).map_err(|e| Error::Config(format!("bad pattern {pat:?}: {e}")))?;
        for m in matches {
            let p = m.map_err(|e| Error::Io(e.into()))?;
            if p.is_file() {
                out.push(p);
            }
        }
    }
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err(Error::InsufficientData(
            "no result files match the given paths".into(),
        ));
    }
    Ok(out)
}

fn parse_window(s: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = s.split(':').collect();
    let err = || Error::Config(format!("window {s:?} is not LO:HI"));
    if parts.len() != 2 {
        return Err(err());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| err())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| err())?;
    if !(lo < hi) {
        return Err(err());
    }
    Ok((lo, hi))
}

fn cmd_collapse(args: CollapseArgs) -> Result<()> {
    let files = expand_patterns(&args.files)?;
    let axis: Axis = args.axis.parse()?;
    let set = read_curves(&files, &args.observable, axis)?;
    let opts = CollapseOptions {
        fix_critical: args.fix_critical,
        window: args.window.as_deref().map(parse_window).transpose()?,
        n_bootstrap: args.bootstrap,
        seed: args.seed,
    };
    let fit = collapse(&set, &opts)?;

    let sizes: Vec<usize> = set.curves.iter().map(|c| c.size).collect();
    println!(
        "collapse of {} over {}: {} file(s), sizes {:?}, {} points in [{:.4}, {:.4}]",
        args.observable,
        args.axis,
        files.len(),
        sizes,
        fit.n_points,
        fit.window.0,
        fit.window.1
    );
    if let Some(xc) = crossing_estimate(&set) {
        println!("  curve crossings average: {xc:.4}");
    }
    if args.fix_critical.is_some() {
        println!("  critical value (pinned):  {:.4}", fit.critical_value);
    } else {
        println!(
            "  critical value:           {:.4} +- {:.4}",
            fit.critical_value, fit.critical_uncertainty
        );
    }
    println!(
        "  exponent 1/nu:            {:.3} +- {:.3}",
        fit.inv_exponent, fit.inv_exponent_uncertainty
    );
    println!("  exponent nu:              {:.3}", fit.exponent());
    println!("  collapse quality:         {:.2}", fit.quality);

    if let Some(dir) = args.out {
        std::fs::create_dir_all(&dir)?;
        let report = FitReport {
            observable: args.observable.clone(),
            axis: args.axis.clone(),
            files: files.iter().map(|p| p.display().to_string()).collect(),
            critical_value: fit.critical_value,
            critical_uncertainty: fit.critical_uncertainty,
            exponent_inv: fit.inv_exponent,
            exponent_inv_uncertainty: fit.inv_exponent_uncertainty,
            exponent: fit.exponent(),
            quality: fit.quality,
            window: [fit.window.0, fit.window.1],
            n_points: fit.n_points,
            fixed_critical: args.fix_critical.is_some(),
        };
        let path = dir.join(format!("fit_{}.json", args.observable));
        write_fit_report(&path, &report)?;
        println!("  wrote {}", path.display());
    }
    Ok(())
}

fn cmd_oracle_check(args: OracleArgs) -> Result<()> {
    if args.n > MAX_DENSE_QUBITS {
        return Err(Error::Config(format!(
            "dense cross-check is limited to {MAX_DENSE_QUBITS} qubits, got {}",
            args.n
        )));
    }
    if args.trajectories == 0 {
        return Err(Error::Config("need at least one trajectory".into()));
    }
    let cfg = CircuitConfig {
        n_qubits: args.n,
        meas_prob: args.meas_prob,
        boundary: if args.periodic {
            Boundary::Periodic
        } else {
            Boundary::Open
        },
        depth_layers: args.depth.unwrap_or(args.n),
        seed: args.seed,
    };
    cfg.validate()?;
    let partitions = vec![
        Partition::config1_fraction(args.n, 1.0 / 3.0)?,
        Partition::from_blocks(&[args.n / 2, args.n - args.n / 2])?,
        Partition::from_ratios(args.n, &[1, 1, 1, 1])?,
    ];
    println!(
        "mirroring {} trajectories of N={} p={} depth={} ({}) against the dense oracle",
        args.trajectories, args.n, args.meas_prob, cfg.depth_layers, cfg.boundary
    );
    let started = Instant::now();
    let mut comparisons = 0usize;
    for k in 0..args.trajectories {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        rng.set_stream(k as u64);
        let report = run_mirrored_trajectory(&cfg, &partitions, &mut rng)?;
        comparisons += report.comparisons;
        println!(
            "  trajectory {k}: OK ({} layers, {} comparisons)",
            report.layers_checked, report.comparisons
        );
    }
    println!(
        "all {} trajectories agree ({} comparisons in {:.2?})",
        args.trajectories,
        comparisons,
        started.elapsed()
    );
    Ok(())
}

fn cmd_bound(args: BoundArgs) -> Result<()> {
    let sizes: Vec<usize> = args
        .sizes
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("bad party size {s:?}")))
        })
        .collect::<Result<_>>()?;
    if sizes.len() != 3 {
        return Err(Error::Config(format!(
            "expected three party sizes, got {}",
            sizes.len()
        )));
    }
    let b = typicality_bound(args.n, [sizes[0], sizes[1], sizes[2]])?;
    println!(
        "typicality bound for N={} parties ({}, {}, {}): {b:.6}",
        args.n, sizes[0], sizes[1], sizes[2]
    );
    Ok(())
}
