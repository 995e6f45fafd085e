//! End-to-end checks of the command-line interface: exit codes, file
//! outputs, and determinism knobs.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ghz-clifford"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary should launch")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.display().to_string()
}

const SINGLE_RUN: &str = r#"
[circuit]
n_qubits = 8
meas_prob = 0.1

[partition]
config = "config1"
parameter = 0.3333333333333333

[ensemble]
trajectories = 50
mode = "steady"
seed = 7
"#;

#[test]
fn bound_prints_the_closed_form() {
    let out = run(&["bound", "--n", "300", "--sizes", "100,100,100"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("1.584963"), "unexpected output: {text}");

    let out = run(&["bound", "--n", "12", "--sizes", "8,2,2"]);
    assert!(stdout(&out).contains("0.247631"));

    let out = run(&["bound", "--n", "12", "--sizes", "4,4"]);
    assert_eq!(out.status.code(), Some(2), "two sizes must be rejected");
}

#[test]
fn run_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "single.toml", SINGLE_RUN);
    let out_dir = dir.path().join("results");
    let out = run(&["run", "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));

    let csv = out_dir.join("run_N8_p0.1000_config1_0.3333_open_steady.csv");
    assert!(csv.is_file(), "expected {}", csv.display());
    let text = std::fs::read_to_string(&csv).unwrap();
    let header = text.lines().next().unwrap();
    assert_eq!(
        header,
        "N,p,boundary,config,partition_param,t,tau,observable,mean,variance,stderr,n_traj,seed"
    );
    // steady mode: one row per channel, sentinel time columns
    for line in text.lines().skip(1) {
        assert!(line.starts_with("8,0.1,open,config1,"), "row: {line}");
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[5], "-1");
        assert_eq!(fields[6], "-1.0");
        assert_eq!(fields[11], "50");
    }

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["master_seed"], 7);
    assert_eq!(manifest["combos"].as_array().unwrap().len(), 1);
    assert_eq!(
        manifest["combos"][0]["file"],
        "run_N8_p0.1000_config1_0.3333_open_steady.csv"
    );
}

#[test]
fn run_refuses_grids() {
    let dir = tempfile::tempdir().unwrap();
    let grid = SINGLE_RUN.replace("meas_prob = 0.1", "meas_prob = [0.1, 0.2]");
    let cfg = write_config(dir.path(), "grid.toml", &grid);
    let out = run(&["run", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("sweep"), "{}", stderr(&out));
}

#[test]
fn sweep_then_collapse_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "sweep.toml",
        r#"
[circuit]
n_qubits = [8, 12]
meas_prob = [0.06, 0.12, 0.18, 0.24, 0.3]

[partition]
config = "config1"
parameter = 0.3333333333333333

[ensemble]
trajectories = 80
mode = "steady"
observables = ["ghz"]
seed = 11
"#,
    );
    let out_dir = dir.path().join("sweep");
    let out = run(&[
        "sweep",
        "--config",
        &cfg,
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csvs: Vec<_> = std::fs::read_dir(&out_dir)
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.path().extension().is_some_and(|x| x == "csv"))
        .collect();
    assert_eq!(csvs.len(), 10, "2 sizes x 5 rates");

    let pattern = format!("{}/*.csv", out_dir.display());
    let out = run(&[
        "collapse",
        &pattern,
        "--observable",
        "g3",
        "--axis",
        "p",
        "--bootstrap",
        "10",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("critical value"));

    let fit: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("fit_g3.json")).unwrap())
            .unwrap();
    assert!(fit["critical_value"].as_f64().unwrap().is_finite());
    assert!(fit["exponent_inv"].as_f64().unwrap().is_finite());
    assert_eq!(fit["fixed_critical"], false);
    assert_eq!(fit["files"].as_array().unwrap().len(), 10);
}

#[test]
fn bad_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.toml",
        &format!("{SINGLE_RUN}\n[output]\nrate = 3\n"),
    );
    let out = run(&["run", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn missing_result_files_are_insufficient_data() {
    let dir = tempfile::tempdir().unwrap();
    let pattern = format!("{}/*.csv", dir.path().display());
    let out = run(&["collapse", &pattern]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}

#[test]
fn oracle_check_runs_clean() {
    let out = run(&[
        "oracle-check",
        "--n",
        "6",
        "--trajectories",
        "3",
        "--depth",
        "4",
        "--meas-prob",
        "0.2",
        "--seed",
        "5",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("all 3 trajectories agree"));

    let out = run(&["oracle-check", "--n", "14"]);
    assert_eq!(out.status.code(), Some(2), "beyond the dense limit");
}

#[test]
fn worker_count_leaves_results_untouched() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "w.toml", SINGLE_RUN);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for (out_dir, workers) in [(&a, "1"), (&b, "3")] {
        let out = run(&[
            "run",
            "--config",
            &cfg,
            "--out",
            out_dir.to_str().unwrap(),
            "--workers",
            workers,
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let name = "run_N8_p0.1000_config1_0.3333_open_steady.csv";
    assert_eq!(
        std::fs::read(a.join(name)).unwrap(),
        std::fs::read(b.join(name)).unwrap()
    );
}

#[test]
fn seed_override_switches_the_stream() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "s.toml", SINGLE_RUN);
    let mut bytes = Vec::new();
    for (sub, seed) in [("a", "1"), ("b", "2"), ("c", "1")] {
        let out_dir = dir.path().join(sub);
        let out = run(&[
            "run",
            "--config",
            &cfg,
            "--out",
            out_dir.to_str().unwrap(),
            "--seed",
            seed,
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        bytes.push(
            std::fs::read(out_dir.join("run_N8_p0.1000_config1_0.3333_open_steady.csv")).unwrap(),
        );
    }
    assert_ne!(bytes[0], bytes[1], "different master seeds");
    assert_eq!(bytes[0], bytes[2], "same master seed");
}

#[test]
fn env_var_sets_the_worker_default() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "e.toml", SINGLE_RUN);
    let out_dir = dir.path().join("env");
    let out = bin()
        .args(["run", "--config", &cfg, "--out", out_dir.to_str().unwrap()])
        .env("GHZ_CLIFFORD_WORKERS", "2")
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));

    let out = bin()
        .args(["run", "--config", &cfg])
        .env("GHZ_CLIFFORD_WORKERS", "plenty")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "non-numeric worker count");
}
