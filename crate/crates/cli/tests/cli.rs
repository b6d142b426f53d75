use std::path::Path;
use std::process::{Command, Output};

use ginlab::ensembles::{read_spectra_csv, EnsembleSpec, SymmetryClass};
use ginlab::mc_verify::ExactDensity;

fn ginlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ginlab")).args(args).env_remove("GINLAB_SEED").output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).skip(1).collect()
}

#[test]
fn sample_writes_one_row_per_eigenvalue() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.csv");
    let p = path.to_str().unwrap();
    let args = [
        "sample",
        "--class",
        "complex",
        "--variant",
        "circular",
        "--dim",
        "64",
        "--samples",
        "100",
        "--seed",
        "7",
        "--out",
        p,
    ];
    let out = ginlab(&args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("mean_real_count="));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(data_lines(&text).len(), 6400);
    assert!(text.starts_with("# ginlab "));
    let rows = read_spectra_csv(text.as_bytes()).unwrap();
    assert_eq!(rows.len(), 6400);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, workers: &str| {
        let path = dir.path().join(name);
        let out = ginlab(&[
            "sample",
            "--class",
            "real",
            "--dim",
            "9",
            "--samples",
            "40",
            "--seed",
            "11",
            "--workers",
            workers,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        std::fs::read(path).unwrap()
    };
    let a = run("a.csv", "1");
    assert_eq!(a, run("b.csv", "1"));
    assert_eq!(a, run("c.csv", "3"));
}

#[test]
fn header_carries_seed_hash_and_version() {
    let out = ginlab(&["exact", "gap", "--dim", "inf", "--s-max", "0.1", "--step", "0.05", "--seed", "5"]);
    let first = stdout(&out).lines().next().unwrap().to_string();
    assert!(first.starts_with(&format!("# ginlab {} seed=5 config=", env!("CARGO_PKG_VERSION"))), "{first}");
    let json = ginlab(&[
        "exact", "gap", "--dim", "inf", "--s-max", "0.1", "--step", "0.05", "--seed", "5", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["seed"], 5);
    let hash = v["config_hash"].as_str().unwrap();
    assert_eq!(hash.len(), 16);
    // the format changes the bytes written, so it is part of the hash
    assert_ne!(hash, first.rsplit("config=").next().unwrap());
    assert_eq!(v["table"]["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn odd_quaternion_dim_is_a_usage_error() {
    let out = ginlab(&["sample", "--class", "quaternion", "--dim", "7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dim must be even"));
}

#[test]
fn exact_gap_grid() {
    let out = ginlab(&["exact", "gap", "--dim", "inf", "--s-max", "3", "--step", "0.01"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows = data_lines(&text);
    assert_eq!(rows.len(), 301);
    assert_eq!(rows[0], "0.0,1.0");
}

#[test]
fn incompatible_curve_is_a_usage_error() {
    assert_eq!(ginlab(&["exact", "real_density", "--class", "complex", "--dim", "10"]).status.code(), Some(2));
    assert_eq!(ginlab(&["exact", "edge", "--class", "real", "--dim", "10"]).status.code(), Some(2));
    assert_eq!(ginlab(&["exact", "density", "--dim", "inf"]).status.code(), Some(2));
    assert_eq!(ginlab(&["exact", "nosuchcurve"]).status.code(), Some(2));
}

#[test]
fn exact_density_passes_library_values_through() {
    let out = ginlab(&["exact", "density", "--class", "real", "--dim", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let row0 = data_lines(&text)[0];
    let (x, v) = row0.split_once(',').unwrap();
    assert_eq!(x, "0.0");
    let spec = EnsembleSpec::circular(SymmetryClass::Real, 20).unwrap();
    let lib = ExactDensity::new(&spec).unwrap().real_axis(0.0).unwrap();
    assert_eq!(v.parse::<f64>().unwrap().to_bits(), lib.to_bits());
}

#[test]
fn verify_density_passes() {
    let out = ginlab(&["verify", "density", "--class", "complex", "--dim", "64", "--samples", "2000", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let report = &v["verification"]["reports"][0];
    for key in ["statistic", "grid", "exact", "estimate", "stderr", "z", "pass", "seed", "samples"] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn verify_real_count_for_two_by_two() {
    let out = ginlab(&["verify", "real_count", "--class", "real", "--dim", "2", "--samples", "100000"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let exact = v["verification"]["reports"][0]["exact"][0].as_f64().unwrap();
    assert!((exact - 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn too_few_samples_fail_statistically() {
    assert_eq!(ginlab(&["verify", "all", "--samples", "10"]).status.code(), Some(1));
}

#[test]
fn tight_threshold_fails_statistically() {
    // a threshold barely above one flags ordinary fluctuations
    let out = ginlab(&["verify", "density", "--dim", "8", "--samples", "500", "--z-threshold", "1.01"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn io_failures_exit_three() {
    let out = ginlab(&["sample", "--dim", "4", "--samples", "2", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(ginlab(&["sample", "--config", "/nonexistent-dir/c.json"]).status.code(), Some(3));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"class": "real", "dim": 4, "samples": 3, "seed": 1}"#).unwrap();
    let c = cfg.to_str().unwrap();
    let from_file = stdout(&ginlab(&["sample", "--config", c]));
    assert!(from_file.contains("seed=1 "));
    assert!(from_file.contains(",real,") || from_file.contains(",pair,"));
    let overridden = stdout(&ginlab(&["sample", "--config", c, "--seed", "2"]));
    assert!(overridden.contains("seed=2 "));

    std::fs::write(&cfg, r#"{"dimension": 4}"#).unwrap();
    assert_eq!(ginlab(&["sample", "--config", c]).status.code(), Some(2));
}

#[test]
fn seed_falls_back_to_environment() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_ginlab"));
        cmd.args(["sample", "--dim", "3", "--samples", "1"]).args(extra).env_remove("GINLAB_SEED");
        if let Some(v) = env {
            cmd.env("GINLAB_SEED", v);
        }
        String::from_utf8(cmd.output().unwrap().stdout).unwrap()
    };
    assert!(run(Some("42"), &[]).starts_with("# ginlab") && run(Some("42"), &[]).contains("seed=42 "));
    assert!(run(Some("42"), &["--seed", "3"]).contains("seed=3 "));
    assert!(run(None, &[]).contains("seed=0 "));
    assert!(Path::new(env!("CARGO_BIN_EXE_ginlab")).exists());
}
