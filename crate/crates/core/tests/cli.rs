//! The `qca` binary end to end: exit codes, outputs and the manifest.

mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::config_path;
use qca_dirac::harness::manifest::sha256_hex;
use qca_dirac::harness::Manifest;

fn qca(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qca")).args(args).output().expect("spawn qca")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn lists_every_experiment() {
    let out = qca(&["list-experiments"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let names: Vec<&str> = text.lines().filter_map(|l| l.split_whitespace().next()).collect();
    assert_eq!(names.len(), 11);
    for n in ["unitarity", "wavepacket", "heisenberg_check", "dirac_sea", "nogo_csp"] {
        assert!(names.contains(&n), "{n} missing");
    }
}

#[test]
fn validates_shipped_configs() {
    for entry in fs::read_dir(common::experiments_dir()).unwrap() {
        let p = entry.unwrap().path();
        let name = p.file_name().unwrap().to_str().unwrap().to_string();
        if name.starts_with('c') && name.ends_with(".json") {
            let out = qca(&["validate", path(&p)]);
            assert_eq!(code(&out), 0, "{name}: {}", String::from_utf8_lossy(&out.stderr));
        }
    }
}

#[test]
fn bad_configs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("syntax.json", "{ \"experiment\": \"unitarity\",\n  \"lattice\": { \"L\": 4 \n"),
        ("field.json", r#"{"experiment":"unitarity","lattice":{"L":4,"theta":0.1},"colour":1}"#),
        ("kind.json", r#"{"experiment":"teleport","lattice":{"L":4,"theta":0.1}}"#),
        ("size.json", r#"{"experiment":"unitarity","lattice":{"L":65,"theta":0.1}}"#),
    ];
    for (name, text) in cases {
        let p = dir.path().join(name);
        fs::write(&p, text).unwrap();
        for sub in ["validate", "run"] {
            let out = qca(&[sub, path(&p)]);
            assert_eq!(code(&out), 2, "{sub} {name}");
            assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
        }
    }
    assert_eq!(code(&qca(&["run", "/nonexistent/config.json"])), 2);
}

#[test]
fn run_writes_outputs_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config_path("c04_anticommutation.json");
    let out = qca(&["run", path(&cfg), "--output-dir", path(dir.path())]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8(out.stdout).unwrap().contains("pass  anticommutator_deviation"));

    let manifest: Manifest = serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest.experiment, "anticommutation");
    assert_eq!(manifest.config_sha256, sha256_hex(&fs::read(&cfg).unwrap()));
    assert!(manifest.passed && manifest.failed_checks().next().is_none());
    assert_eq!(manifest.parameters["lattice"]["L"], 3);
    for f in &manifest.outputs {
        assert!(dir.path().join(f).is_file(), "{f} not written");
    }
}

#[test]
fn failed_check_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = qca(&["--quiet", "run", path(&config_path("c07_dirac_limit.json")), "--output-dir", path(dir.path())]);
    assert_eq!(code(&out), 1);
    assert!(out.stdout.is_empty());
    let manifest: Manifest = serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    let failed: Vec<&str> = manifest.failed_checks().map(|c| c.name.as_str()).collect();
    assert_eq!(failed, ["dirac_hamiltonian_deviation"]);
}

#[test]
fn thread_count_does_not_change_results() {
    let cfg = config_path("c01_unitarity.json");
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(code(&qca(&["--threads", "1", "run", path(&cfg), "--output-dir", path(a.path())])), 0);
    assert_eq!(code(&qca(&["--threads", "3", "run", path(&cfg), "--output-dir", path(b.path())])), 0);
    for f in ["unitarity.csv", "manifest.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}
