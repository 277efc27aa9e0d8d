use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hybound::commands::{BoundReport, VerifyReport, EXPERIMENT_COLUMNS};
use hybound::{parse_config, RunManifest};

fn repo_file(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn hybound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hybound"))
        .args(args)
        .env("NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn bound_reports_worked_example_entropy() {
    let cfg = repo_file("configs/worked_example.toml");
    let o = hybound(&["bound", "--config", path(&cfg)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r: BoundReport = serde_json::from_slice(&o.stdout).unwrap();
    assert!((r.entropy_at_gamma0.total - 103.49).abs() < 5e-3);
    assert_eq!(r.entropy_at_gamma0.eps, 1.0);
    assert!(r.breakdown.total > r.breakdown.confidence_term);
}

#[test]
fn verify_gamma_exits_zero() {
    let o = hybound(&["verify", "--suite", "gamma", "--seed", "11"]);
    assert_eq!(o.status.code(), Some(0));
    let r: VerifyReport = serde_json::from_slice(&o.stdout).unwrap();
    assert!(r.passed);
    assert_eq!(r.suites.len(), 1);
    assert!(r.suites[0].check("gamma-identity").unwrap().passed);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("PASS gamma/gamma-identity"));
    assert!(!err.contains('\x1b'));
}

#[test]
fn unknown_command_is_a_usage_error() {
    let o = hybound(&["plot"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn invalid_config_lists_every_violation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[circuit]\nqubits = 12\ngates = 1\n[net]\ndims = [3, 1]\n[data]\nsizes = [20, 10]\n").unwrap();
    let o = hybound(&["bound", "--config", path(&cfg)]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("qubits ≤ 10"));
    assert!(err.contains("net.dims[0]") && err.contains("circuit.measurements"));
    assert!(err.contains("data.sizes"));
}

#[test]
fn json_config_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let toml = std::fs::read_to_string(repo_file("configs/worked_example.toml")).unwrap();
    let cfg = parse_config(&toml).unwrap();
    let json = dir.path().join("worked.json");
    std::fs::write(&json, cfg.to_json()).unwrap();
    let a = hybound(&["bound", "--config", path(&json)]);
    let b = hybound(&["bound", "--config", path(&repo_file("configs/worked_example.toml"))]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn experiment_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("smoke.csv");
    let o = hybound(&["experiment", "--config", path(&repo_file("configs/smoke.toml")), "--out", path(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let mut rdr = csv::Reader::from_path(&out).unwrap();
    assert_eq!(rdr.headers().unwrap().iter().collect::<Vec<_>>(), EXPERIMENT_COLUMNS);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4);
    for row in &rows {
        let gap: f64 = row[4].parse().unwrap();
        let total: f64 = row[8].parse().unwrap();
        assert!(gap <= total);
        assert!(row[2].contains('e'));
    }

    let manifest: RunManifest =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("smoke.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest.cells, 4);
    assert_eq!(manifest.config_hash, hybound::manifest::config_hash(&manifest.config));
    assert!(manifest.protocol.contains("own construction"));
}

#[test]
fn entropy_curve_rejects_reversed_range() {
    let cfg = repo_file("configs/worked_example.toml");
    let o = hybound(&["entropy-curve", "--config", path(&cfg), "--eps-min", "2", "--eps-max", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn shipped_configs_round_trip() {
    for name in ["worked_example", "gap_experiment", "smoke"] {
        let text = std::fs::read_to_string(repo_file(&format!("configs/{name}.toml"))).unwrap();
        let cfg = parse_config(&text).unwrap();
        let again = parse_config(&cfg.to_toml()).unwrap();
        assert_eq!(again, cfg, "{name}");
        assert_eq!(again.to_toml(), cfg.to_toml(), "{name}");
    }
}
