//! Runs the built binary end to end.

use std::path::{Path, PathBuf};
use std::process::Command;

use gyrospin_cli::output::sha256_hex;
use gyrospin_cli::RunConfig;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gyrospin"))
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const BASE: &str = r#"{
  "particle": { "l1_nm": 60, "l3_nm": 200 },
  "fields": { "B_mT": -0.5, "rotation_Hz": 1e6 },
  "simulation": {
    "B_grid_mT": { "start": -0.2, "stop": 0.2, "points": 41 },
    "temperatures_K": [0.001, 0.01],
    "gamma_points": 181,
    "validity": { "rotation_Hz": [1e5, 1e6, 1e7], "l3_nm": [50, 100, 200] }
  }
}"#;

fn run(cmd: &str, config: &Path, out: &Path, extra: &[&str]) -> std::process::Output {
    bin().arg(cmd).arg("--config").arg(config).arg("--out").arg(out).args(extra).output().unwrap()
}

fn manifest(out: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn repeated_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "c.json", BASE);
    for cmd in ["alignment", "surfaces", "validity", "derive"] {
        let a = tmp.path().join(format!("{cmd}_a"));
        let b = tmp.path().join(format!("{cmd}_b"));
        assert!(run(cmd, &cfg, &a, &["--jobs", "1"]).status.success());
        assert!(run(cmd, &cfg, &b, &["--jobs", "4"]).status.success());
        let files = manifest(&a)["outputs"].as_array().unwrap().clone();
        assert!(!files.is_empty());
        for f in files.iter().map(|f| f["file"].as_str().unwrap()).chain(["manifest.json"]) {
            let x = std::fs::read(a.join(f)).unwrap();
            let y = std::fs::read(b.join(f)).unwrap();
            assert_eq!(x, y, "{cmd}/{f}");
        }
    }
}

#[test]
fn manifest_lists_checksums_and_echoes_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "c.json", BASE);
    let out = tmp.path().join("o");
    assert!(run("alignment", &cfg, &out, &[]).status.success());
    let m = manifest(&out);
    for f in m["outputs"].as_array().unwrap() {
        let bytes = std::fs::read(out.join(f["file"].as_str().unwrap())).unwrap();
        assert_eq!(f["sha256"].as_str().unwrap(), sha256_hex(&bytes));
        assert!(!bytes.contains(&b'\r'));
    }
    let echo = serde_json::to_string(&m["config"]).unwrap();
    let original = RunConfig::from_json(BASE).unwrap();
    assert_eq!(RunConfig::from_json(&echo).unwrap(), original);
    assert_eq!(m["command"], "alignment");
}

#[test]
fn headers_carry_units_and_values_reconvert() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "c.json", BASE);
    let out = tmp.path().join("o");
    assert!(run("alignment", &cfg, &out, &[]).status.success());
    let text = std::fs::read_to_string(out.join("alignment.csv")).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(lines.next().unwrap(), "B_mT,T_K,mean_cos_gamma,variance");
    let first: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(first[0], -0.2);
    assert_eq!(first[1], 0.001);

    assert!(run("validity", &cfg, &out, &[]).status.success());
    let text = std::fs::read_to_string(out.join("validity.csv")).unwrap();
    let rows: Vec<Vec<String>> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[3][0].parse::<f64>().unwrap(), 1e6);
    assert_eq!(rows[4][1].parse::<f64>().unwrap(), 100.0);
}

#[test]
fn derived_manifest_reports_scales() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "c.json",
        r#"{"particle": {"l1_nm": 60, "l3_nm": 200}, "fields": {"B_mT": -100, "rotation_Hz": 1e6}}"#,
    );
    let out = tmp.path().join("o");
    assert!(run("derive", &cfg, &out, &[]).status.success());
    let m = manifest(&out);
    let ratio = m["summary"]["omega_beta_over_omega"].as_f64().unwrap();
    assert!(ratio > 4e-5 / 3.0 && ratio < 12e-5, "{ratio}");
    assert_eq!(m["scales"]["omega"].as_f64().unwrap(), 2.0 * std::f64::consts::PI * 1e6);
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o");
    let code = |cfg: &Path, extra: &[&str]| run("derive", cfg, &out, extra).status.code().unwrap();
    assert_eq!(code(&tmp.path().join("absent.json"), &[]), 5);
    assert_eq!(code(&write_config(tmp.path(), "m.json", "{ not json"), &[]), 6);
    let unknown = BASE.replace("\"l3_nm\": 200", "\"l3_nm\": 200, \"colour\": 1");
    assert_eq!(code(&write_config(tmp.path(), "u.json", &unknown), &[]), 7);
    let negative = BASE.replace("\"l3_nm\": 200", "\"l3_nm\": -200");
    assert_eq!(code(&write_config(tmp.path(), "n.json", &negative), &[]), 2);
    // Beyond the dispersive regime: a warning, fatal only with --strict.
    let strong = BASE.replace("\"B_mT\": -0.5", "\"B_mT\": -150");
    let p = write_config(tmp.path(), "s.json", &strong);
    assert_eq!(code(&p, &[]), 0);
    assert_eq!(code(&p, &["--strict"]), 4);
    assert!(!manifest(&out)["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn stabilize_writes_both_branches() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = BASE.replace(
        "\"gamma_points\": 181,",
        "\"gamma_points\": 181, \"rotor_L\": 4000, \"stabilization\": {\"periods\": 2, \"samples\": 20},",
    );
    let p = write_config(tmp.path(), "c.json", &cfg);
    let out = tmp.path().join("o");
    let o = run("stabilize", &p, &out, &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let header = std::fs::read_to_string(out.join("stabilization_plus.csv")).unwrap();
    assert!(header.lines().any(|l| l.starts_with("t_s,")));
    assert!(out.join("stabilization_minus.csv").exists());
}
