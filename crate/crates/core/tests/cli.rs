use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use shallow_tunnel::config::REFERENCE_TOML;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_shallow-tunnel"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const SMALL_OUTPUTS: &str = "\n[outputs]\nx_points = 21\nperiphery_points = 12\nhistory_max_rows = 50\n";

#[test]
fn reference_prints_a_loadable_config() {
    let out = run(&["reference"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), REFERENCE_TOML);
}

#[test]
fn verify_passes_on_reference_case() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["verify", "-o", dir.path().to_str().unwrap()]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{stdout}");
    assert!(!stdout.contains("FAIL"));
    assert!(dir.path().join("verification.json").exists());
}

#[test]
fn verify_reports_failure_for_coarse_truncation() {
    let dir = tempfile::tempdir().unwrap();
    let text = REFERENCE_TOML.replace("N = 200", "N = 8").replace("M = 500", "M = 30");
    let cfg = write_config(dir.path(), "coarse.toml", &text);
    let out = run(&["verify", &cfg, "-o", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn invalid_config_lists_every_problem() {
    let dir = tempfile::tempdir().unwrap();
    let text = REFERENCE_TOML
        .replace("H = 10.0", "H = 4.0")
        .replace("nu = 0.3", "nu = 0.7")
        .replace("V = 2.0", "V = -1.0");
    let cfg = write_config(dir.path(), "bad.toml", &format!("{text}\n[extra]\nfoo = 1\n"));
    let out = run(&["verify", &cfg, "-o", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    for needle in ["H", "nu", "V", "[extra]"] {
        assert!(err.contains(needle), "missing {needle} in {err}");
    }
}

#[test]
fn missing_config_file_is_an_error() {
    let out = run(&["solve", "/nonexistent/config.toml", "-o", "/tmp/unused-out"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn case_outputs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "case.toml", &format!("{REFERENCE_TOML}{SMALL_OUTPUTS}"));
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for d in [&a, &b] {
        let out = run(&["case", &cfg, "-o", d.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let mut csvs: Vec<_> = fs::read_dir(&a)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".csv"))
        .collect();
    csvs.sort();
    let expected = [
        "history_bottom.csv",
        "history_vault.csv",
        "periphery_100.csv",
        "periphery_105.csv",
        "periphery_110.csv",
        "periphery_120.csv",
        "surface_100.csv",
        "surface_105.csv",
        "surface_110.csv",
        "surface_120.csv",
    ];
    assert_eq!(csvs, expected);
    for name in &csvs {
        let x = fs::read(a.join(name)).unwrap();
        assert_eq!(x, fs::read(b.join(name)).unwrap(), "{name} differs");
        let text = String::from_utf8(x).unwrap();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("# config_hash="));
        let header = lines.next().unwrap();
        let width = header.split(',').count();
        assert!(lines.all(|l| l.split(',').count() == width), "{name}");
    }
    let surface = fs::read_to_string(a.join("surface_120.csv")).unwrap();
    assert_eq!(surface.lines().count(), 2 + 21);
    let history = fs::read_to_string(a.join("history_vault.csv")).unwrap();
    assert!(history.lines().count() - 2 <= 50);
}

#[test]
fn weightless_ground_gives_zero_fields() {
    let dir = tempfile::tempdir().unwrap();
    let text = REFERENCE_TOML.replace("gamma = 20.0", "gamma = 0.0");
    let cfg = write_config(dir.path(), "zero.toml", &format!("{text}{SMALL_OUTPUTS}"));
    let out = run(&["case", &cfg, "-o", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("surface_120.csv")).unwrap();
    for line in text.lines().skip(2) {
        let vals: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert!(vals[1..].iter().all(|v| *v == 0.0 || v.is_nan()), "{line}");
    }
}

#[test]
fn sweep_writes_series_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "sweep",
        "--param",
        "G_E*",
        "--values",
        "0,0.5",
        "-o",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("sweep_G_E_star_summary.json")).unwrap()).unwrap();
    assert_eq!(summary["values"].as_array().unwrap().len(), 2);
    assert!(summary["failures"].as_array().unwrap().is_empty());
    assert!(dir.path().join("sweep_G_E_star.csv").exists());
}

#[test]
fn sweep_rejects_unknown_parameter() {
    let out = run(&["sweep", "--param", "K*", "--values", "1", "-o", "/tmp/unused-out"]);
    assert_eq!(out.status.code(), Some(2));
}
