//! End-to-end checks of the binary: exit codes, output shape, the
//! determinism contract and tolerance monotonicity.

use std::fs;
use std::path::Path;
use std::process::Command;

fn cmera() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cmera"))
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("reading {name}: {e}"))
}

#[test]
fn default_profile_run_smoke() {
    let dir = tempfile::tempdir().unwrap();
    let status = cmera()
        .args(["profile", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let csv = read(dir.path(), "profile_circle.csv");
    assert!(csv.starts_with("# cmera "));
    assert!(csv.contains("# config: "));
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert!(
        header.split(',').count() >= 2,
        "need at least two columns: {header}"
    );
    // Circle output periodic: endpoints of the same s-block agree.
    let data: Vec<Vec<f64>> = csv
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('x'))
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    let s0 = data[0][1];
    let block: Vec<&Vec<f64>> = data.iter().filter(|r| r[1] == s0).collect();
    let (first, last) = (block[0], block[block.len() - 1]);
    assert_eq!(first[0], 0.0);
    assert!(
        (first[2] - last[2]).abs() < 1e-10 * first[2].abs(),
        "{} vs {}",
        first[2],
        last[2]
    );
    // Gnuplot companion exists next to the CSV.
    assert!(dir.path().join("profile_circle.gp").exists());
}

#[test]
fn reruns_are_byte_identical() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    for d in [&d1, &d2] {
        let status = cmera()
            .args(["beta", "--out"])
            .arg(d.path())
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert_eq!(
        read(d1.path(), "beta_line.csv"),
        read(d2.path(), "beta_line.csv")
    );
    assert_eq!(
        read(d1.path(), "beta_circle.csv"),
        read(d2.path(), "beta_circle.csv")
    );
}

#[test]
fn malformed_config_is_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, "{ not json").unwrap();
    let status = cmera()
        .args(["profile", "--config"])
        .arg(&cfg)
        .args(["--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn invalid_values_are_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"profile":{"profile":"magic","lambda":-1.0,"s":0.0,"picture":"rescaled"}}"#,
    )
    .unwrap();
    let status = cmera()
        .args(["profile", "--config"])
        .arg(&cfg)
        .args(["--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn empty_corpus_is_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"functions":[]}"#).unwrap();
    let status = cmera()
        .args(["images-check", "--config"])
        .arg(&cfg)
        .args(["--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn impossible_tolerance_is_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let status = cmera()
        .args(["error-scan", "--tolerance", "1e-300", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));
}

#[test]
fn json_format_embeds_config_and_version() {
    let dir = tempfile::tempdir().unwrap();
    let status = cmera()
        .args(["profile", "--format", "json", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&read(dir.path(), "profile_circle.json")).unwrap();
    assert!(doc["version"].is_string());
    assert!(doc["config"]["profile"]["lambda"].as_f64().is_some());
}

#[test]
fn tightening_tolerance_never_raises_error_estimates() {
    let loose_dir = tempfile::tempdir().unwrap();
    let tight_dir = tempfile::tempdir().unwrap();
    for (dir, tol) in [(&loose_dir, "1e-8"), (&tight_dir, "1e-11")] {
        let status = cmera()
            .args(["correlator", "--tolerance", tol, "--out"])
            .arg(dir.path())
            .status()
            .unwrap();
        assert!(status.success());
    }
    let max_err = |dir: &Path| -> f64 {
        read(dir, "correlator_phiphi_line.csv")
            .lines()
            .filter(|l| !l.starts_with('#') && !l.starts_with('x'))
            .map(|l| l.split(',').nth(2).unwrap().parse::<f64>().unwrap())
            .fold(0.0, f64::max)
    };
    let loose = max_err(loose_dir.path());
    let tight = max_err(tight_dir.path());
    assert!(tight <= loose, "tight {tight} vs loose {loose}");
}
