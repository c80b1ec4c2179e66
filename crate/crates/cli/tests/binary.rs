use std::process::Command;

fn pk() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pk"))
}

const QUICK: &str = r#"
repeats = 2
[sampler]
warmup_steps = 150
sample_steps = 300
[protein]
reference_samples = 500
"#;

#[test]
fn whitworth_prints_json_and_passes_assert() {
    let out = pk().args(["whitworth", "--assert"]).output().unwrap();
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let a = value["discrete_posterior"]["A"].as_f64().unwrap();
    assert_eq!(a, 2.0 / 3.0);
}

#[test]
fn failed_thresholds_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("quick.toml");
    // a target far from the prior with a tiny chain cannot reach the bands
    std::fs::write(&cfg, format!("{QUICK}\n[vrw]\nalpha = 2.0\nbeta = 30.0\n")).unwrap();
    let out = pk()
        .args(["vrw", "--ablation", "--assert", "--config"])
        .arg(&cfg)
        .args(["--format", "csv"])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("acceptance:"));
}

#[test]
fn runtime_errors_exit_with_one() {
    let out = pk().args(["vrw", "--repeats", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = pk()
        .args(["vrw", "--config", "/nonexistent/pk.toml"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/pk.toml"));
    let out = pk().args(["vrw", "--emit-coords"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_must_match_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("p.toml");
    std::fs::write(&cfg, "experiment = \"protein\"\n").unwrap();
    let out = pk().arg("vrw").arg("--config").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn flags_override_config_and_files_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("quick.toml");
    std::fs::write(&cfg, QUICK).unwrap();
    let report = dir.path().join("protein.json");
    let status = pk()
        .arg("protein")
        .arg("--config")
        .arg(&cfg)
        .args(["--seed", "5", "--repeats", "1", "--emit-coords", "--out"])
        .arg(&report)
        .status()
        .unwrap();
    assert!(status.success());
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(value["config"]["seed"], 5);
    assert_eq!(value["repeats"].as_array().unwrap().len(), 1);
    assert_eq!(value["config"]["sampler"]["sample_steps"], 300);
    let pdb = std::fs::read_to_string(dir.path().join("protein.pdb")).unwrap();
    let atoms: Vec<&str> = pdb.lines().filter(|l| l.starts_with("ATOM")).collect();
    assert_eq!(atoms.len(), 8 * 3);
    assert!(atoms.iter().all(|l| l.len() == 78));
    assert_eq!(pdb.lines().last(), Some("END"));
}

#[test]
fn csv_output_with_histograms() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("quick.toml");
    std::fs::write(&cfg, QUICK).unwrap();
    let out = dir.path().join("vrw.csv");
    let status = pk()
        .arg("vrw")
        .arg("--config")
        .arg(&cfg)
        .args(["--format", "csv", "--emit-histograms", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 3);
    let hist = std::fs::read_to_string(dir.path().join("vrw_histograms.csv")).unwrap();
    assert_eq!(hist.lines().count(), 41);
}
