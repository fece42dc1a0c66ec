//! Exit codes, output formats and reproducibility of the command-line tool.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn chen() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chen"))
}

fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn algebra(name: &str) -> PathBuf {
    workspace_root().join("data/algebras").join(name)
}

fn run(args: &[&str]) -> Output {
    chen().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn validate_exit_codes() {
    let ok = run(&["validate", algebra("nonformal8.alg").to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    assert!(stdout(&ok).contains("valid"));

    // d^2 != 0
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.alg");
    std::fs::write(
        &bad,
        "degree_cap 5\n[generators]\na 2\nb 3\nc 4\n[differentials]\na = b\nb = c\n",
    )
    .unwrap();
    let invalid = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(invalid.status.code(), Some(1));
    let err = String::from_utf8_lossy(&invalid.stderr).to_string();
    assert!(err.contains("d²≠0") && err.contains('a'), "{err}");

    let missing = run(&["validate", "/no/such/file.alg"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn bar_report_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let out = run(&[
        "bar",
        algebra("nonformal8.alg").to_str().unwrap(),
        "--degree",
        "9",
        "--max-length",
        "6",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("rank 1"), "{text}");
    assert!(text.contains("[w_a|w_z]"), "{text}");
    assert!(text.contains("min length 2"), "{text}");
    assert!(text.contains("distortion exponent 11"), "{text}");
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(doc["rank"], 1);
    assert_eq!(doc["dim_chains"], 22);
}

#[test]
fn bar_sphere_ranks() {
    let out = run(&[
        "bar",
        algebra("sphere3.alg").to_str().unwrap(),
        "--degree",
        "4",
    ]);
    assert!(stdout(&out).contains("rank 1"), "{}", stdout(&out));
    assert!(stdout(&out).contains("[w|w]"), "{}", stdout(&out));
    let out = run(&[
        "bar",
        algebra("sphere3.alg").to_str().unwrap(),
        "--degree",
        "3",
    ]);
    assert!(stdout(&out).contains("rank 0"), "{}", stdout(&out));
}

#[test]
fn detect_command() {
    let out = run(&[
        "detect",
        algebra("nonformal8.alg").to_str().unwrap(),
        "--degree",
        "9",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("min length 2"), "{text}");
    assert!(text.contains("distortion exponent 11"), "{text}");

    // projective space: degree 2n, exponent 2n+2
    let out = run(&[
        "detect",
        algebra("cp2.alg").to_str().unwrap(),
        "--degree",
        "4",
        "--n",
        "5",
    ]);
    let text = stdout(&out);
    assert!(text.contains("min length 2"), "{text}");
    assert!(text.contains("distortion exponent 6"), "{text}");

    // rank-zero degree: no detecting class
    let out = run(&[
        "detect",
        algebra("sphere3.alg").to_str().unwrap(),
        "--degree",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

fn read_bytes(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap()
}

#[test]
fn outputs_are_reproducible_and_match_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("a");
    let out2 = dir.path().join("b");
    let args = |out: &Path| {
        vec![
            "degree".to_string(),
            "--map".into(),
            "zpow:3".into(),
            "--mesh".into(),
            "12".into(),
            "--time-refine".into(),
            "8".into(),
            "--out".into(),
            out.to_str().unwrap().to_string(),
        ]
    };
    let r1 = chen().args(args(&out1)).output().unwrap();
    assert_eq!(r1.status.code(), Some(0), "{}", String::from_utf8_lossy(&r1.stderr));
    let r2 = chen().args(args(&out2)).output().unwrap();
    assert_eq!(r2.status.code(), Some(0));
    assert_eq!(read_bytes(&out1.join("degree.csv")), read_bytes(&out2.join("degree.csv")));
    assert_eq!(
        read_bytes(&out1.join("degree.manifest.json")),
        read_bytes(&out2.join("degree.manifest.json"))
    );

    // rebuild the command from the manifest alone and compare bytes again
    let manifest: serde_json::Value =
        serde_json::from_slice(&read_bytes(&out1.join("degree.manifest.json"))).unwrap();
    let out3 = dir.path().join("c");
    let rebuilt = chen()
        .args([
            "degree",
            "--map",
            manifest["args"]["map"].as_str().unwrap(),
            "--dim",
            manifest["args"]["dim"].as_str().unwrap(),
            "--mesh",
            &manifest["config"]["domain_res"].to_string(),
            "--time-refine",
            &manifest["config"]["time_refine"].to_string(),
            "--seed",
            &manifest["config"]["seed"].to_string(),
            "--out",
            out3.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(rebuilt.status.code(), Some(0));
    assert_eq!(read_bytes(&out1.join("degree.csv")), read_bytes(&out3.join("degree.csv")));
}

#[test]
fn config_file_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("cfg.toml");
    std::fs::write(&config, "domain_res = 8\ntime_refine = 6\n").unwrap();
    let out = dir.path().join("out");
    let r = chen()
        .args([
            "--config",
            config.to_str().unwrap(),
            "degree",
            "--map",
            "identity",
            "--mesh",
            "32",
            "--out",
            out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let manifest: serde_json::Value =
        serde_json::from_slice(&read_bytes(&out.join("degree.manifest.json"))).unwrap();
    assert_eq!(manifest["config"]["domain_res"], 8);
    assert_eq!(manifest["config"]["time_refine"], 6);
    assert!(manifest["input_hashes"]
        .as_object()
        .unwrap()
        .keys()
        .any(|k| k.ends_with("cfg.toml")));
}

#[test]
fn thread_count_does_not_change_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let mut outs = Vec::new();
    for (label, threads) in [("t1", "1"), ("t3", "3")] {
        let out = dir.path().join(label);
        let r = chen()
            .env("CHEN_THREADS", threads)
            .args([
                "degree", "--map", "zpow:2", "--mesh", "10", "--time-refine", "8",
                "--out", out.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert_eq!(r.status.code(), Some(0));
        outs.push(read_bytes(&out.join("degree.csv")));
    }
    assert_eq!(outs[0], outs[1], "CSV must not depend on the worker count");
}

#[test]
fn bound_check_command_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let r = chen()
        .args([
            "bound-check",
            "--r",
            "2",
            "--loop",
            "greatcircle",
            "--power",
            "5",
            "--samples",
            "20",
            "--mesh",
            "8",
            "--out",
            out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    assert!(String::from_utf8_lossy(&r.stdout).contains("PASS"));
    let csv = String::from_utf8(read_bytes(&out.join("bound-check.csv"))).unwrap();
    assert!(csv.starts_with("experiment,L,value,error_estimate,suplength,volume_estimate\n"));
}

#[test]
fn hopf_command_smoke() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let r = chen()
        .args([
            "hopf", "--map", "hopf", "--mesh", "12", "--time-refine", "16",
            "--out", out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let text = String::from_utf8_lossy(&r.stdout).to_string();
    let value: f64 = text
        .split('=')
        .nth(1)
        .unwrap()
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((value - 1.0).abs() < 0.2, "{text}");
}

#[test]
fn sharpness_command_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let r = chen()
        .args([
            "sharpness",
            "--mode",
            "degree",
            "--L",
            "1,2",
            "--mesh",
            "8",
            "--time-refine",
            "6",
            "--out",
            out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let csv = String::from_utf8(read_bytes(&out.join("sharpness.csv"))).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("sharpness degree,1,"));
    assert!(lines[2].starts_with("sharpness degree,2,"));
}
