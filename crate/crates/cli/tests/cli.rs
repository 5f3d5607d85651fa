use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;

use clap::Parser;
use serde_json::Value;

use wpline_cli::{parse_config, Cli, Format, RunArgs};

fn args(flags: &[&str]) -> RunArgs {
    let mut v = vec!["wpline"];
    v.extend_from_slice(flags);
    Cli::try_parse_from(v).expect("flags parse").opts
}

fn wpline(flags: &[&str]) -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_wpline"));
    c.args(flags).env_remove("WPLINE_OUT_DIR");
    c
}

fn check_set(json: &Value) -> BTreeSet<(String, String, String)> {
    json["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            (
                c["id"].as_str().unwrap().to_string(),
                c["params"].to_string(),
                c["status"].as_str().unwrap().to_string(),
            )
        })
        .collect()
}

/// `(id, status)` of every check line in the text report, sorted.
fn text_checks(text: &str) -> Vec<(String, String)> {
    let mut v: Vec<(String, String)> = text
        .lines()
        .filter_map(|l| {
            let mut it = l.split_whitespace();
            let status = it.next()?;
            if !["pass", "fail", "skipped"].contains(&status) {
                return None;
            }
            Some((it.next()?.to_string(), status.to_string()))
        })
        .collect();
    v.sort();
    v
}

#[test]
fn flags_parse_into_a_config() {
    let cfg = parse_config(&args(&["--weights", "2,3,5", "--reduce", "2"])).unwrap();
    assert_eq!(cfg.double_weights().weights(), &[2, 3, 4]);
    assert_eq!(cfg.format, Format::Text);
    assert!(cfg.out.is_none());
    let cfg = parse_config(&args(&["--field", "gf:2", "--hmin", "-2", "--hmax", "4"])).unwrap();
    assert_eq!(cfg.suite.field.to_string(), "gf:2");
    assert_eq!((cfg.suite.window.h_min, cfg.suite.window.h_max), (-2, 4));
}

#[test]
fn every_problem_is_reported() {
    let errs = parse_config(&args(&["--reduce", "6"])).unwrap_err();
    assert_eq!(errs.len(), 1, "{errs:?}");
    let errs = parse_config(&args(&[
        "--reduce",
        "6",
        "--field",
        "gf:4",
        "--suite",
        "everything",
    ]))
    .unwrap_err();
    assert_eq!(errs.len(), 2, "{errs:?}");
    let errs = parse_config(&args(&[
        "--lambda",
        "[1:0],[1:0],[1:1]",
        "--hmin",
        "5",
        "--hmax",
        "1",
    ]))
    .unwrap_err();
    assert_eq!(errs.len(), 2, "{errs:?}");
    assert!(parse_config(&args(&["--field", "gf:3", "--weights", "2,2,2,2,2"])).is_err());
}

#[test]
fn config_file_is_merged_with_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(
        &path,
        "weights = [2, 2, 3]\nreduce = 1\nsuite = \"lemmas\"\nseed = 4\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let cfg = parse_config(&args(&["--config", p, "--reduce", "2"])).unwrap();
    assert_eq!(cfg.suite.weights.weights(), &[2, 2, 3]);
    assert_eq!(cfg.suite.reduced, 2);
    assert_eq!(cfg.suite.seed, 4);
    std::fs::write(&path, "colour = 1\n").unwrap();
    assert!(parse_config(&args(&["--config", p])).is_err());
}

#[test]
fn default_run_writes_a_passing_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("nested/report.json");
    let status = wpline(&["--format", "json", "--out", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let json: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(json["summary"]["fail"], 0);
    assert!(json["summary"]["pass"].as_u64().unwrap() > 0);
    let ids: BTreeSet<&str> = json["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert!(ids.iter().any(|id| id.starts_with("theorem.")));
    assert!(ids.iter().any(|id| id.starts_with("adjunction.")));
}

#[test]
fn lemmas_suite_text_and_json_agree() {
    let run = |format: &str| {
        let out = wpline(&[
            "--suite",
            "lemmas",
            "--weights",
            "2,2,3",
            "--reduce",
            "1",
            "--format",
            format,
        ])
        .output()
        .unwrap();
        assert_eq!(out.status.code(), Some(0));
        String::from_utf8(out.stdout).unwrap()
    };
    let json: Value = serde_json::from_str(&run("json")).unwrap();
    let checks = check_set(&json);
    assert!(checks
        .iter()
        .all(|(id, _, _)| !id.starts_with("theorem.") && !id.starts_with("adjunction.")));
    let mut from_json: Vec<(String, String)> = json["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            (
                c["id"].as_str().unwrap().to_string(),
                c["status"].as_str().unwrap().to_string(),
            )
        })
        .collect();
    from_json.sort();
    let from_text = text_checks(&run("text"));
    assert!(!from_text.is_empty());
    assert_eq!(from_text, from_json);
    let total = json["summary"]["total"].as_u64().unwrap() as usize;
    assert_eq!(json["checks"].as_array().unwrap().len(), total);
}

#[test]
fn output_directory_variable() {
    let dir = tempfile::tempdir().unwrap();
    let status = wpline(&["module", "--kind", "simple", "--degree", "(0,0,1;0)"])
        .env("WPLINE_OUT_DIR", dir.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let path = dir.path().join("module.json");
    assert!(Path::new(&path).exists());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let comps = doc["components"].as_array().unwrap();
    let nonzero: Vec<&Value> = comps.iter().filter(|c| c["dim"] != 0).collect();
    assert_eq!(nonzero.len(), 1);
    assert_eq!(nonzero[0]["degree"], "(0,0,4;-1)");
}

#[test]
fn config_errors_exit_with_two() {
    let out = wpline(&["--lambda", "[1:0],[1:0],[1:1]"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("coincide"), "{err}");
    assert_eq!(wpline(&["--bogus"]).status().unwrap().code(), Some(2));
    assert_eq!(
        wpline(&["module", "--degree", "(1,2"])
            .status()
            .unwrap()
            .code(),
        Some(2)
    );
}

#[test]
fn sweep_subcommand_aggregates() {
    let out = wpline(&[
        "sweep", "--max", "1", "--extra", "1,1,2", "--format", "json",
    ])
    .output()
    .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    // (1,1,1) with r′ = 1, then (1,1,2) with r′ = 1, 2
    assert_eq!(json["configs"], 3);
    assert_eq!(json["summary"]["fail"], 0);
}
