use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linsofic")).args(args).output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

const Z: &str = r#"{"kind":"laurent","rank":1}"#;

#[test]
fn quotient_check_is_certified_over_a_large_prime() {
    let out = run(&["check", "--algebra", Z, "--field", "gf:101", "--m", "16", "--d", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["status"], "ok");
    assert_eq!(r["result"]["certified"], true);
    assert_eq!(r["result"]["dim_U"], 16);
    assert_eq!(r["command"], "check");
    assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn exhaustive_gf2_check_refutes_with_exit_1() {
    let out = run(&["check", "--algebra", Z, "--field", "gf:2", "--m", "16", "--d", "3", "--exhaustive"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["status"], "refuted");
    assert_eq!(r["result"]["rank_policy"]["kind"], "exhaustive");
    assert_eq!(r["result"]["rank_ok"], false);
}

#[test]
fn exhaustive_over_q_is_an_input_error() {
    let out = run(&["check", "--field", "q", "--n", "8", "--d", "2", "--skip-invariance", "--exhaustive"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn conjugate_with_mismatched_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (path(dir.path(), "a.json"), path(dir.path(), "b.json"));
    for (n, file) in [("8", &a), ("9", &b)] {
        let out = run(&["build", "--n", n, "--d", "2", "--skip-invariance", "--out", file]);
        assert_eq!(out.status.code(), Some(0));
    }
    let out = run(&["conjugate", "--map", &a, "--map-b", &b, "--epsilon", "1/4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dimension mismatch"));
}

#[test]
fn lld_verify_small_sweep() {
    let out = run(&["lld", "verify", "--field", "gf:2", "--dims", "2x2", "--d", "2", "--exhaustive"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["families_tested"], 256);
    assert_eq!(r["result"]["bms_violations"], 0);
    assert_eq!(r["result"]["amitsur_violations"], 0);
}

#[test]
fn builder_enforces_invariance_unless_skipped() {
    let out = run(&["build", "--n", "8", "--d", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invariant"));
    let out = run(&["build", "--n", "41", "--d", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["n"], 41);
}

#[test]
fn config_file_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = path(dir.path(), "cfg.json");
    std::fs::write(&cfg, r#"{"n": 12, "skip_invariance": true}"#).unwrap();
    let out = run(&["build", "--n", "8", "--d", "2", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["n"], 12);
    assert_eq!(r["config"]["n"], 12);
    assert_eq!(r["config"]["d"], 2);

    std::fs::write(&cfg, r#"{"window_size": 3}"#).unwrap();
    let out = run(&["build", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("window_size"));
    std::fs::write(&cfg, r#"{"d": "two"}"#).unwrap();
    assert_eq!(run(&["build", "--config", &cfg]).status.code(), Some(2));
}

#[test]
fn missing_and_malformed_settings() {
    assert_eq!(run(&["build", "--n", "8"]).status.code(), Some(2));
    assert_eq!(run(&["build", "--n", "8", "--d", "2", "--field", "gf:4"]).status.code(), Some(2));
    assert_eq!(run(&["build", "--n", "8", "--d", "2", "--algebra", "{"]).status.code(), Some(2));
    assert_eq!(run(&["demo", "weak-stability", "--epsilon", "0"]).status.code(), Some(2));
    assert_eq!(run(&["demo", "weak-stability", "--epsilon", "-1/4"]).status.code(), Some(2));
}

#[test]
fn map_files_round_trip_through_check() {
    let dir = tempfile::tempdir().unwrap();
    let map = path(dir.path(), "map.json");
    let out = run(&["quotient-rep", "--algebra", Z, "--m", "5", "--cap", "4", "--out", &map]);
    assert_eq!(out.status.code(), Some(0));
    let from_file = report(&run(&["check", "--map", &map, "--d", "2", "--exhaustive"]));
    let direct = report(&run(&["check", "--algebra", Z, "--m", "5", "--cap", "4", "--d", "2", "--exhaustive"]));
    assert_eq!(from_file["result"], direct["result"]);
}

#[test]
fn amplify_reports_blocks() {
    let out = run(&["amplify", "--algebra", Z, "--m", "4", "--cap", "2", "--targets", "4,9"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let amplified = r["result"]["amplified"].as_array().unwrap();
    assert_eq!(amplified[0]["copies"], 1);
    assert_eq!(amplified[1]["copies"], 2);
    assert_eq!(amplified[1]["pad"], 1);
    assert_eq!(amplified[1]["map"]["n"], 9);
    let out = run(&["amplify", "--algebra", Z, "--m", "4", "--cap", "2", "--targets", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tile_reports_blocks() {
    let out = run(&["tile", "--n", "8", "--d", "4", "--skip-invariance", "--tile", "[[0],[1],[2],[3]]"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["tiling"]["ell"], 2);
    assert_eq!(r["result"]["tiling"]["codimension"], 0);
    assert_eq!(r["result"]["blocks"]["block_dims"], serde_json::json!([4, 4]));
}

#[test]
fn timing_is_opt_in() {
    let plain = report(&run(&["build", "--n", "8", "--d", "2", "--skip-invariance"]));
    assert!(plain.get("elapsed_ms").is_none());
    let timed = report(&run(&["build", "--n", "8", "--d", "2", "--skip-invariance", "--timing"]));
    assert!(timed["elapsed_ms"].is_u64());
}
