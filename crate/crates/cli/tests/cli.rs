use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_routegames"))
        .current_dir(dir)
        .env_remove("ROUTEGAMES_JOBS")
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["generate", "--kind", "ring", "--n", "8", "--out", "ring8.json"][..],
        &["generate", "--kind", "no-nash-sum", "--out", "nn.json"],
        &["generate", "--kind", "bucket-tight", "--a", "4", "--out", "bt4.json"],
    ] {
        assert!(run(dir.path(), args).status.success(), "{args:?}");
    }
    dir
}

#[test]
fn generate_prints_counts() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["generate", "--kind", "ring", "--n", "8", "--out", "ring8.json"]);
    assert!(stdout(&o).contains("profiles=256"));
    let o = run(dir.path(), &["generate", "--kind", "bucket-tight", "--a", "4", "--out", "bt4.json"]);
    assert!(stdout(&o).contains("players=16"));
    let text = std::fs::read_to_string(dir.path().join("ring8.json")).unwrap();
    assert!(routegames::parse_instance(&text).is_ok());
}

#[test]
fn bad_flags_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["generate", "--kind", "ring"][..],
        &["generate", "--kind", "ring", "--n", "2"],
        &["generate", "--kind", "hexagon"],
        &["analyze", "--model", "max"],
        &["dynamics", "--instance", "missing.json", "--model", "max"],
    ] {
        assert_eq!(run(dir.path(), args).status.code(), Some(2), "{args:?}");
    }
    std::fs::write(dir.path().join("bad.json"), "{\"nodes\": 2,\n \"edges\": [}").unwrap();
    let o = run(dir.path(), &["analyze", "--instance", "bad.json", "--model", "max"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn dynamics_outcomes_and_exit_codes() {
    let dir = setup();
    let d = dir.path();
    let o = run(d, &["dynamics", "--instance", "ring8.json", "--model", "max", "--trace", "t.csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("outcome=Converged steps=0 sc=1\n"));
    let csv = std::fs::read_to_string(d.join("t.csv")).unwrap();
    assert_eq!(csv, "step,player,old_idx,new_idx,old_cost,new_cost,sc_before,sc_after\n");

    let o = run(d, &["dynamics", "--instance", "nn.json", "--model", "sum", "--order", "round-robin"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).starts_with("outcome=Cycle "));

    let o = run(d, &["dynamics", "--instance", "nn.json", "--model", "sum", "--max-steps", "2"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).starts_with("outcome=Limit steps=2 "));
}

#[test]
fn converged_routing_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run(d, &["generate", "--kind", "random-grid", "--rows", "4", "--cols", "4", "--players", "5", "--strategies", "3", "--seed", "1", "--out", "g.json"]);
    for model in ["max", "sum-bucket"] {
        let o = run(d, &["dynamics", "--instance", "g.json", "--model", model, "--start", "random", "--seed", "3"]);
        assert_eq!(o.status.code(), Some(0));
        let out = stdout(&o);
        let fin = out.lines().find_map(|l| l.strip_prefix("final=")).unwrap();
        let v = run(d, &["verify", "--instance", "g.json", "--model", model, "--routing", fin]);
        assert!(stdout(&v).contains("nash=true"), "{model}: {}", stdout(&v));
    }
}

#[test]
fn analyze_reports() {
    let dir = setup();
    let d = dir.path();
    let o = run(d, &["analyze", "--instance", "ring8.json", "--model", "max", "--out", "r.json"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("pos=1/1 poa=7/1\n"));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(d.join("r.json")).unwrap()).unwrap();
    assert_eq!(report["report"]["poa"], "7/1");
    assert!(report.get("stamp").is_none());

    let o = run(d, &["analyze", "--instance", "nn.json", "--model", "sum"]);
    assert!(stdout(&o).contains("nash_count=0"));
    assert!(stdout(&o).contains("pos=undefined poa=undefined"));

    let o = run(d, &["analyze", "--instance", "bt4.json", "--model", "sum", "--out", "bt.json"]);
    assert!(o.status.success());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(d.join("bt.json")).unwrap()).unwrap();
    let costs = report["report"]["nash_social_costs"].as_object().unwrap();
    assert!(costs.contains_key("20") && costs.contains_key("8"));

    let o = run(d, &["analyze", "--instance", "ring8.json", "--model", "max", "--out", "s.json", "--stamp"]);
    assert!(o.status.success());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(d.join("s.json")).unwrap()).unwrap();
    assert!(report["stamp"].is_u64());
}

#[test]
fn cap_exceeded_reports_exact_count() {
    let dir = setup();
    let o = run(dir.path(), &["analyze", "--instance", "ring8.json", "--model", "max", "--cap", "100"]);
    assert_eq!(o.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&o.stderr).contains("256"));
}

#[test]
fn jobs_env_overrides_flag() {
    let dir = setup();
    let d = dir.path();
    run(d, &["analyze", "--instance", "ring8.json", "--model", "max", "--out", "a.json"]);
    let o = Command::new(env!("CARGO_BIN_EXE_routegames"))
        .current_dir(d)
        .env("ROUTEGAMES_JOBS", "3")
        .args(["analyze", "--instance", "ring8.json", "--model", "max", "--jobs", "1", "--out", "b.json"])
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(std::fs::read(d.join("a.json")).unwrap(), std::fs::read(d.join("b.json")).unwrap());
    let o = Command::new(env!("CARGO_BIN_EXE_routegames"))
        .current_dir(d)
        .env("ROUTEGAMES_JOBS", "zero")
        .args(["analyze", "--instance", "ring8.json", "--model", "max"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn suite_filter() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["paper-suite", "--filter", "no-nash"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.contains("PASS")).count(), 4);
    assert!(out.lines().all(|l| !l.starts_with("ring8")));
    assert_eq!(run(dir.path(), &["paper-suite", "--filter", "nothing-matches"]).status.code(), Some(2));
}
