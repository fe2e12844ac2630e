use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cylbench"))
}

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn bundled_scenario_passes() {
    let path = scenario("ca43-forall-wins.json");
    let o = run(&["run", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("ForallWinsWithin(4)"));
}

#[test]
fn reports_are_byte_identical() {
    let path = scenario("ca43-forall-wins.json");
    for format in ["text", "machine"] {
        let a = run(&["run", path.to_str().unwrap(), "--format", format, "--threads", "1"]);
        let b = run(&["run", path.to_str().unwrap(), "--format", format]);
        assert_eq!(a.stdout, b.stdout, "{format}");
    }
}

#[test]
fn machine_report_is_json() {
    let path = scenario("powerset-exists.json");
    let o = run(&["run", path.to_str().unwrap(), "--format", "machine"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["exitCode"], 0);
    assert_eq!(v["checks"][1]["outcome"], "Exists");
}

#[test]
fn wrong_expectation_exits_one_with_diff() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "s.json",
        r#"{"name":"wrong","construction":{"kind":"powerset","n":2,"base":2},
            "checks":[{"op":"game","game":{"variant":"Gmk","m":4,"k":3},"expect":"Forall"}]}"#,
    );
    let o = run(&["run", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("MISMATCH: expected Forall"), "{}", stdout(&o));
}

#[test]
fn unknown_preset_exits_64() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "s.json",
        r#"{"name":"bad","construction":{"kind":"rainbow","preset":"nosuchRainbow","n":3},"checks":[]}"#,
    );
    assert_eq!(run(&["run", p.to_str().unwrap()]).status.code(), Some(64));
    assert_eq!(run(&["gen", "rainbow", "nosuch(1,2)"]).status.code(), Some(64));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
}

#[test]
fn exhausted_budget_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "s.json",
        r#"{"name":"tight","construction":{"kind":"rainbow","preset":"finiteRainbow","n":3,"greens":4,"reds":3},
            "checks":[{"op":"game","game":{"variant":"Gmk","m":6,"k":4},"budget":{"states":20}}]}"#,
    );
    let o = run(&["run", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("Unknown"));
}

#[test]
fn gen_then_check_and_solve() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("ca.json");
    let dot = dir.path().join("atoms.dot");
    let o = run(&[
        "gen",
        "rainbow",
        "finiteRainbow(3,2,1)",
        "--out",
        s.to_str().unwrap(),
        "--dot",
        dot.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(fs::read_to_string(&dot).unwrap().contains("digraph"));

    let o = run(&["check", "axioms", "--structure", s.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let o = run(&["solve", "Gmk(4,2)", "--structure", s.to_str().unwrap(), "--format", "machine"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["replayed"], true);

    assert_eq!(run(&["solve", "Gmk(3,2)"]).status.code(), Some(64));
}

#[test]
fn solve_ef_needs_no_structure() {
    let o = run(&["solve", "EF(4,6,4,3)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Forall"));
}

#[test]
fn check_network_reports_violation() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("ps.json");
    let o = run(&["gen", "powerset", "--n", "2", "--base", "2", "--out", s.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let s = s.to_str().unwrap();

    let good = write(dir.path(), "good.txt", "network dim 2 nodes 2\n0.0=00 0.1=01\n1.0=10 1.1=11\n");
    let o = run(&["check", "network", "--structure", s, "--network", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let bad = write(dir.path(), "bad.txt", "network dim 2 nodes 2\n0.0=00 0.1=00\n1.0=10 1.1=11\n");
    let o = run(&["check", "network", "--structure", s, "--network", bad.to_str().unwrap(), "--format", "machine"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["consistent"], false);
    assert!(v["violation"].as_str().unwrap().contains("d_01"));

    let malformed = write(dir.path(), "m.txt", "network dim 2 nodes 2\n0.1\n");
    let o = run(&["check", "network", "--structure", s, "--network", malformed.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn monk_basis_and_rep_search() {
    let dir = tempfile::tempdir().unwrap();
    let ra = dir.path().join("monk.json");
    let dot = dir.path().join("g.dot");
    let o = run(&[
        "gen", "monk", "--family", "cliques", "--n", "2", "--size", "1", "--colours", "2", "--out",
        ra.to_str().unwrap(), "--dot", dot.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(fs::read_to_string(&dot).unwrap().contains("v0 -- v1"));
    let o = run(&["check", "basis", "--structure", ra.to_str().unwrap(), "--m", "3"]);
    assert!(matches!(o.status.code(), Some(0 | 1)), "{}", stdout(&o));
    assert!(stdout(&o).contains("basic 3-matrices"));

    let ca = dir.path().join("ca.json");
    run(&["gen", "powerset", "--n", "2", "--base", "2", "--out", ca.to_str().unwrap()]);
    let ca = ca.to_str().unwrap();
    let o = run(&["rep-search", "--structure", ca, "--max-base", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("found on base 2"));
    assert_eq!(run(&["rep-search", "--structure", ca, "--max-base", "2", "--budget-states", "1"]).status.code(), Some(2));
    assert_eq!(run(&["rep-search", "--structure", ra.to_str().unwrap()]).status.code(), Some(64));
}
