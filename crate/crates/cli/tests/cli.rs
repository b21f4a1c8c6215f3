use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trackcoh")).args(args).output().expect("binary runs")
}

fn run_to(args: &[&str], out: &Path) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--out", out.to_str().unwrap()]);
    let o = run(&all);
    let report = serde_json::from_str(&std::fs::read_to_string(out).expect("report written")).expect("report is JSON");
    (o.status.code().unwrap(), report)
}

#[test]
fn validate_accepts_fixture_and_rejects_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let (code, r) = run_to(&["validate", fixture("t1.json").to_str().unwrap()], &out);
    assert_eq!(code, 0);
    assert_eq!(r["status"], "ok");
    let (code, r) = run_to(&["validate", fixture("corrupt/z2_not_discrete.json").to_str().unwrap()], &out);
    assert_eq!(code, 1);
    assert!(r["audit"].as_array().unwrap().iter().any(|c| c["ok"] == false));
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"version\": 1, \"schema\": \"track\", \"objects\": [").unwrap();
    assert_eq!(run(&["validate", bad.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&bad, "{\"version\": 99, \"schema\": \"graph\", \"objects\": [], \"edges\": []}").unwrap();
    assert_eq!(run(&["validate", bad.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["validate", missing.to_str().unwrap()]).status.code(), Some(2));
    let t1 = fixture("t1.json");
    assert_eq!(run(&["cohomology", t1.to_str().unwrap(), "--coeffs", "const:Q"]).status.code(), Some(2));
    assert_eq!(run(&["resolve", t1.to_str().unwrap(), "--depth", "two"]).status.code(), Some(2));
}

#[test]
fn short_bound_on_composable_fixture_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r) =
        run_to(&["resolve", fixture("square.json").to_str().unwrap(), "--bound", "1"], &dir.path().join("r.json"));
    assert_eq!(code, 3);
    assert_eq!(r["status"], "truncation overflow");
    assert!(r["truncation"]["overflow"].as_str().unwrap().contains('∘'));
}

#[test]
fn degree_at_depth_exits_4() {
    let o = run(&[
        "cohomology",
        fixture("t1.json").to_str().unwrap(),
        "--coeffs",
        "const:Z/2",
        "--degree",
        "2",
        "--depth",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let t1 = fixture("aut2.json");
    let args =
        ["cohomology", t1.to_str().unwrap(), "--coeffs", "const:Z/2", "--degree", "1", "--depth", "2", "--bound", "1"];
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    assert_eq!(run_to(&args, &a).0, 0);
    assert_eq!(run_to(&args, &b).0, 0);
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn report_goes_to_stdout_without_out() {
    let o = run(&["cohomology", fixture("t1.json").to_str().unwrap(), "--coeffs", "const:Z", "--bound", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["command"], "cohomology");
    assert!(String::from_utf8(o.stderr).unwrap().contains("wall-clock"));
}

#[test]
fn corrupted_connecting_map_is_detected() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("l.json");
    let aut2 = fixture("aut2.json");
    let base = ["les", aut2.to_str().unwrap(), "--coeffs", "const:Z", "--depth", "3", "--bound", "1"];
    assert_eq!(run_to(&base, &out).0, 0);
    for fault in ["zero", "double"] {
        let mut args = base.to_vec();
        args.extend(["--inject-fault", fault]);
        let (code, r) = run_to(&args, &out);
        assert_eq!(code, 1, "fault {fault}");
        let failed: Vec<&str> = r["audit"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|c| c["ok"] == false)
            .map(|c| c["name"].as_str().unwrap())
            .collect();
        assert!(failed.iter().any(|n| n.starts_with("exact at")), "fault {fault}: {failed:?}");
    }
}
