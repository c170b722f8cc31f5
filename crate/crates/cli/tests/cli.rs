use std::fs;
use std::process::{Command, Output};

fn hkr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hkr")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const FAST: &[&str] = &["verify", "--suite", "rr,lie", "--samples", "5", "--seed", "7"];

#[test]
fn verify_passes_and_replays_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        let mut args = FAST.to_vec();
        args.extend(["--out", p.to_str().unwrap()]);
        let o = hkr(&args);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
    }
    let (ja, jb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ja, jb);
    let v: serde_json::Value = serde_json::from_slice(&ja).unwrap();
    assert_eq!(v["schema"], "hkr-report/1");
    assert_eq!(v["config"]["seed"], 7);
}

#[test]
fn json_flag_prints_report() {
    let mut args = FAST.to_vec();
    args.push("--json");
    let o = hkr(&args);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ids: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    assert!(ids.iter().all(|id| id.starts_with("lie.") || id.starts_with("rr.")));
}

#[test]
fn gating_failure_exits_one() {
    let o = hkr(&["verify", "--suite", "rr", "--inject-failure"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL injected.failure"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["verify", "--suite", ""],
        vec!["verify", "--suite", "nope"],
        vec!["verify", "--dim", "9"],
        vec!["demo", "nope"],
        vec!["ext", "x{1"],
        vec!["frobnicate"],
    ] {
        let o = hkr(&args);
        assert_eq!(code(&o), 2, "{args:?}");
    }
}

#[test]
fn io_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&hkr(&["atiyah", "--tensor", missing.to_str().unwrap()])), 3);
    let out = dir.path().join("no/such/dir/r.json");
    assert_eq!(code(&hkr(&["verify", "--suite", "rr", "--out", out.to_str().unwrap()])), 3);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# fast run\nsuite = rr\nseed = 3\nrr-dim = 2\n").unwrap();
    let o = hkr(&["verify", "--config", cfg.to_str().unwrap(), "--seed", "11", "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["config"]["seed"], 11);
    assert_eq!(v["config"]["rr_dim"], 2);
    assert_eq!(v["config"]["suites"], serde_json::json!(["riemann-roch"]));
    fs::write(&cfg, "colour = red\n").unwrap();
    assert_eq!(code(&hkr(&["verify", "--config", cfg.to_str().unwrap()])), 2);
}

#[test]
fn demo_tables() {
    let o = hkr(&["demo", "todd-table", "N=6", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["coefficients"], serde_json::json!(["1", "1/2", "1/12", "0", "-1/720", "0", "1/30240"]));
    let o = hkr(&["demo", "dexp"]);
    assert!(stdout(&o).contains("direct  = [0 0 1/2; 0 0 1; 0 0 0]"));
    let o = hkr(&["demo", "hrr-table", "n=1", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r["matches"] == true));
}

#[test]
fn input_subcommands() {
    assert_eq!(stdout(&hkr(&["ext", "3/2*x{1,3} - x{2}"])), "-x{2} + 3/2*x{1,3}\n");
    let o = hkr(&["chain", "w[x1; x2]", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["differential"], "0");

    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.json");
    fs::write(&t, r#"{"m": 2, "c": [[2, 1, 1, 1, 1]], "symmetric": true}"#).unwrap();
    let o = hkr(&["atiyah", "--tensor", t.to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["det_square"], true);
    assert_eq!(v["chain"]["commutes"], true);
    assert_eq!(v["chain"]["exp_left_symbol"], "holds");

    fs::write(&t, r#"{"m": 2, "c": [[1, 1, 1, 1, 0]]}"#).unwrap();
    assert_eq!(code(&hkr(&["atiyah", "--tensor", t.to_str().unwrap()])), 2);

    let b = dir.path().join("b.json");
    fs::write(&b, r#"{"basis": [[[0,1,0],[0,0,0],[0,0,0]], [[0,0,1],[0,0,0],[0,0,0]], [[0,0,0],[0,0,1],[0,0,0]]]}"#).unwrap();
    let o = hkr(&["lie", "--basis", b.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("[X1, X3] = X2"));
}
