//! End-to-end tests of the binary: output determinism, exit codes, and the
//! shape of each command's JSON.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pivotlab"))
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn rankwidth_p3() {
    let out = run(&["rankwidth", &fixture("p3.mat")]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["result"]["rank_width"], 1);
    assert_eq!(v["result"]["tree"], "(1 (2 3))");
    assert!(v["inputs"][0]["sha256"].as_str().unwrap().len() == 64);
    // wall time goes to stderr, not into the deterministic payload
    assert!(String::from_utf8_lossy(&out.stderr).contains("wall_time_ms"));
}

#[test]
fn byte_identical_output_across_runs() {
    for args in [
        vec!["rankwidth", &*fixture("p3.mat")],
        vec!["schur", &*fixture("p3.mat"), "--block", "1,2"],
        vec!["pivot", &*fixture("p3.mat"), "--block", "1,2"],
        vec!["contain", &*fixture("k1.mat"), &*fixture("p3.mat")],
        vec!["wqo-scan", &*fixture("k1.mat"), &*fixture("p3.mat")],
        vec!["linking", &*fixture("p3.mat"), "--x", "1", "--y", "3"],
        vec!["chaingroup-info", &*fixture("p3.mat")],
        vec!["deltamatroid", &*fixture("p3.mat")],
        vec!["matroid", &*fixture("u12.tutte")],
        vec!["sum-roundtrip", &*fixture("p3.mat"), "--split", "1,2"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success(), "command failed: {args:?}");
        assert_eq!(a.stdout, b.stdout, "stdout not byte-identical: {args:?}");
    }
}

#[test]
fn schur_on_p3() {
    let out = run(&["schur", &fixture("p3.mat"), "--block", "1,2"]);
    let v = stdout_json(&out);
    assert_eq!(v["result"]["elements"], serde_json::json!(["3"]));
    assert_eq!(v["result"]["rows"], serde_json::json!([[0]]));
}

#[test]
fn pivot_on_p3() {
    let out = run(&["pivot", &fixture("p3.mat"), "--block", "1,2"]);
    let v = stdout_json(&out);
    assert_eq!(
        v["result"]["rows"],
        serde_json::json!([[0, 1, 1], [1, 0, 0], [1, 0, 0]])
    );
}

#[test]
fn contain_witness() {
    let out = run(&["contain", &fixture("k1.mat"), &fixture("p3.mat")]);
    let v = stdout_json(&out);
    assert_eq!(v["result"]["contained"], true);
    assert_eq!(v["result"]["witness"]["bijection"][0][0], "z");
    // reversed direction is not contained but still succeeds
    let out = run(&["contain", &fixture("p3.mat"), &fixture("k1.mat")]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["result"]["contained"], false);
}

#[test]
fn linking_values_and_modes_agree() {
    let brute = run(&["linking", &fixture("p3.mat"), "--x", "1", "--y", "3"]);
    let v = stdout_json(&brute);
    assert_eq!(v["result"]["value"], 1);
    assert_eq!(v["result"]["min_witness"], serde_json::json!(["1"]));
    let inductive = run(&[
        "linking",
        &fixture("p3.mat"),
        "--x",
        "1",
        "--y",
        "3",
        "--mode",
        "inductive",
    ]);
    assert_eq!(stdout_json(&inductive)["result"]["value"], 1);
}

#[test]
fn chaingroup_info_reports_lagrangian() {
    let out = run(&["chaingroup-info", &fixture("p3.mat")]);
    let v = stdout_json(&out);
    assert_eq!(v["result"]["dim"], 3);
    assert_eq!(v["result"]["is_lagrangian"], true);
    assert_eq!(v["result"]["branch_width"]["width"], 1);
    assert_eq!(
        v["result"]["special_eulerian"],
        serde_json::json!(["1,0", "1,0", "1,0"])
    );
}

#[test]
fn deltamatroid_families() {
    let out = run(&["deltamatroid", &fixture("p3.mat")]);
    let v = stdout_json(&out);
    assert_eq!(
        v["result"]["feasible"],
        serde_json::json!([[], ["1", "2"], ["2", "3"]])
    );
    assert_eq!(v["result"]["even"], true);
}

#[test]
fn matroid_report() {
    let out = run(&["matroid", &fixture("u12.tutte")]);
    let v = stdout_json(&out);
    assert_eq!(v["result"]["rank"], 1);
    assert_eq!(v["result"]["circuits"], serde_json::json!([["a", "b"]]));
    assert_eq!(v["result"]["branch_width"]["width"], 2);
}

#[test]
fn domain_errors_exit_one_with_names() {
    // singular pivot block
    let out = run(&["pivot", &fixture("p3.mat"), "--block", "1,2,3"]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["error"]["name"], "SingularPivotBlock");
    // unknown label
    let out = run(&["schur", &fixture("p3.mat"), "--block", "9"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["error"]["name"], "UnknownLabel");
    // missing file
    let out = run(&["rankwidth", "no-such-file.mat"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["error"]["name"], "ParseError");
    // kind violation in the input
    let dir = std::env::temp_dir().join("pivotlab-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.mat");
    std::fs::write(&bad, "field 2\nkind skew\nelements 1\nrow 1: 1\n").unwrap();
    let out = run(&["rankwidth", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["error"]["name"], "KindViolation");
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["pivot", &fixture("p3.mat")]); // missing --block
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn max_n_flag_and_env_apply() {
    let out = run(&["--max-n", "2", "rankwidth", &fixture("p3.mat")]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["error"]["name"], "GroundSetTooLarge");
    let out = bin()
        .args(["rankwidth", &fixture("p3.mat")])
        .env("PIVOTLAB_MAX_N", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    // the flag wins over the environment
    let out = bin()
        .args(["--max-n", "12", "rankwidth", &fixture("p3.mat")])
        .env("PIVOTLAB_MAX_N", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn pretty_flag_only_changes_whitespace() {
    let plain = run(&["rankwidth", &fixture("p3.mat")]);
    let pretty = run(&["--pretty", "rankwidth", &fixture("p3.mat")]);
    let a = stdout_json(&plain);
    let b = stdout_json(&pretty);
    assert_eq!(a, b);
    assert!(pretty.stdout.len() > plain.stdout.len());
}

#[test]
fn chain_group_file_input() {
    // export a chain-group text via the library, feed it back to the CLI
    let dir = std::env::temp_dir().join("pivotlab-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("p3.cg");
    let text = "form b+\nfield 2\nelements 1 2 3\nchain: 0 1  1 0  0 0\nchain: 1 0  0 1  1 0\nchain: 0 0  1 0  0 1\n";
    std::fs::write(&path, text).unwrap();
    let out = run(&["chaingroup-info", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["result"]["dim"], 3);
    assert_eq!(v["result"]["is_lagrangian"], true);
}

#[test]
fn wqo_scan_reports_chain() {
    let out = run(&["wqo-scan", &fixture("k1.mat"), &fixture("p3.mat")]);
    let v = stdout_json(&out);
    assert_eq!(v["result"]["edges"], serde_json::json!([[0, 1]]));
    assert_eq!(v["result"]["antichains"], serde_json::json!([[0], [1]]));
}
