use std::process::{Command, Output};

use serde_json::Value;

fn shplus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shplus"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn success_exits_zero() {
    let out = shplus(&["brieskorn", "--p", "7", "--m", "1", "--eps", "1/101", "--cutoff", "20", "--output", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["report"]["invariant"]["parity"], "AllEven");
    assert_eq!(v["report"]["invariant"]["action_cutoff"]["unit"], "pi_multiple");
}

#[test]
fn pinching_failure_exits_two_with_reason() {
    let out = shplus(&["certify-el", "--a", "1,1.01,1.02", "--r1sq", "1", "--r2sq", "2.5", "--output", "json"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json_of(&out);
    assert_eq!(v["status"], "hypothesis_failed");
    assert_eq!(v["error"]["kind"], "PinchingViolated");
}

#[test]
fn resonant_perturbation_exits_two() {
    let out = shplus(&["brieskorn", "--p", "7", "--m", "1", "--eps", "1/10", "--cutoff", "20", "--output", "json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["error"]["kind"], "GenericityFailed");
    let out = shplus(&["distinguish", "--p1", "7", "--p2", "9", "--m", "1", "--eps", "1/2", "--cutoff", "30"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bundle_hypothesis_failure_still_reports() {
    let out = shplus(&["bundle", "--catalog", "cp", "--n", "3", "--r1sq", "1", "--r2sq", "2", "--min-period-ok", "--filling", "--output", "json"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json_of(&out);
    assert_eq!(v["report"]["hypotheses"]["pinching_ok"], false);
    assert_eq!(v["report"]["hypotheses"]["lower_bound"], 0);
}

#[test]
fn distinguish_schema() {
    let out = shplus(&["distinguish", "--p1", "7", "--p2", "9", "--m", "1", "--eps", "1/101", "--cutoff", "30", "--max-shift", "40", "--output", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json_of(&out)["report"];
    for key in ["verdict", "shift", "witness", "window", "cutoffs", "parameters", "hypothesis_flags"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    assert_eq!(r["verdict"], "Distinct");
    assert_eq!(r["witness"]["degree"], -72);
    assert_eq!(r["parameters"]["eps"][0], serde_json::json!({"num": "1", "den": "101"}));
}

#[test]
fn usage_errors_exit_one_without_panicking() {
    let cases: [&[&str]; 8] = [
        &[],
        &["frobnicate"],
        &["brieskorn", "--p", "7"],
        &["brieskorn", "--p", "7", "--m", "1", "--eps", "0.333…", "--cutoff", "5"],
        &["brieskorn", "--p", "7", "--m", "2", "--eps", "1/101", "--cutoff", "5"],
        &["ellipsoid", "--a", "2,1", "--cutoff", "5"],
        &["tower", "--mu", "3", "--k", "0"],
        &["bundle", "--catalog", "torus", "--n", "2", "--r1sq", "1", "--r2sq", "1"],
    ];
    for args in cases {
        let out = shplus(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(!stderr.contains("panicked"), "{args:?}: {stderr}");
    }
}

#[test]
fn parse_errors_carry_position() {
    let out = shplus(&["ellipsoid", "--a", "1,1.0x", "--cutoff", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position 5"));
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let args = ["ellipsoid", "--a", "1,1.01", "--cutoff", "4", "--output", "json"];
    let direct = shplus(&args);
    let mut with_out: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    with_out.extend(["--out", p]);
    let written = shplus(&with_out);
    assert_eq!(written.status.code(), Some(0));
    assert!(written.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn plus_convention_negates_degrees() {
    let run = |conv: &str| {
        let out = shplus(&["ellipsoid", "--a", "1,1.01", "--cutoff", "4", "--convention", conv, "--output", "json"]);
        json_of(&out)["report"]["invariant"]["module"]["ranks"].clone()
    };
    let minus = run("minus-cz");
    let plus = run("plus-cz");
    let degrees = |v: &Value| -> Vec<i64> {
        let mut d: Vec<i64> = v.as_array().unwrap().iter().map(|e| e["degree"].as_i64().unwrap()).collect();
        d.sort();
        d
    };
    let mut negated: Vec<i64> = degrees(&minus).iter().map(|d| -d).collect();
    negated.sort();
    assert_eq!(negated, degrees(&plus));
}

#[test]
fn tower_table_lists_homology() {
    let out = shplus(&["tower", "--mu", "-3", "--k", "2", "-N", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("homology   {3: 1, 8: 1}"), "{text}");
}
