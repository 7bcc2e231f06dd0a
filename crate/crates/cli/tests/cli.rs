//! Black-box tests of the `ternhom` binary: outputs and exit codes.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ternhom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn group_triangle_2_2_3() {
    let out = run(&["group", "--triangle", "2", "2", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("order: 6"), "{text}");
    assert!(text.contains("skew elements: (1,2,3,6,5,4)"), "{text}");
}

#[test]
fn group_json_is_deterministic() {
    let a = run(&["group", "--triangle", "2", "2", "3", "--format", "json"]);
    let b = run(&["group", "--triangle", "2", "2", "3", "--format", "json"]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["order"], 6);
    assert_eq!(v["skew"], serde_json::json!([1, 2, 3, 6, 5, 4]));
}

#[test]
fn group_corrupted_cube_exits_2() {
    let dir = std::env::temp_dir().join("ternhom-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    // order-2 cube that is not associative / not a quasigroup
    std::fs::write(&path, r#"{"order": 2, "table": [1,1,1,1,1,1,1,1]}"#).unwrap();
    let out = run(&["group", "--cube", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{:?}", out);
}

#[test]
fn group_odd_relator_presentation_fails() {
    let out = run(&["group", "--presentation", "a|a^3"]);
    assert_eq!(out.status.code(), Some(2), "{:?}", out);
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("parity"), "{err}");
}

#[test]
fn homology_triangle_2_2_5() {
    let out = run(&[
        "homology", "--triangle", "2", "2", "5", "--degree", "1", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["torsion"], serde_json::json!(["5", "25"]));
}

#[test]
fn homology_triangle_2_2_2_is_torsion_free() {
    let out = run(&["homology", "--triangle", "2", "2", "2", "--degree", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("torsion none"), "{}", stdout(&out));
}

#[test]
fn knot_trefoil_report() {
    let out = run(&[
        "knot", "--triangle", "2", "2", "3", "--braid", "[1,1,1]",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("colorings 72"), "{text}");
    assert!(text.contains("order-3 classes 36"), "{text}");
}

#[test]
fn knot_accepts_table_names() {
    let out = run(&["knot", "--triangle", "2", "2", "3", "--braid", "8_18"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("colorings 180"), "{text}");
    assert!(text.contains("order-3 classes 144"), "{text}");
}

#[test]
fn knot_bad_braid_exits_1() {
    let out = run(&[
        "knot", "--triangle", "2", "2", "3", "--braid", "[7]", "--strands", "2",
    ]);
    assert_eq!(out.status.code(), Some(1), "{:?}", out);
}

#[test]
fn usage_error_exits_1() {
    let out = run(&["homology"]);
    assert_eq!(out.status.code(), Some(1), "{:?}", out);
}

#[test]
fn resource_limit_exits_3() {
    // an infinite group: enumeration must hit the coset cap
    let out = run(&[
        "group", "--presentation", "a,b | (ab)^2", "--max-cosets", "50",
    ]);
    assert_eq!(out.status.code(), Some(3), "{:?}", out);
}

#[test]
fn cocycle_state_sum_runs() {
    let out = run(&[
        "cocycle", "--triangle", "2", "2", "3", "--modulus", "9", "--braid", "[1,1,1]",
        "--format", "json",
    ]);
    assert!(out.status.success(), "{:?}", out);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["modulus"], 9);
    let sums = v["state_sums"].as_array().unwrap();
    assert!(!sums.is_empty());
    for s in sums {
        let counts: Vec<u64> = s["counts"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_u64().unwrap())
            .collect();
        assert_eq!(counts.iter().sum::<u64>(), 72);
    }
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest", "--seed", "5"]);
    assert!(out.status.success(), "{:?}", out);
    assert!(stdout(&out).contains("selftest passed"));
}
