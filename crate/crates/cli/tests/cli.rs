use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn waring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_waring"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = waring(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(args: &[&str]) -> i32 {
    waring(args).status.code().expect("exit code")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn case_a_file(name: &str) -> String {
    let path = scratch(name);
    let p = path.to_str().unwrap();
    let out = waring(&[
        "build", "--field", "q=10007", "--case", "A", "--degree", "5", "--curve-count", "4", "--off-count",
        "2", "--seed", "3", "--output", p,
    ]);
    assert!(out.status.success() && out.stdout.is_empty());
    p.to_string()
}

#[test]
fn rank_of_binary_form() {
    let r = report(&["rank", "--field", "q=101", "--binary", "x0*x1^2"]);
    assert_eq!(r["result"]["rank"], 3);
    assert_eq!(r["result"]["method"], "sylvester");
    assert_eq!(r["field"]["p"], 101);
}

#[test]
fn rank_by_exhaustive_search() {
    let r = report(&["rank", "--field", "q=3", "--space", "2", "2", "--form", "x0^2+x1^2+x2^2"]);
    assert_eq!(r["result"]["rank"], 3);
    assert_eq!(r["result"]["method"], "oracle");
}

#[test]
fn rank_of_a_power() {
    let r = report(&["rank", "--binary", "x0^3"]);
    assert_eq!(r["result"]["rank"], 1);
    assert_eq!(r["field"]["kind"], "rational");
}

#[test]
fn rank_from_tensor_coordinates() {
    // x0*x1^2 has tensor coordinates (0, 0, 1/3, 0).
    let r = report(&["rank", "--field", "q=101", "--space", "1", "3", "--vector", "0,0,34,0"]);
    assert_eq!(r["result"]["rank"], 3);
}

#[test]
fn report_keys_are_sorted() {
    let out = waring(&["rank", "--binary", "x0^3", "--json"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let keys = ["\"command\"", "\"field\"", "\"inputs\"", "\"result\"", "\"timing_ms\""];
    let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(text.lines().count(), 1);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["rank", "--binary", "x0^+"]), 2);
    assert_eq!(code(&["rank", "--field", "q=4", "--binary", "x0^3"]), 2);
    assert_eq!(code(&["classify", "--input", "/nonexistent/dec.json"]), 2);
    assert_eq!(
        code(&[
            "rank", "--field", "q=5", "--space", "2", "3", "--form", "x0^3+x1^3+x2^3+x0*x1*x2",
            "--oracle-budget", "40,1,1000",
        ]),
        3
    );
    assert_eq!(code(&["build", "--field", "q=10007", "--case", "C", "--degree", "4"]), 4);
    assert_eq!(code(&["example-i1", "--field", "q=5"]), 4);
}

#[test]
fn classify_case_a() {
    let a = case_a_file("classify_a.json");
    let r = report(&["classify", "--input", &a]);
    assert_eq!(r["result"]["case"], "A");
    let s = &r["result"]["structure"];
    assert_eq!(s["line"].as_array().unwrap().len(), 2);
    assert_eq!(s["on_curve"].as_array().unwrap().len(), 4);
    assert_eq!(s["splice"].as_array().unwrap().len(), 6);
    assert_eq!(r["result"]["evidence"]["splice_rank"], 4);
}

#[test]
fn family_members_certify_and_round_trip() {
    let a = case_a_file("family_a.json");
    let r = report(&["family", "--input", &a, "--count", "10", "--seed", "7"]);
    let decs = r["result"]["decompositions"].as_array().unwrap();
    assert_eq!(decs.len(), 10);
    for (i, d) in decs.iter().enumerate() {
        assert_eq!(d["certificate"]["valid"], true);
        let path = scratch(&format!("member_{i}.json"));
        std::fs::write(&path, d["decomposition"].to_string()).unwrap();
        let c = report(&["certify", "--input", path.to_str().unwrap()]);
        assert_eq!(c["result"]["valid"], true);
    }
}

#[test]
fn certify_pair_reports_defect() {
    let a = case_a_file("pair_a.json");
    let r = report(&["family", "--input", &a, "--count", "3", "--seed", "1"]);
    let own: Value = serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    let own_points = &own["result"]["decomposition"]["points"];
    let other = r["result"]["decompositions"]
        .as_array()
        .unwrap()
        .iter()
        .find(|d| &d["decomposition"]["points"] != own_points)
        .expect("a distinct member");
    let b = scratch("pair_b.json");
    std::fs::write(&b, other["decomposition"].to_string()).unwrap();
    let c = report(&["certify", "--pair", &a, b.to_str().unwrap()]);
    assert!(c["result"]["defect"].as_u64().unwrap() > 0);
    assert_eq!(c["result"]["certificates"]["lemma_v1"]["valid"], true);
}

#[test]
fn wrong_weights_fail_certification() {
    let a = case_a_file("weights_a.json");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    let dec = &mut v["result"]["decomposition"];
    dec["weights"][0] = Value::String("5".into());
    let bad = scratch("weights_bad.json");
    std::fs::write(&bad, dec.to_string()).unwrap();
    assert_eq!(code(&["certify", "--input", bad.to_str().unwrap()]), 5);
}

#[test]
fn reports_are_deterministic() {
    let args = ["build", "--field", "q=10007", "--case", "C", "--degree", "5", "--seed", "4", "--json"];
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timing_ms");
        v
    };
    assert_eq!(strip(report(&args)), strip(report(&args)));
}

#[test]
fn cubic_example() {
    let r = report(&["example-i1", "--field", "q=13"]);
    let res = &r["result"];
    assert!(res["in_curve_count"].as_u64().unwrap() >= 2);
    assert_eq!(res["first"]["size"], 9);
    assert_eq!(res["certificates"]["lemma_v1"]["valid"], true);
}

#[test]
fn oracle_lists_all_minimal_decompositions() {
    let r = report(&["oracle", "--field", "q=7", "--binary", "x0^5+3*x1^5"]);
    assert_eq!(r["result"]["rank"], 2);
    assert_eq!(r["result"]["count"], 1);
}
