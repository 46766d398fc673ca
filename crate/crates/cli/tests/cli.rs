use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weingarten"))
        .args(args)
        .env_remove("WG_GUARD_K")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim().to_string()
}

#[test]
fn exact_prints_canonical_json() {
    let out = run(&["exact", "--inline", "[[1,1],[1,1]]"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        r#"{"var":"n","num":["-1"],"den":["0","-2","1","1"]}"#
    );
    assert_eq!(
        json(&["exact", "--inline", "[[1,0],[0,1]]"]),
        serde_json::json!({"var": "n", "num": [], "den": ["1"]})
    );
}

#[test]
fn exact_reads_matrix_files() {
    let path = std::env::temp_dir().join(format!("wg-cli-{}.json", std::process::id()));
    std::fs::write(&path, "[[2,0],[0,2]]\n").unwrap();
    let v = json(&["exact", "--matrix", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(v["num"], serde_json::json!(["1", "1"]));
    assert_eq!(v["den"], serde_json::json!(["0", "-2", "1", "1"]));
}

#[test]
fn eval_values() {
    assert_eq!(json(&["eval", "--inline", "[[2]]", "--n", "7"]), "1/7");
    // pseudo-inverse path at n = 2 < k = 4; the average of cos^4 sin^4
    assert_eq!(
        json(&["eval", "--inline", "[[2,2],[2,2]]", "--n", "2"]),
        "3/128"
    );
}

#[test]
fn poles_report() {
    let v = json(&["poles", "--inline", "[[2,0],[0,2]]"]);
    assert_eq!(v["contained"], true);
    assert_eq!(v["actual"], serde_json::json!(["-2", "0", "1"]));
}

#[test]
fn asympt_annotates_path_counts() {
    let v = json(&["asympt", "--inline", "[[2,2],[2,0]]", "--order", "3"]);
    assert_eq!(v["all_agree"], true);
    assert_eq!(v["terms"].as_array().unwrap().len(), 4);
    assert_eq!(v["mu"], "1");
}

#[test]
fn matrix_verbs() {
    let v = json(&["wg", "--k", "2"]);
    assert_eq!(
        v["matrix"][0][1],
        serde_json::json!({"var": "n", "num": ["-1"], "den": ["0", "-2", "1", "1"]})
    );
    let v = json(&["wg", "--k", "3", "--n", "2"]);
    assert_eq!(v["pseudo_inverse"], true);
    assert_eq!(v["matrix"].as_array().unwrap().len(), 15);
    let v = json(&["mobius", "--k", "3"]);
    assert_eq!(v["distance"][0][0], 0);
    assert_eq!(v["mobius"][0][0], "1");
    let v = json(&["zonal", "--k", "2"]);
    assert_eq!(v["types"].as_array().unwrap().len(), 2);
    assert_eq!(v["matrix"], json(&["wg", "--k", "2"])["matrix"]);
}

#[test]
fn monte_carlo_compares_with_exact() {
    let args = [
        "mc",
        "--inline",
        "[[1,1],[1,1]]",
        "--n",
        "2",
        "--samples",
        "20000",
        "--seed",
        "5",
    ];
    let v = json(&args);
    assert_eq!(v["exact"], "-1/8");
    assert_eq!(v["within_5_sigma"], true);
    assert_eq!(json(&args), v);
}

#[test]
fn pretty_mode_prints_text() {
    let out = run(&["exact", "--inline", "[[2]]", "--pretty"]);
    assert_eq!(stdout(&out), "1/n");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["exact"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--inline", "[[2]]"]).status.code(), Some(2));
    let out = run(&["exact", "--inline", "[[1],[1,2]]"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ragged row 2"));
}

#[test]
fn computation_errors_exit_one() {
    let out = run(&["exact", "--inline", "[[4,4],[4,0]]"]);
    assert_eq!(out.status.code(), Some(1));
    let out = Command::new(env!("CARGO_BIN_EXE_weingarten"))
        .args(["exact", "--inline", "[[2,2],[2,0]]"])
        .env("WG_GUARD_K", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(
        run(&[
            "mc",
            "--inline",
            "[[2,0,0]]",
            "--n",
            "2",
            "--samples",
            "10",
            "--seed",
            "0"
        ])
        .status
        .code(),
        Some(1)
    );
}
