use std::process::{Command, Output};

fn qseries(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qseries")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn expand_euler_json() {
    let o = qseries(&["expand", "E(q)", "--order", "8", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let values: Vec<&str> = v["coeffs"].as_array().unwrap().iter().map(|c| c[1].as_str().unwrap()).collect();
    assert_eq!(values, ["1", "-1", "-1", "0", "0", "1", "0", "1"]);
    assert_eq!(v["prefactor24"], 0);
}

#[test]
fn eta_prefactor_prints_over_24() {
    let o = qseries(&["expand", "eta(2)^3", "--order", "4"]);
    assert!(stdout(&o).contains("q^(6/24)"));
}

#[test]
fn bivariate_json_sorted_by_q_then_z() {
    let o = qseries(&["expand", "bracket[z; q] * E(q)", "--order", "6", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let keys: Vec<(i64, i64)> = v["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c[0].as_i64().unwrap(), c[1].as_i64().unwrap()))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(!keys.is_empty());
}

#[test]
fn verify_examples() {
    let o = qseries(&["verify", "thm1", "--a", "4", "--order", "50"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS thm1 [a=4]"));
    let o = qseries(&["verify", "eta2", "--params", "m=2,n=3", "--order", "20"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn saito_scan_prints_one_line_per_level() {
    let o = qseries(&["saito", "--max-N", "30", "--order", "120"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS saito")).count(), 30);
    assert!(out.contains("prefactor q^("));
}

#[test]
fn crank_table_and_exception() {
    let o = qseries(&["crank", "--mod", "11", "--max-n", "40"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("M(2,11,35) <= M(1,11,35): 1353 vs 1353 (expected exception)"));
    let o = qseries(&["crank", "--mod", "5", "--max-n", "20"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn conj2_single_item() {
    let o = qseries(&["conj2", "--item", "c", "--order", "30"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().all(|l| l.starts_with("EVIDENCE")));
}

#[test]
fn exit_codes() {
    assert_eq!(qseries(&["nonneg", "E(q)", "--order", "5"]).status.code(), Some(1));
    assert_eq!(qseries(&["nonneg", "E(q^5)^5 / E(q)", "--order", "30"]).status.code(), Some(0));
    assert_eq!(qseries(&["expand", "E(q) / bracket[z; q]", "--order", "5"]).status.code(), Some(2));
    assert_eq!(qseries(&["expand", "E(q) *", "--order", "5"]).status.code(), Some(3));
    assert_eq!(qseries(&["verify", "no-such-id"]).status.code(), Some(3));
    assert_eq!(qseries(&["verify", "thm1", "--k", "2"]).status.code(), Some(3));
    assert_eq!(qseries(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(qseries(&["--help"]).status.code(), Some(0));
}

#[test]
fn parse_errors_name_the_position() {
    let o = qseries(&["expand", "poch[z; 3]", "--order", "4"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("1:9"), "{err}");
    assert!(err.contains("`q`"), "{err}");
}
