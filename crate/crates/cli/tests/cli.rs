use std::process::{Command, Output};

fn keyrecycle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_keyrecycle")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = keyrecycle(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

#[test]
fn epsilon_reports_exact_ratio() {
    let v = json(&["epsilon", "--family", "mul:m=2", "--kind", "axu2"]);
    assert_eq!(v["epsilon"], "1/4");
    assert_eq!(v["witness"]["x1"], 0);
    let v = json(&["epsilon", "--family", "lift:mul:m=2", "--kind", "asu2"]);
    assert_eq!(v["epsilon"], "1/4");
}

#[test]
fn attack_csv_last_row_is_certain_success() {
    let csv = stdout(&["attack", "--family", "mul:m=2", "--rounds", "4"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "l,success_exact,success_formula,entropy_exact,entropy_formula");
    assert_eq!(lines.len(), 5);
    let last: Vec<&str> = lines[4].split(',').collect();
    assert_eq!(last[1], "1/1");
    assert_eq!(last[1], last[2]);
    let second: Vec<&str> = lines[2].split(',').collect();
    assert_eq!(second[3], "0.500000000000");
}

#[test]
fn worst_case_distance_with_witness() {
    let v = json(&["uc-distance", "--family", "mul:m=2", "--recycle", "--worst-case"]);
    assert_eq!(v["distance"], "1/4");
    assert_eq!(v["epsilon_measured"], "1/4");
    assert_eq!(v["witness_strategy"]["mode"], "substitution");
}

#[test]
fn counterexample_protocol_values() {
    let v = json(&["impersonate", "--family", "counterexample:m=2", "--protocol", "counterexample", "--recycle"]);
    assert_eq!(v["impersonation_distance"], "1/1");
    assert_eq!(v["substitution_distance"], "2/3");
    let out = keyrecycle(&["impersonate", "--family", "mul:m=2", "--protocol", "counterexample"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn compose_ledger_csv() {
    let csv = stdout(&["compose", "--family", "mul:m=4", "--r", "3", "--rounds", "2", "--qkd-eps", "1/100"]);
    assert!(csv.starts_with("round,component,epsilon,cumulative\n1,auth,1/16,1/16\n"));
    assert!(csv.ends_with("total,bound,81/200,81/200\n"));
    assert_eq!(csv.lines().filter(|l| l.contains(",qkd,")).count(), 3);
}

#[test]
fn roundtrip_accepts_and_detects_tampering() {
    let v = json(&["roundtrip", "--family", "poly:m=3,L=2", "--rounds", "4", "--seed", "1"]);
    assert_eq!(v["ok"], true);
    assert_eq!(v["pad_bits_consumed"], 12);
    let a = json(&["roundtrip", "--family", "poly:m=3,L=2", "--rounds", "4", "--seed", "2"]);
    assert_ne!(v["rounds"], a["rounds"]);
}

#[test]
fn fieldtab_matches_known_products() {
    let csv = stdout(&["fieldtab", "--m", "2"]);
    assert!(csv.contains("\n2,2,3\n"));
    assert_eq!(csv.lines().count(), 17);
    let out = keyrecycle(&["fieldtab", "--m", "4", "--modulus", "0x15"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(keyrecycle(&["epsilon", "--family", "mul:m=16", "--budget", "1000"]).status.code(), Some(1));
    assert_eq!(keyrecycle(&["epsilon", "--family", "nonsense"]).status.code(), Some(2));
    assert_eq!(keyrecycle(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(keyrecycle(&["attack", "--family", "poly:m=2,L=2", "--rounds", "1"]).status.code(), Some(2));
    let err = keyrecycle(&["epsilon", "--family", "mul"]);
    assert!(String::from_utf8_lossy(&err.stderr).contains("toeplitz:n=<n>,m=<m>"));
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("keyrecycle-cli-{}.csv", std::process::id()));
    let out = keyrecycle(&["fieldtab", "--m", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "a,b,product\n0,0,0\n0,1,0\n1,0,0\n1,1,1\n");
    std::fs::remove_file(path).ok();
}
