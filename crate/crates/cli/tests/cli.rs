use std::process::{Command, Output};

use serde_json::Value;

fn qfock(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfock"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn commutator_suite_passes() {
    let out = qfock(&["--d", "2", "--q", "1/2", "--level", "6", "verify", "commutator"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["pass"], true);
    let ids: Vec<&str> = r["checks"].as_array().unwrap().iter().map(|c| c["check"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    assert_eq!(ids.len(), 8);
}

#[test]
fn out_of_domain_q_is_a_config_error() {
    assert_eq!(qfock(&["--q", "3/2", "verify", "all"]).status.code(), Some(2));
    assert_eq!(qfock(&["--q", "-1", "verify", "commutator"]).status.code(), Some(2));
    assert_eq!(qfock(&["--q", "abc", "verify", "commutator"]).status.code(), Some(2));
}

#[test]
fn inconsistent_configs_are_rejected() {
    let m = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(m.path(), r#"{"d": 2, "entries": [["1/3", "1/5"], ["1/5", "-1/4"]]}"#).unwrap();
    let p = m.path().to_str().unwrap();
    assert_eq!(qfock(&["--mode", "symbolic", "--q-matrix", p, "verify", "commutator"]).status.code(), Some(2));
    assert_eq!(qfock(&["--d", "3", "--q-matrix", p, "verify", "commutator"]).status.code(), Some(2));
    assert_eq!(qfock(&["--mode", "symbolic", "--q", "1/2", "verify", "commutator"]).status.code(), Some(2));
    assert_eq!(qfock(&["--level", "4", "--series-m", "2", "verify", "duality"]).status.code(), Some(2));
    assert_eq!(qfock(&["verify", "nonsense"]).status.code(), Some(2));
}

#[test]
fn mixed_matrix_commutator_passes() {
    let m = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(m.path(), r#"{"d": 2, "entries": [["1/3", "1/5"], ["1/5", "-1/4"]]}"#).unwrap();
    let out = qfock(&["--q-matrix", m.path().to_str().unwrap(), "--level", "5", "verify", "commutator"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn symbolic_dual_agreement() {
    let out = qfock(&["--mode", "symbolic", "--d", "2", "--level", "7", "verify", "dual-agree"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn failed_check_exits_one_and_names_a_witness() {
    // with this w(q) the Gram domination inequality fails at q = 1/2 from m = 3
    let out = qfock(&["--q", "1/2", "--level", "6", "verify", "bounds"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    let failing: Vec<&str> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["check"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["bounds/gram-domination/m3", "bounds/gram-domination/m4", "bounds/gram-domination/m5"]);

    let out = qfock(&["--mode", "float", "--q", "0.5", "--level", "5", "verify", "wick-agree"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn partitions_export_contains_crossing_four_example() {
    let out = qfock(&["export", "partitions", "--family", "B", "--n", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let hit = r["partitions"]
        .as_array()
        .unwrap()
        .iter()
        .find(|p| p["pairs"] == serde_json::json!([[0, 3], [1, 5], [2, 4]]))
        .expect("partition present");
    assert_eq!(hit["crossings"], 4);
}

#[test]
fn free_xi_export() {
    let out = qfock(&["--q", "0", "--d", "2", "--series-m", "3", "--level", "7", "export", "xi"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    for (k, entry) in r["xi"].as_array().unwrap().iter().enumerate() {
        assert_eq!(entry["terms"], serde_json::json!([{"word": [k + 1], "coeff": "1"}]));
    }
}

#[test]
fn fisher_export_matches_series() {
    let out = qfock(&["--d", "1", "--q", "1/2", "--series-m", "5", "--level", "11", "export", "fisher"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let rows = r["fisher"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    for row in rows {
        assert_eq!(row["value"], row["formula"]);
        assert_eq!(row["residual"], 0.0);
    }
    assert_eq!(rows[0]["value"], "1");
}

#[test]
fn csv_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.csv");
    let out = qfock(&["--q", "0", "--level", "3", "--format", "csv", "--out", path.to_str().unwrap(), "export", "hermite"]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,power,coeff"));
    // H_2 = x^2 - 1 at q = 0
    assert!(text.contains("2,0,-1\n2,1,0\n2,2,1\n"), "{text}");
}

#[test]
fn reports_are_reproducible() {
    let args = ["--mode", "float", "--q", "0.3", "--level", "4", "--seed", "11", "verify", "bounds"];
    let a = qfock(&args);
    let b = qfock(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}
