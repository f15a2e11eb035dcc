#![allow(dead_code)]

use std::process::{Command, Output};

use serde_json::Value;

pub fn emergent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_emergent"))
        .args(args)
        .env_remove("SOURCE_DATE_EPOCH")
        .output()
        .expect("binary runs")
}

pub fn stdout_of(args: &[&str]) -> String {
    let out = emergent(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8")
}

pub fn json_of(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    serde_json::from_str(&stdout_of(&full)).expect("valid json")
}

/// Header and records of a CSV payload, skipping `#` lines.
pub fn csv_of(args: &[&str]) -> (Vec<String>, Vec<Vec<String>>) {
    let text = stdout_of(args);
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

pub fn column_u64(rows: &Value, name: &str) -> Vec<u64> {
    rows.as_array()
        .unwrap()
        .iter()
        .map(|r| r[name].as_u64().unwrap_or_else(|| panic!("{name} in {r}")))
        .collect()
}

pub fn column_f64(rows: &Value, name: &str) -> Vec<f64> {
    rows.as_array().unwrap().iter().map(|r| r[name].as_f64().unwrap()).collect()
}
