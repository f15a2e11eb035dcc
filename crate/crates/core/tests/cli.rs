mod common;

use common::*;
use std::collections::BTreeMap;

#[test]
fn dice_pair_reproduces_the_sum_table() {
    let v = json_of(&["dice", "--dice", "6,6"]);
    let rows = &v["rows"];
    assert_eq!(column_u64(rows, "macrostate"), (2..=12).collect::<Vec<_>>());
    assert_eq!(column_u64(rows, "omega"), vec![1, 2, 3, 4, 5, 6, 5, 4, 3, 2, 1]);
    let probs: Vec<&str> = rows.as_array().unwrap().iter().map(|r| r["probability"].as_str().unwrap()).collect();
    assert_eq!(probs, ["1/36", "1/18", "1/12", "1/9", "5/36", "1/6", "5/36", "1/9", "1/12", "1/18", "1/36"]);
    assert_eq!(v["metadata"]["summary"]["total_omega"], 36);
    assert_eq!(v["metadata"]["summary"]["class"], "partially-deterministic");
}

#[test]
fn single_die_is_uniform() {
    let v = json_of(&["dice", "--dice", "6"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r["probability"] == "1/6"));
    assert_eq!(v["metadata"]["summary"]["class"], "random");
}

#[test]
fn d6_plus_d8_matches_brute_force() {
    let mut tally = BTreeMap::new();
    for a in 1..=6u64 {
        for b in 1..=8u64 {
            *tally.entry(a + b).or_insert(0u64) += 1;
        }
    }
    let v = json_of(&["dice", "--dice", "6,8"]);
    assert_eq!(column_u64(&v["rows"], "macrostate"), tally.keys().copied().collect::<Vec<_>>());
    assert_eq!(column_u64(&v["rows"], "omega"), tally.values().copied().collect::<Vec<_>>());
    assert_eq!(v["metadata"]["summary"]["total_omega"], 48);
}

#[test]
fn solids_reproduce_energy_table() {
    let v = json_of(&["solids", "-Na", "3", "-Nb", "3", "-q", "6"]);
    let rows = &v["rows"];
    assert_eq!(column_u64(rows, "omega_a"), vec![1, 3, 6, 10, 15, 21, 28]);
    assert_eq!(column_u64(rows, "q_b"), vec![6, 5, 4, 3, 2, 1, 0]);
    assert_eq!(column_u64(rows, "omega_b"), vec![28, 21, 15, 10, 6, 3, 1]);
    assert_eq!(column_u64(rows, "omega_tot"), vec![28, 63, 90, 100, 90, 63, 28]);
    assert_eq!(v["metadata"]["summary"]["total_omega"], 462);
}

#[test]
fn solids_without_energy() {
    let v = json_of(&["solids", "-Na", "1", "-Nb", "1", "-q", "0"]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
    assert_eq!(v["rows"][0]["probability"], 1.0);
}

#[test]
fn large_log_mode_normalizes() {
    let v = json_of(&["solids", "-Na", "1500", "-Nb", "1500", "-q", "3000", "--log"]);
    let p = column_f64(&v["rows"], "probability");
    assert_eq!(p.len(), 3001);
    assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    // Twelve significant digits in the CSV rendering.
    let (header, rows) = csv_of(&["solids", "-Na", "1500", "-Nb", "1500", "-q", "3000", "--log"]);
    let idx = header.iter().position(|h| h == "ln_omega_tot").unwrap();
    let digits = rows[1500][idx].chars().filter(|c| c.is_ascii_digit()).count();
    assert!((9..=12).contains(&digits), "{}", rows[1500][idx]);
}

#[test]
fn huge_exact_integers_become_json_strings() {
    let v = json_of(&["solids", "-Na", "40", "-Nb", "40", "-q", "80"]);
    let mid = &v["rows"][40]["omega_tot"];
    assert!(mid.is_string(), "{mid}");
    assert!(v["rows"][0]["omega_a"].is_u64());
    let (header, rows) = csv_of(&["solids", "-Na", "40", "-Nb", "40", "-q", "80"]);
    let idx = header.iter().position(|h| h == "omega_tot").unwrap();
    assert_eq!(rows[40][idx], mid.as_str().unwrap());
    assert!(!rows[40][idx].contains('e'));
}

#[test]
fn csv_and_json_carry_identical_numbers() {
    for args in [
        vec!["solids", "-Na", "5", "-Nb", "9", "-q", "30", "--log"],
        vec!["mc", "-Na", "3", "-Nb", "3", "-q", "6", "--steps", "20000", "--seed", "5"],
        vec!["sweep", "--factors", "1,10"],
    ] {
        let (header, rows) = csv_of(&args);
        let v = json_of(&args);
        let json_rows = v["rows"].as_array().unwrap();
        assert_eq!(rows.len(), json_rows.len());
        for (row, jr) in rows.iter().zip(json_rows) {
            for (h, cell) in header.iter().zip(row) {
                let j = &jr[h.as_str()];
                let jv = j.as_f64().or_else(|| j.as_str().and_then(|s| s.parse().ok())).unwrap();
                assert_eq!(cell.parse::<f64>().unwrap(), jv, "{h}");
            }
        }
    }
}

#[test]
fn csv_starts_with_metadata_comment() {
    let text = stdout_of(&["mc", "-Na", "3", "-Nb", "3", "-q", "6", "--steps", "1000", "--burn-in", "100", "--seed", "9"]);
    let first = text.lines().next().unwrap();
    assert!(first.starts_with("# tool=emergent"));
    assert!(first.contains("seed=9"));
    assert!(first.contains("command=\"mc --Na 3 --Nb 3 -q 6 --steps 1000 --burn-in 100 --seed 9\""));
}

#[test]
fn mc_converges_and_is_reproducible() {
    let args = ["mc", "-Na", "3", "-Nb", "3", "-q", "6", "--init", "all-in-b", "--steps", "1000000", "--seed", "42"];
    let v = json_of(&args);
    assert!(v["metadata"]["summary"]["tv_distance"].as_f64().unwrap() <= 0.02);
    assert_eq!(stdout_of(&args), stdout_of(&args));
}

#[test]
fn mc_single_sample() {
    let v = json_of(&[
        "mc", "-Na", "3", "-Nb", "3", "-q", "6", "--steps", "10001", "--burn-in", "10000", "--stride", "1",
    ]);
    assert_eq!(v["metadata"]["summary"]["samples"], 1);
    assert_eq!(column_u64(&v["rows"], "count").iter().sum::<u64>(), 1);
}

#[test]
fn mc_writes_trace_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.csv");
    let out_s = out.to_str().unwrap();
    stdout_of(&["mc", "--steps", "2000", "--burn-in", "1000", "--stride", "100", "--output", out_s]);
    let trace = std::fs::read_to_string(dir.path().join("run.csv.trace")).unwrap();
    assert_eq!(trace.lines().count(), 10);
    assert!(trace.lines().all(|l| l.parse::<u64>().unwrap() <= 6));
    assert!(std::fs::read_to_string(&out).unwrap().starts_with("# tool=emergent"));

    let explicit = dir.path().join("t.txt");
    stdout_of(&[
        "mc", "--steps", "2000", "--burn-in", "1000", "--chains", "2", "--seed", "3", "--trace",
        explicit.to_str().unwrap(),
    ]);
    assert!(dir.path().join("t.txt.3").exists());
    assert!(dir.path().join("t.txt.4").exists());
}

#[test]
fn mc_accepts_explicit_energies_and_rejects_bad_ones() {
    let v = json_of(&["mc", "--init", "6,0,0,0,0,0", "--steps", "5000", "--burn-in", "10"]);
    assert_eq!(v["metadata"]["summary"]["samples"], 499);
    let bad = emergent(&["mc", "--init", "1,1,1", "--steps", "5000"]);
    assert_eq!(bad.status.code(), Some(3));
    let bad = emergent(&["mc", "--init", "sideways"]);
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn sweep_narrows_with_scale() {
    let v = json_of(&["sweep", "-Na", "3", "-Nb", "3", "-q", "6", "--factors", "1,100,1000"]);
    let w = column_f64(&v["rows"], "relative_width");
    assert!(w[0] > w[1] && w[1] > w[2]);

    let v = json_of(&["sweep", "--factors", "10000,100"]);
    assert_eq!(column_u64(&v["rows"], "factor"), vec![100, 10000]);
    let w = column_f64(&v["rows"], "relative_width");
    assert!((w[0] / w[1] - 10.0).abs() <= 2.0);
}

#[test]
fn sweep_factor_one_matches_solids() {
    let sweep = json_of(&["sweep", "--factors", "1"]);
    let solids = json_of(&["solids"]);
    for key in ["mean", "std", "relative_width", "fwhm"] {
        let a = sweep["rows"][0][key].as_f64().unwrap();
        let b = solids["metadata"]["summary"][key].as_f64().unwrap();
        assert!((a - b).abs() < 1e-9, "{key}: {a} vs {b}");
    }
}

#[test]
fn casino_figures() {
    let v = json_of(&["casino", "--p-a", "0.505", "--fee-net", "100", "--payout-net", "102", "--plays", "10000"]);
    let get = |name: &str| {
        v["rows"].as_array().unwrap().iter().find(|r| r["quantity"] == name).unwrap().clone()
    };
    assert_eq!(get("expected_profit")["exact"], "100");
    assert_eq!(get("expected_fees")["exact"], "505000");
    assert_eq!(get("expected_payout")["exact"], "504900");

    let v = json_of(&["casino", "--p-a", "1"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows[2]["exact"], "1000000");
    assert_eq!(rows[3]["exact"], "0");

    let bad = emergent(&["casino", "--p-a", "1.2"]);
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn casino_simulation_agrees_with_expectation() {
    let args = ["casino", "--simulate", "10000", "--seed", "7"];
    let v = json_of(&args);
    let find = |name: &str| {
        v["rows"].as_array().unwrap().iter().find(|r| r["quantity"] == name).unwrap()["value"].as_f64().unwrap()
    };
    let se = find("simulated_std_error");
    assert!((find("simulated_mean") - 100.0).abs() <= 3.0 * se);
    // Standard error predicted from the exact variance.
    let predicted = find("profit_variance").sqrt() / 100.0;
    assert!((se - predicted).abs() < 0.05 * predicted);
    assert_eq!(stdout_of(&args), stdout_of(&args));
}

#[test]
fn exit_codes_distinguish_errors() {
    assert_eq!(emergent(&["dice", "--dice", "1000,1000,1000"]).status.code(), Some(4));
    assert_eq!(emergent(&["solids", "-Na", "60000", "-Nb", "1", "-q", "50000"]).status.code(), Some(4));
    assert_eq!(emergent(&["solids", "-Na", "0"]).status.code(), Some(3));
    assert_eq!(emergent(&["dice", "--dice", "cat/dog", "--mapping", "sum"]).status.code(), Some(3));
    assert_eq!(emergent(&["sweep", "--factors", "0"]).status.code(), Some(3));
    assert_eq!(emergent(&["mc", "--steps", "10", "--burn-in", "10"]).status.code(), Some(3));
    assert_eq!(emergent(&["bogus"]).status.code(), Some(2));
}

#[test]
fn timestamp_is_opt_in() {
    let v = json_of(&["dice", "--dice", "6"]);
    assert!(v["metadata"]["timestamp"].is_null());
    let v = json_of(&["dice", "--dice", "6", "--timestamp"]);
    assert!(v["metadata"]["timestamp"].as_str().unwrap().parse::<u64>().is_ok());
}
