//! Binary-level tests: exit codes, output formats, determinism.

use serde_json::Value;
use std::process::{Command, Output};

fn anosov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anosov"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

/// Small enough to run in seconds, large enough to reproduce the verdict.
const REDUCED: &[&str] = &[
    "counterexample",
    "--t-grid",
    "-1:1:0.5",
    "--depth",
    "8",
    "--ratio-order",
    "12",
    "--max-period",
    "4",
];

#[test]
fn reproduced_verdict_exits_zero() {
    let out = anosov(REDUCED);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"]["outcome"], "reproduced");
    assert!(v["max_curve_gap"].as_f64().unwrap() <= 5e-3);
    let witness = &v["spectrum_witness"];
    assert_eq!(witness["period"], 3);
    assert!((witness["gap"].as_f64().unwrap() - 1.2).abs() <= 1e-9);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (f1, f2) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let mut args1 = REDUCED.to_vec();
    args1.extend(["--out", f1.to_str().unwrap()]);
    let mut args2 = REDUCED.to_vec();
    args2.extend(["--out", f2.to_str().unwrap()]);
    assert_eq!(anosov(&args1).status.code(), Some(0));
    assert_eq!(anosov(&args2).status.code(), Some(0));
    let (b1, b2) = (std::fs::read(f1).unwrap(), std::fs::read(f2).unwrap());
    assert!(!b1.is_empty());
    assert_eq!(b1, b2);
}

#[test]
fn counterexample_csv_has_the_pinned_header() {
    let mut args = REDUCED.to_vec();
    args.extend(["--format", "csv"]);
    let out = anosov(&args);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,P_phi,P_phi2,gap"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5);
    for row in rows {
        assert_eq!(row.split(',').count(), 4, "row {row:?}");
    }
}

#[test]
fn failed_verdict_exits_two() {
    let out = anosov(&[
        "counterexample",
        "--k",
        "1",
        "--t-grid",
        "-0.5:0.5:0.5",
        "--depth",
        "6",
        "--ratio-order",
        "8",
        "--max-period",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"]["outcome"], "failed");
    assert!(v["verdict"]["reason"].as_str().unwrap().contains("agree"));
}

#[test]
fn degenerate_potential_exits_one() {
    let out = anosov(&[
        "counterexample",
        "--potential",
        "zero",
        "--t-grid",
        "-0.5:0.5:0.5",
        "--depth",
        "6",
        "--ratio-order",
        "8",
        "--max-period",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate"));
}

#[test]
fn usage_problems_exit_one_not_two() {
    assert_eq!(anosov(&["counterexample", "--nope"]).status.code(), Some(1));
    assert_eq!(anosov(&["curve", "--t-grid", "junk"]).status.code(), Some(1));
    assert_eq!(anosov(&["pressure", "--potential", "tan:1,0:1"]).status.code(), Some(1));
    assert_eq!(anosov(&["--help"]).status.code(), Some(0));
}

#[test]
fn pressure_of_the_zero_potential_is_the_entropy() {
    let out = anosov(&["pressure", "--potential", "zero", "--depth", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let golden: f64 = (1.0 + 5.0f64.sqrt()) / 2.0;
    assert!((v["value"].as_f64().unwrap() - golden.ln()).abs() <= 1e-6);
    assert!(v["residual"].as_f64().unwrap() <= 1e-9);
    assert_eq!(v["method"], "transfer_operator");
}

#[test]
fn second_matrix_doubles_the_entropy() {
    // [[2,1],[1,1]] is the square of the default map.
    let out = anosov(&[
        "pressure", "--matrix", "2,1,1,1", "--potential", "zero", "--depth", "8",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let golden: f64 = (1.0 + 5.0f64.sqrt()) / 2.0;
    assert!((v["value"].as_f64().unwrap() - 2.0 * golden.ln()).abs() <= 1e-6);
}

#[test]
fn curve_csv_has_the_pinned_header() {
    let out = anosov(&[
        "curve",
        "--potential",
        "zero",
        "--method",
        "sum",
        "--order",
        "6",
        "--t-grid",
        "-1:1:1",
        "--no-cross",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,P,method,order,residual"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.split(',').nth(2) == Some("orbit_sum")));
}

#[test]
fn spectrum_lists_the_period_three_orbit() {
    let out = anosov(&["spectrum", "--max-period", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("period,value"));
    assert_eq!(text.lines().filter(|l| l.starts_with("3,")).count(), 4);

    let out = anosov(&["spectrum", "--max-period", "3"]);
    let v = stdout_json(&out);
    assert_eq!(v["max_period"], 3);
    assert_eq!(v["entries"]["3"].as_array().unwrap().len(), 4);
}

#[test]
fn coding_report_is_internally_consistent() {
    let out = anosov(&["coding"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let n = v["alphabet_size"].as_u64().unwrap() as usize;
    assert!(n > 0);
    assert_eq!(v["rectangles"].as_array().unwrap().len(), n);
    let t = v["transition"].as_array().unwrap();
    assert_eq!(t.len(), n);
    assert!(t.iter().all(|row| row.as_array().unwrap().len() == n));
    assert!(v["zero_symbol"].as_u64().unwrap() < n as u64);
    assert!(v["mixing_power"].as_u64().unwrap() >= 1);
    assert!(v["max_diameter"].as_f64().unwrap() < 0.5);
}

#[test]
fn realize_reports_a_calibrated_lebesgue_model() {
    let out = anosov(&["realize", "--depth", "8", "--livsic-orders", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    let leb = &v["lebesgue"];
    assert!((leb["livsic_bound"].as_f64().unwrap() - 1.0).abs() <= 1e-6);
    assert!(leb["inverse_g_cycle_max_dev"].as_f64().unwrap() <= 1e-9);
    assert!(v["theta"]["worst_tail_utilization"].as_f64().unwrap() <= 1.0);
    assert!(v["normalization"].as_f64().unwrap() > 0.0);
    assert!(v["livsic"]["bound"].as_f64().unwrap() < 1.2);
    let coh = v["cohomology"].as_array().unwrap();
    assert_eq!(coh.len(), 3);
    let first = coh[0]["residual"].as_f64().unwrap();
    let last = coh[2]["residual"].as_f64().unwrap();
    assert!(last < first, "no contraction: {first} -> {last}");
}

#[test]
fn reports_without_a_tabular_form_reject_csv() {
    assert_eq!(anosov(&["coding", "--format", "csv"]).status.code(), Some(1));
    assert_eq!(anosov(&["realize", "--format", "csv"]).status.code(), Some(1));
}
