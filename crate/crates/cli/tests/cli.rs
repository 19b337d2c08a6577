//! End-to-end runs of the `ptasep` binary.

use std::process::{Command, Output};

fn ptasep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptasep")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn roots_reports_both_components() {
    let v = json(&ptasep(&["roots", "--L", "6", "--N", "3", "--z-re", "0.1", "--z-im", "0.05"]));
    assert_eq!(v["result"]["left"].as_array().unwrap().len(), 3);
    assert_eq!(v["result"]["right"].as_array().unwrap().len(), 3);
    assert_eq!(v["manifest"]["command"], "roots");
    assert!(v["result"]["residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn roots_outside_radius_is_invalid_input() {
    let out = ptasep(&["roots", "--L", "6", "--N", "3", "--z-re", "0.9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn limit_lattice_has_one_root_per_branch_and_side() {
    let v = json(&ptasep(&["roots", "--limit", "--z-re", "0.4", "--branches", "2"]));
    assert_eq!(v["result"]["left"].as_array().unwrap().len(), 5);
    assert_eq!(v["result"]["right"].as_array().unwrap().len(), 5);
}

#[test]
fn output_is_reproducible() {
    let args = ["finite-cdf", "--L", "6", "--N", "3", "--probe", "2,0,0.7", "--mc", "2000", "--seed", "9"];
    let a = ptasep(&args);
    let b = ptasep(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let seq = ptasep(&[&args[..], &["--sequential"]].concat());
    let (va, vs) = (json(&a), json(&seq));
    assert_eq!(va["result"], vs["result"]);
}

#[test]
fn mixed_signs_agree_with_exact_solution() {
    let v = json(&ptasep(&[
        "finite-cdf", "--L", "6", "--N", "3", "--probe", "2,0,0.5", "--probe", "3,2,1.0", "--signs", "+-", "--exact",
    ]));
    let formula = v["result"]["formula"]["value"].as_f64().unwrap();
    let exact = v["result"]["exact"].as_f64().unwrap();
    assert!((formula - exact).abs() < 1e-9, "{formula} vs {exact}");
}

#[test]
fn general_initial_condition_is_accepted() {
    let v = json(&ptasep(&["finite-cdf", "--L", "6", "--N", "3", "--initial", "-4,-1,0", "--probe", "1,-3,0.8", "--exact"]));
    let formula = v["result"]["formula"]["value"].as_f64().unwrap();
    let exact = v["result"]["exact"].as_f64().unwrap();
    assert!((formula - exact).abs() < 1e-9, "{formula} vs {exact}");
}

#[test]
fn limit_sweep_is_a_monotone_csv_curve() {
    let out = ptasep(&["limit-f", "--point", "0,1,0", "--x-grid", "-3:1:1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# manifest: {"));
    assert_eq!(lines.next().unwrap(), "x,value,im_residue,nodes,k_max,converged");
    let values: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(values.len(), 5);
    assert!(values.windows(2).all(|w| w[0] < w[1]));
    assert!(values.iter().all(|v| (0.0..=1.0).contains(v)));
}

#[test]
fn bad_queries_exit_with_code_two() {
    // a tie in tau needs increasing x
    let out = ptasep(&["limit-f", "--point", "0,1,0.5", "--point", "0,1,0.0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = ptasep(&["finite-cdf", "--L", "6", "--N", "3", "--probe", "1,0,0.5", "--signs", "+"]);
    assert_eq!(out.status.code(), Some(2));
    let out = ptasep(&["verify", "everything"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn trajectory_export_lists_jumps() {
    let out = ptasep(&["simulate", "--L", "8", "--N", "4", "--trajectory", "3", "--horizon", "2.0", "--seed", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert!(!rows.is_empty());
    let times: Vec<f64> = rows.iter().map(|r| r.split(',').next().unwrap().parse().unwrap()).collect();
    assert!(times.windows(2).all(|w| w[0] <= w[1]) && times.iter().all(|&t| t <= 2.0));
}

#[test]
fn simulate_reports_seed_and_stderr() {
    let v = json(&ptasep(&["simulate", "--L", "8", "--N", "4", "--probe", "4,1,1.0", "--samples", "5000", "--seed", "3"]));
    assert_eq!(v["result"]["seed"], 3);
    assert_eq!(v["result"]["samples"], 5000);
    assert!(v["result"]["stderr"].as_f64().unwrap() > 0.0);
}

#[test]
fn verify_identities_passes() {
    let out = ptasep(&["verify", "identities"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"].as_array().unwrap().len(), 2);
}
