use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quditgates")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn matrix_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn report_envelope() {
    let v = json(&["gate", "--p", "3"]);
    for key in ["operation", "inputs", "outputs", "provenance", "wall_time"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["operation"], "gate");
    assert_eq!(v["provenance"], "computed");
}

#[test]
fn gate_exponents() {
    let v = json(&["gate", "--p", "5", "--params", "1,4,0"]);
    assert_eq!(v["outputs"]["exponents"], serde_json::json!([0, 3, 4, 2, 1]));
    let v = json(&["gate", "--p", "3", "--params", "1,2,0"]);
    assert_eq!(v["outputs"]["root_order"], 9);
    assert_eq!(v["outputs"]["exponents"], serde_json::json!([0, 1, 8]));
}

#[test]
fn table1_qutrit_row() {
    let out = run(&["table1", "--p", "3", "--format", "csv", "--self-check"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("3,Z_9×Z_3,1,8,18,0,2,")), "{text}");
}

#[test]
fn table2_qubit_row_and_provenance() {
    let v = json(&["table2", "--p", "2"]);
    let row = &v["outputs"]["rows"][0];
    assert!((row["eps_d_pct"]["value"].as_f64().unwrap() - 45.32).abs() < 0.05);
    assert_eq!(row["eps_d_pct"]["provenance"], "computed");
    assert!((row["n_psi"]["value"].as_f64().unwrap() - 0.1036).abs() < 5e-5);
    assert_eq!(row["n_j"]["value"], 0.2071);
    assert_eq!(row["n_j"]["provenance"], "paper-recorded");

    let v = json(&["table2", "--p", "7"]);
    let row = &v["outputs"]["rows"][0];
    assert_eq!(row["eps_d_pct"]["provenance"], "paper-recorded");
    assert!((row["eps_pd_pct"]["value"].as_f64().unwrap() - 73.27).abs() < 0.005);

    let v = json(&["table2", "--p", "5", "--extended"]);
    let row = &v["outputs"]["rows"][0];
    assert_eq!(row["eps_d_pct"]["provenance"], "computed");
    assert!((row["eps_d_pct"]["value"].as_f64().unwrap() - 95.24).abs() < 0.1);
}

#[test]
fn table2_self_check_reports_the_qubit_rounding_gap() {
    // (2−√2)/4 = 14.6447% sits 0.0053 pp from the published 14.65%
    let out = run(&["table2", "--p", "2", "--self-check"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("eps_pd"));
    assert_eq!(code(&["table2", "--p", "2", "--self-check", "--tol", "2e-4"]), 0);
}

#[test]
fn table3_qutrit_bounds() {
    let v = json(&["table3", "--p", "3", "--self-check"]);
    let row = &v["outputs"]["rows"][0];
    assert!((row["lower_pct"]["value"].as_f64().unwrap() - 58.15).abs() < 0.01);
    assert!(row["lower_pct"]["provenance"].as_str().unwrap().starts_with("configured"));
    assert!((row["upper_pct"]["value"].as_f64().unwrap() - 78.63).abs() < 0.05);
}

#[test]
fn table3_config_handling() {
    let cfg = matrix_file("distill_threshold.3 = 0.3165\n");
    let v = json(&["table3", "--p", "3", "--config", cfg.path().to_str().unwrap()]);
    assert!((v["outputs"]["rows"][0]["lower_pct"]["value"].as_f64().unwrap() - 58.14).abs() < 0.01);
    // p = 5 is absent from this config
    assert_eq!(code(&["table3", "--p", "5", "--config", cfg.path().to_str().unwrap()]), 1);
    let bad = matrix_file("distill_threshold.3 = 1.7\n");
    assert_eq!(code(&["table3", "--p", "3", "--config", bad.path().to_str().unwrap()]), 1);
    assert_eq!(code(&["table3", "--p", "3", "--config", "/nonexistent/thresholds.conf"]), 1);
}

#[test]
fn dilute_and_inverse() {
    let v = json(&["dilute", "--p", "3", "--eps", "0.5815"]);
    assert!((v["outputs"]["state_eps"].as_f64().unwrap() - 0.3165).abs() < 5e-4);
    let v = json(&["dilute", "--p", "3", "--eps", "0.3165", "--inverse"]);
    assert!((v["outputs"]["gate_eps"].as_f64().unwrap() - 0.5815).abs() < 5e-4);
    let v = json(&["dilute", "--p", "5", "--eps", "0.4", "--simulate"]);
    let (a, b) = (v["outputs"]["state_eps"].as_f64().unwrap(), v["outputs"]["simulated_state_eps"].as_f64().unwrap());
    assert!((a - b).abs() < 1e-10);
    assert_eq!(code(&["dilute", "--p", "3", "--eps", "1.5"]), 2);
}

#[test]
fn negativity_values() {
    let v = json(&["negativity", "--p", "7"]);
    assert!((v["outputs"]["negativity"].as_f64().unwrap() - 0.1202).abs() < 5e-5);
    let v = json(&["negativity", "--p", "2", "--optimize", "--restarts", "2", "--seed", "3"]);
    assert!((v["outputs"]["negativity"].as_f64().unwrap() - 0.1036).abs() < 5e-5);
}

#[test]
fn threshold_kinds() {
    let v = json(&["threshold", "--p", "2", "--kind", "depol-state"]);
    assert!((v["outputs"]["epsilon_star"].as_f64().unwrap() - 0.293).abs() < 5e-4);
    let v = json(&["threshold", "--p", "3", "--kind", "pd-gate", "--lp"]);
    let (c, l) = (v["outputs"]["epsilon_star"].as_f64().unwrap(), v["outputs"]["lp_epsilon_star"].as_f64().unwrap());
    assert!((c - 0.3673).abs() < 5e-5 && (c - l).abs() < 5e-4);
    let v = json(&["threshold", "--p", "7", "--kind", "depol-gate"]);
    assert_eq!(v["outputs"]["epsilon_star"], 0.9763);
    assert_eq!(v["provenance"], "paper-recorded, not recomputed");
    assert_eq!(code(&["threshold", "--p", "7", "--kind", "depol-gate", "--params", "1,1,1"]), 2);
}

#[test]
fn inject_is_deterministic_per_seed() {
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("wall_time");
        v
    };
    let a = strip(json(&["inject", "--p", "5", "--seed", "11"]));
    let b = strip(json(&["inject", "--p", "5", "--seed", "11"]));
    assert_eq!(a, b);
    assert!(a["outputs"]["fidelity"].as_f64().unwrap() > 1.0 - 1e-10);
    assert!((a["outputs"]["success_probability"].as_f64().unwrap() - 0.2).abs() < 1e-10);
    let c = json(&["inject", "--p", "3", "--state", "1,0,-i"]);
    assert!(c["outputs"]["fidelity"].as_f64().unwrap() > 1.0 - 1e-10);
}

#[test]
fn verify_matrix_files() {
    let f = matrix_file("1 0 0\n0 0.766044443118978+0.642787609686539i 0\n0 0 0.766044443118978-0.642787609686539i\n");
    let v = json(&["verify", "--p", "3", f.path().to_str().unwrap()]);
    assert_eq!(v["outputs"]["result"]["kind"], "third_level");
    assert_eq!(v["outputs"]["result"]["params"], serde_json::json!({ "z": 1, "gamma": 2, "epsilon": 0 }));

    let clifford = matrix_file("1 0\n0 i\n");
    let v = json(&["verify", "--p", "2", clifford.path().to_str().unwrap()]);
    assert_eq!(v["outputs"]["result"]["kind"], "clifford");

    let off_diagonal = matrix_file("0 1\n1 0\n");
    assert_eq!(code(&["verify", "--p", "2", off_diagonal.path().to_str().unwrap()]), 2);
    let garbled = matrix_file("1 x\n0 1\n");
    assert_eq!(code(&["verify", "--p", "2", garbled.path().to_str().unwrap()]), 1);
}

#[test]
fn spectra_and_group() {
    let out = run(&["spectra", "--p", "3", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3, "{text}");
    let v = json(&["group", "--p", "3"]);
    assert_eq!(v["outputs"]["group_name"], "Z_9×Z_3");
    assert_eq!(v["outputs"]["m_gate"]["params"], "(1,1,0)");
    assert!(json(&["group", "--p", "2"])["outputs"].get("m_gate").is_none());
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["gate", "--p", "4"]), 2);
    assert_eq!(code(&["gate"]), 1);
    assert_eq!(code(&["gate", "--p", "3", "--params", "1,2"]), 1);
    assert_eq!(code(&["table1", "--tol", "-1"]), 1);
    assert_eq!(code(&["table1", "--format", "xml"]), 1);
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["--help"]), 0);
}
