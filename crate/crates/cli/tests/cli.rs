use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kohn-noether"))
        .args(args)
        .env_remove("KOHN_NOETHER_FORMAT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn arbitrary_case_has_four_generators() {
    let o = run(&["symmetries", "--case", "arbitrary"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("4 generators"));
    for line in [
        "T = ∂t",
        "R = y ∂x - x ∂y",
        "X̃ = ∂x - 2*y ∂t",
        "Ỹ = ∂y + 2*x ∂t",
    ] {
        assert!(s.contains(line), "{line} missing from\n{s}");
    }
}

#[test]
fn zero_case_latex_lists_ten_generators() {
    let o = run(&["symmetries", "--case", "zero", "--format", "latex"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert_eq!(s.matches(" &= ").count(), 10);
    assert!(s.contains("W_{\\beta} &= \\beta \\partial_u"));
}

#[test]
fn special_exponents_are_usage_errors() {
    let o = run(&["symmetries", "--case", "power:3"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("--case cubic"));
    assert_eq!(code(&run(&["symmetries", "--case", "power:1"])), 2);
    assert_eq!(code(&run(&["symmetries", "--case", "quartic"])), 2);
    assert_eq!(code(&run(&["symmetries"])), 2);
}

#[test]
fn format_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_kohn-noether"))
        .args(["symmetries", "--case", "exp"])
        .env("KOHN_NOETHER_FORMAT", "json")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["generators"].as_array().unwrap().len(), 5);
}

#[test]
fn bracket_tables_are_fully_classified() {
    for case in ["arbitrary", "zero", "linear", "power:2", "exp", "cubic"] {
        let o = run(&["brackets", "--case", case]);
        assert_eq!(code(&o), 0, "{case}");
        assert!(!stdout(&o).contains("UNCLASSIFIED"));
    }
}

#[test]
fn exponential_table_matches_the_published_one() {
    let o = run(&["brackets", "--case", "exp", "--compare"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("0 differ"));
}

#[test]
fn linear_table_json_has_w_labels() {
    let o = run(&["brackets", "--case", "linear", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
    assert_eq!(v["cols"].as_array().unwrap().len(), 6);
    let rows = v["entries"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.as_array().unwrap().len() == 6));
    let w_row: Vec<&Value> = rows[5]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["col"] != "W")
        .collect();
    assert_eq!(w_row.len(), 5);
    assert!(w_row
        .iter()
        .all(|e| e["label"].as_str().unwrap().starts_with("W[")));
}

#[test]
fn linear_table_comparison_reports_the_printed_sign() {
    let o = run(&["brackets", "--case", "linear", "--compare"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("MISMATCH [Ỹ, X̃]: published 4T, computed -4T"));
}

#[test]
fn exponential_noether_set() {
    let o = run(&["noether", "--case", "exp"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("E [exp]: rejected"));
    assert!(s.contains("witness"));
    assert!(s.contains("accepted: T, R, X̃, Ỹ"));
}

#[test]
fn dilation_is_rejected_for_the_zero_case() {
    let o = run(&["noether", "--case", "zero", "--symmetry", "Z"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("Z [zero]: rejected"));
    assert!(s.contains("defect/L = 2"));
}

#[test]
fn power_dilation_is_rejected() {
    let o = run(&["noether", "--case", "power:2", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["matches"], true);
    let d = v["certificates"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["symmetry"] == "D")
        .unwrap();
    assert_eq!(d["verdict"], "rejected");
    assert!(d.get("witness").is_some());
}

#[test]
fn unknown_symmetry_is_a_usage_error() {
    assert_eq!(
        code(&run(&["noether", "--case", "zero", "--symmetry", "Q"])),
        2
    );
    assert_eq!(
        code(&run(&["noether", "--case", "exp", "--symmetry", "V1"])),
        2
    );
}

#[test]
fn time_translation_gives_tau() {
    let o = run(&["claw", "derive", "--case", "arbitrary", "--symmetry", "T"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("T (tau)"));
    assert!(s.contains("C1 = -2*y*u_t^2 - u_x*u_t"));
    assert!(s.contains("C3 = -2*x^2*u_t^2 - 2*y^2*u_t^2 + 1/2*u_x^2 + 1/2*u_y^2 - F(u)"));
}

#[test]
fn derived_v2_law_verifies() {
    let o = run(&["claw", "verify", "--case", "zero", "--symmetry", "V2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains(": ok"));
}

#[test]
fn printed_sigma_fails_verification() {
    let o = run(&[
        "claw",
        "verify",
        "--case",
        "arbitrary",
        "--symmetry",
        "R",
        "--published",
    ]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn v3_comparison_is_covered_by_the_ledger() {
    let o = run(&["claw", "compare", "--case", "zero", "--symmetry", "V3"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("C2: published 2*x*u*u_y | derived -2*x*u*u_y"));
    assert!(s.contains("ledger C2"));
    assert!(s.contains("documented in the discrepancy ledger"));
}

#[test]
fn rejected_symmetry_has_no_law() {
    let o = run(&["claw", "derive", "--case", "zero", "--symmetry", "Z"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("witness E(defect) ="));
}

#[test]
fn concrete_beta_is_checked_and_verified() {
    let ok = run(&[
        "claw",
        "verify",
        "--case",
        "zero",
        "--symmetry",
        "W",
        "--beta",
        "x*t-2*x^2*y",
    ]);
    assert_eq!(code(&ok), 0);
    let bad = run(&[
        "claw",
        "verify",
        "--case",
        "zero",
        "--symmetry",
        "W",
        "--beta",
        "x^2",
    ]);
    assert_eq!(code(&bad), 2);
    assert!(stderr(&bad).contains("does not satisfy"));
    let wrong_case = run(&[
        "claw",
        "derive",
        "--case",
        "arbitrary",
        "--symmetry",
        "T",
        "--beta",
        "x",
    ]);
    assert_eq!(code(&wrong_case), 2);
}

#[test]
fn eval_reduces_modulo_the_equation() {
    let o = run(&["eval", "u_xx + u_yy", "--reduce", "--case", "zero"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o).trim(),
        "4*x*u_yt - 4*x^2*u_tt - 4*y*u_xt - 4*y^2*u_tt"
    );
    let o = run(&["eval", "u*u_x", "--d", "x"]);
    assert_eq!(stdout(&o).trim(), "u*u_xx + u_x^2");
    assert_eq!(code(&run(&["eval", "u_x +"])), 2);
}

#[test]
fn out_writes_the_report_to_a_file() {
    let path = std::env::temp_dir().join(format!("kohn-noether-{}.txt", std::process::id()));
    let o = run(&["ledger", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(written.starts_with("# Discrepancy ledger"));
}

#[test]
fn heisenberg_reports_the_conjugate_pair() {
    let o = run(&["heisenberg"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("conjugate: X = ∂x + 2*y ∂t, Y = ∂y - 2*x ∂t\n  X² + Y² − Δ_H = 0"));
}

#[test]
fn selftest_filters_by_case_and_emits_json() {
    let o = run(&["selftest", "--case", "exp", "--format", "json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let ids: Vec<u64> = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["id"].as_u64().unwrap())
        .collect();
    assert!(!ids.is_empty());
    assert!(!ids.contains(&4), "{ids:?}");
    assert_eq!(code(&o), i32::from(v["passed"] != true));
}
