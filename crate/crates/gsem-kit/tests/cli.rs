//! End-to-end command-line tests: exit codes, golden example output, and
//! JSON round-trips.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gsem-kit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path.display().to_string()
}

const SHELL_SIG: &str = "\
exo U : {u0}
endo S1 : {0, 1}
endo S2 : {0, 1}
endo Z : {0, 1}
allow [S1<-1]
allow [S2<-1]
";

const SHELL_MODEL: &str = include_str!("../src/examples/shell-game.gsem");

#[test]
fn examples_are_deterministic_and_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let one = bin()
        .args(["examples", "shell-game", "--dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(one.status.success(), "{}", String::from_utf8_lossy(&one.stderr));
    let two = bin()
        .args(["examples", "shell-game", "--dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(one.stdout, two.stdout, "example output must be byte-for-byte stable");

    let text = stdout(&one);
    assert!(text.contains("(M, u0) |= [S1<-1](S1=1 & S2=1 & Z=1) & [S2<-1](S1=1 & S2=1 & Z=0): true"));
    assert!(text.contains("0 violations"));
    assert!(text.contains("VALID over all 4096 equation models"));
    assert!(dir.path().join("shell-game.sig").exists());
    assert!(dir.path().join("shell-game.gsem").exists());

    let sv = bin()
        .args(["examples", "switching-values", "--dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(sv.status.success());
    let text = stdout(&sv);
    assert!(text.contains("acyc  false"));
    assert!(text.contains("{(A=0, B=0), (A=1, B=1)} vs {(A=0, B=1), (A=1, B=0)}"));
    assert!(text.contains("acyc2 true"));
}

#[test]
fn check_exit_codes_reflect_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let model = write(dir.path(), "m.gsem", SHELL_MODEL);
    let ok = run(&["check", "--model", &model, "--formula", "[S1<-1](Z=1)"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok), "true\n");

    let no = run(&["check", "--model", &model, "--formula", "[S1<-1](Z=0)", "--witness"]);
    assert_eq!(no.status.code(), Some(1));
    let text = stdout(&no);
    assert!(text.starts_with("false"));
    assert!(text.contains("falsified at context (U=u0)"));
    assert!(text.contains("offending outcome (S1=1, S2=1, Z=1)"));

    // a positioned syntax error exits 2
    let bad = run(&["check", "--model", &model, "--formula", "[]("]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("offset"));
}

#[test]
fn parse_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let sig = write(dir.path(), "s.sig", SHELL_SIG);
    let out = run(&[
        "parse",
        "--signature",
        &sig,
        "--formula",
        "[S1<-1](Z=1 | !(Z=0)) -> <S2<-1>true",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(v["formulas"][0]["kind"], "implies");
    assert_eq!(v["formulas"][0]["lhs"]["kind"], "box");
    assert_eq!(v["formulas"][0]["rhs"]["kind"], "diamond");

    // canonical text output reparses to the same canonical text
    let plain = run(&["parse", "--signature", &sig, "--formula", "[S1<-1]((Z=1))"]);
    assert_eq!(stdout(&plain), "[S1<-1](Z=1)\n");
}

#[test]
fn solve_prints_canonical_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let model = write(
        dir.path(),
        "cycle.sem",
        "\
exo U : {u0}
endo X : {0, 1}
endo Y : {0, 1}
allow *

sem {
  eq X(U, Y) = { (u0, 0)->0, (u0, 1)->1 }
  eq Y(U, X) = { (u0, 0)->0, (u0, 1)->1 }
}
",
    );
    let out = run(&["solve", "--model", &model, "--context", "u0", "--intervene", ""]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "(X=0, Y=0)\n(X=1, Y=1)\n");

    let json = run(&["solve", "--model", &model, "--context", "u0", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(v["outcomes"].as_array().unwrap().len(), 2);
}

#[test]
fn classify_json_reports_all_four_properties() {
    let dir = tempfile::tempdir().unwrap();
    let model = write(dir.path(), "m.gsem", SHELL_MODEL);
    let out = run(&["classify", "--model", &model, "--class", "coh,ge1,le1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["coh"], true);
    assert_eq!(v["ge1"], true);
    assert_eq!(v["le1"], true);
    assert_eq!(v["in_class"], true);
}

#[test]
fn axioms_summary_table_lists_out_of_language_rows() {
    let dir = tempfile::tempdir().unwrap();
    let model = write(dir.path(), "m.gsem", SHELL_MODEL);
    let out = run(&["axioms", "--model", &model, "--system", "AX+", "--json"]);
    assert_eq!(out.status.code(), Some(0), "AX+ holds in the shell game");
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["violations"], 0);
    let rows = v["rows"].as_array().unwrap();
    let d5 = rows.iter().find(|r| r["schema"] == "D5").unwrap();
    assert!(d5["not_in_language"].as_u64().unwrap() > 0);
    assert_eq!(d5["valid"], 0);
}

#[test]
fn prove_accepts_and_rejects_with_step_positions() {
    let dir = tempfile::tempdir().unwrap();
    let sig = write(dir.path(), "one.sig", "exo U : {u0}\nendo X : {0, 1}\nallow *\n");
    let good = write(
        dir.path(),
        "good.drv",
        "\
system AX+basic
1. [X<-1](X=1) ; axiom D4 [X<-1]
",
    );
    let out = run(&["prove", "--signature", &sig, "--derivation", &good]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "ACCEPT [X<-1](X=1)\n");

    let bad = write(
        dir.path(),
        "bad.drv",
        "\
system AX+basic
1. [X<-1](X=0) ; axiom D4 [X<-1]
",
    );
    let out = run(&["prove", "--signature", &sig, "--derivation", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("REJECT step 1:"));
}

#[test]
fn decide_verdicts_and_witness_files() {
    let dir = tempfile::tempdir().unwrap();
    let sig = write(dir.path(), "one.sig", "exo U : {u0}\nendo X : {0, 1}\nallow *\n");

    let valid = run(&["decide", "--signature", &sig, "--formula", "[X<-1](X=1)"]);
    assert_eq!(valid.status.code(), Some(0));
    assert_eq!(stdout(&valid), "VALID\n");

    let witness = dir.path().join("counter.gsem");
    let invalid = bin()
        .args(["decide", "--signature", &sig, "--formula", "<>(true)", "--out"])
        .arg(&witness)
        .output()
        .unwrap();
    assert_eq!(invalid.status.code(), Some(1));
    assert!(stdout(&invalid).starts_with("INVALID"));
    // the countermodel file parses back into a model with an empty set
    let text = std::fs::read_to_string(&witness).unwrap();
    let model = gsem_kit::model::parse_model(&text).unwrap();
    assert!(!gsem_kit::properties::count_outcomes_class(&model.to_gsem()).ge1);

    // restricted to the nonempty class the same formula is valid
    let valid2 = run(&[
        "decide", "--signature", &sig, "--formula", "<>(true)", "--class", "ge1",
    ]);
    assert_eq!(valid2.status.code(), Some(0));

    let sat = run(&["decide", "--signature", &sig, "--formula", "[](X=1)", "--sat", "--json"]);
    assert_eq!(sat.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&sat)).unwrap();
    assert_eq!(v["verdict"], "SAT");
    assert!(v["witness"].as_str().unwrap().contains("gsem {"));

    let unsat = run(&["decide", "--signature", &sig, "--formula", "[](X=1) & <>(X=0)", "--sat"]);
    assert_eq!(unsat.status.code(), Some(1));
    assert_eq!(stdout(&unsat), "UNSAT\n");
}

#[test]
fn cap_is_exit_three_and_env_adjustable() {
    let dir = tempfile::tempdir().unwrap();
    let sig = write(dir.path(), "one.sig", "exo U : {u0}\nendo X : {0, 1}\nallow *\n");
    let out = bin()
        .args(["decide", "--signature", &sig, "--formula", "true"])
        .env("GSEMKIT_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout(&out), "CAP-EXCEEDED(16)\n");

    let sampled = run(&[
        "decide", "--signature", &sig, "--formula", "[X<-1](X=1)", "--sample", "20", "--seed", "5",
    ]);
    assert_eq!(sampled.status.code(), Some(0));
    assert!(stdout(&sampled).contains("SAMPLED-NO-COUNTEREXAMPLE"));
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["decide", "--signature", "/nonexistent.sig", "--formula", "true"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["examples", "unknown-example"]);
    assert_eq!(out.status.code(), Some(2));
}
