use std::io::Write as _;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g4ix")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn temp_file(name: &str, text: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("g4ix-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn prove_identity() {
    let o = run(&["prove", "--calculus", "G4ip", "p -> p"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "PROVABLE\n");
}

#[test]
fn prove_modal_conjunction_with_g4() {
    let o = run(&["prove", "--calculus", "G4i+R_K", "--engine", "g4", "([]p & []q) -> [](p & q)"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn peirce_is_unprovable_in_g3() {
    let o = run(&["prove", "--calculus", "G3ip", "--engine", "g3", "((p->q)->p)->p"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o), "UNPROVABLE\n");
}

#[test]
fn prove_sequent_with_text_and_json() {
    let o = run(&["prove", "--sequent", "--calculus", "G4iKT", "--emit", "text", "[]p => p"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "PROVABLE\n[]p => p   [R_T]\n  p => p   [Ax]\n");

    let o = run(&["prove", "--calculus", "G4iK", "--emit", "json", "[]p -> []p"]);
    assert_eq!(code(&o), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["verdict"], "PROVABLE");
    assert_eq!(doc["derivation"]["rule"], "Rimp");
    assert_eq!(doc["derivation"]["children"][0]["rule"], "R_K");

    let o = run(&["prove", "--emit", "json", "p"]);
    assert_eq!(code(&o), 1);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(doc["derivation"].is_null());
}

#[test]
fn budget_exhaustion_is_unknown() {
    let o = run(&["prove", "--calculus", "G3ip", "--nodes", "2", "(p -> q) -> (q -> r) -> p -> r"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).starts_with("UNKNOWN"));
}

#[test]
fn greedy_matching_is_accepted() {
    let o = run(&["prove", "--match", "greedy", "p & q -> q & p"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn input_errors_exit_three() {
    assert_eq!(code(&run(&["prove", "p ->"])), 3);
    assert_eq!(code(&run(&["prove", "p =>"])), 3);
    assert_eq!(code(&run(&["prove", "--calculus", "G9ip", "p"])), 3);
    assert_eq!(code(&run(&["prove", "--modal", "R_NOPE", "p"])), 3);
    assert_eq!(code(&run(&["prove", "--bogus", "p"])), 3);
    assert_eq!(code(&run(&[])), 3);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn g4_engine_refuses_nonterminating_rules() {
    let o = run(&["prove", "--calculus", "G3ip", "--engine", "g4", "p -> p"]);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("requires a terminating calculus"));

    let o = run(&["prove", "--calculus", "G3ip", "--engine", "g4", "--force", "p -> p"]);
    assert_eq!(code(&o), 0);

    let o = run(&["prove", "--calculus", "G3ip", "--engine", "g4", "--force", "(p -> q) -> r"]);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("does not decrease"));
}

#[test]
fn transform_k() {
    let o = run(&["transform", "--rules", "R_K"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("conclusion: P, box G, (box phi -> psi) => D"));
    assert!(out.contains("# generated from R_K\nrule R_K_imp"));
    assert!(out.contains("rule Limpimp"));
    assert!(!out.contains("rule Limp {"));
}

#[test]
fn transform_t_generates_nothing() {
    let o = run(&["transform", "--rules", "R_T"]);
    assert_eq!(code(&o), 0);
    assert!(!stdout(&o).contains("generated from"));
    assert!(stderr(&o).contains("not right modal"));
}

#[test]
fn transform_kd_generates_one_rule() {
    let o = run(&["transform", "--rules", "R_K,R_D"]);
    assert_eq!(stdout(&o).matches("# generated from").count(), 1);
}

#[test]
fn transform_output_parses_back() {
    let out = stdout(&run(&["transform", "--rules", "R_K,R_X"]));
    let path = temp_file("transformed.rules", &out);
    let o = run(&["rules-parse", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rules = out.lines().filter(|l| l.starts_with("rule ")).collect::<Vec<_>>().join("\n") + "\n";
    assert_eq!(stdout(&o), rules);
}

#[test]
fn termination_of_k_d_t() {
    let o = run(&["check-termination", "--rules", "R_K,R_D,R_T"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "R_K: TERMINATING\nR_D: TERMINATING\nR_T: TERMINATING\n");
}

#[test]
fn termination_counterexamples() {
    let o = run(&["check-termination", "--rules", "R_GL"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o), "R_GL: COUNTEREXAMPLE G={p}, P={}, phi=q\n");

    let o = run(&["check-termination", "--rules", "R_K4,R_SL"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o).matches("COUNTEREXAMPLE").count(), 2);
}

#[test]
fn termination_with_weights_file() {
    let heavy_box = temp_file("heavy.toml", "and = 2\nor = 1\nimp = 1\nmodal = 3\n");
    let o = run(&["check-termination", "--rules", "R_K,R_T", "--order", heavy_box.to_str().unwrap()]);
    assert_eq!(code(&o), 0);

    let bad = temp_file("bad.toml", "and = 2\nor = 1\nimp = 1\nmodal = 0\n");
    assert_eq!(code(&run(&["check-termination", "--rules", "R_K", "--order", bad.to_str().unwrap()])), 3);
    let typo = temp_file("typo.toml", "and = 2\nor = 1\nimpl = 1\nmodal = 1\n");
    assert_eq!(code(&run(&["check-termination", "--rules", "R_K", "--order", typo.to_str().unwrap()])), 3);
}

#[test]
fn equiv_test_k() {
    let o = run(&["equiv-test", "--modal", "R_K", "--count", "200", "--size", "10", "--seed", "42"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.contains("\tequivalence\t")).count(), 200);
    assert!(out.contains("\"disagree\": 0"));
}

#[test]
fn equiv_test_empty() {
    let o = run(&["equiv-test", "--count", "0"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("\"count\": 0"));
}

#[test]
fn equiv_test_refuses_gl() {
    let gl = temp_file("gl.rules", "rule R_GL { premises: P, box G, box phi, G => phi ; conclusion: P, box G => box phi }\n");
    let o = run(&["equiv-test", "--modal", gl.to_str().unwrap(), "--count", "5"]);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("requires a terminating calculus"));
    assert!(stderr(&o).contains("check-termination fails"));
}

#[test]
fn output_is_reproducible() {
    let args = ["equiv-test", "--modal", "R_K,R_D", "--count", "60", "--seed", "7"];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
}

#[test]
fn failing_cases_replay_through_prove() {
    let out = stdout(&run(&["equiv-test", "--modal", "R_K", "--count", "20", "--seed", "3"]));
    for line in out.lines().filter(|l| l.contains("\tequivalence\t")) {
        let fields: Vec<&str> = line.split('\t').collect();
        let o = run(&["prove", "--sequent", "--calculus", "G4iK", fields[2]]);
        let expected = fields[4].trim_start_matches("g4=");
        assert_eq!(stdout(&o).trim(), expected, "{line}");
    }
}

#[test]
fn rules_parse_reports_line_numbers() {
    let path = temp_file("bad.rules", "rule Ok { premises: G => phi ; conclusion: P, box G => box phi }\nrule Bad { premises: G, chi => phi ; conclusion: G => box phi }\n");
    let o = run(&["rules-parse", path.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("line 2: rule Bad"));
}

#[test]
fn rules_parse_from_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_g4ix"))
        .args(["rules-parse", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"# comment\nrule R_T {premises: G, phi => D; conclusion: G, box phi => D}\n")
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "rule R_T { premises: G, phi => D ; conclusion: G, box phi => D }\n");
}
