use std::collections::HashMap;
use std::path::PathBuf;
use std::process::Command;

use qecad::cad::compute_cad;
use qecad::formula::parse;
use qecad::poly::VarOrder;
use qecad::qe::evaluate_qf;
use qecad::rational::int;
use qecad_cli::{run, CellRecord, DecisionRecord, EXIT_FALSE, EXIT_OK, EXIT_TIMEOUT, EXIT_USAGE};

fn corpus(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("../../corpus");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn qecad(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["qecad".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn decide_prints_true() {
    let (code, out, _) = qecad(&["decide", "-f", "(forall x) x*x >= 0"]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "true\n"));
    let (code, out, _) = qecad(&["decide", &corpus("square_nonneg.qe")]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "true\n"));
}

#[test]
fn malformed_input_is_a_usage_error() {
    let (code, out, err) = qecad(&["decide", "-f", "forall x. x >"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(out.is_empty());
    assert!(err.contains("line 1"), "{err}");
    let (code, _, _) = qecad(&["decide", "-f", "x > 0"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = qecad(&["frobnicate"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn assert_true_and_witness() {
    let (code, out, _) = qecad(&["decide", "--assert-true", "--witness", &corpus("quadratic_roots_unguarded.qe")]);
    assert_eq!(code, EXIT_FALSE);
    assert_eq!(out, "false\nwitness: a = 0, b = 0, c = -1\n");
    let (code, _, _) = qecad(&["decide", "--assert-true", &corpus("quadratic_roots_guarded.qe")]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn time_budget_exit_code() {
    let (code, _, err) = qecad(&["eliminate", "--time-budget", "0.000000001", &corpus("heywood_implicit.qe")]);
    assert_eq!(code, EXIT_TIMEOUT);
    assert!(err.contains("time budget"));
}

#[test]
fn eliminate_heywood_file_matches_sign_analysis() {
    let (code, out, _) = qecad(&["eliminate", &corpus("heywood_implicit.qe")]);
    assert_eq!(code, EXIT_OK);
    let f = parse(out.trim()).unwrap();
    for a in -1..=1 {
        for b in -1..=1 {
            for c in -1..=1 {
                let pt: HashMap<String, _> =
                    [("r12", a), ("r13", b), ("r23", c)].iter().map(|(k, v)| (k.to_string(), int(*v))).collect();
                let zeros = [a, b, c].iter().filter(|v| **v == 0).count();
                let want = a * b * c > 0 || zeros >= 2;
                assert_eq!(evaluate_qf(&f, &pt).unwrap(), want, "({a},{b},{c})");
            }
        }
    }
}

#[test]
fn json_cell_dump_round_trips() {
    let (code, out, _) = qecad(&["cad", "--format", "json", "--exact", &corpus("parabola.qe")]);
    assert_eq!(code, EXIT_OK);
    let records: Vec<CellRecord> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    for (line, r) in out.lines().zip(&records) {
        assert_eq!(serde_json::to_string(r).unwrap(), line);
    }
    let vars = VarOrder::new(&["x1", "x2"]);
    let tree = compute_cad(&[parse("x2^2 - x1 = 0").unwrap().polynomials()[0].clone()], &vars, 2).unwrap();
    let mut expected = Vec::new();
    for lvl in 1..=2 {
        for c in tree.cells_at(lvl) {
            expected.push((c.level, c.path.clone(), c.kind(), c.signs.clone()));
        }
    }
    let mut got: Vec<_> = records.iter().map(|r| (r.level, r.path.clone(), r.kind, r.signs.clone())).collect();
    got.sort_by_key(|g| (g.0, g.1.clone()));
    expected.sort_by_key(|g| (g.0, g.1.clone()));
    assert_eq!(got, expected);
    assert_eq!(records.iter().filter(|r| r.level == 2).count(), 9);
}

#[test]
fn decision_json() {
    let (_, out, _) = qecad(&["decide", "--format", "json", "--witness", "-f", "exists x. x^2 = 4"]);
    let r: DecisionRecord = serde_json::from_str(out.trim()).unwrap();
    assert!(r.value);
    assert_eq!(r.witness.unwrap()[0].0, "x");
}

#[test]
fn model_questions() {
    let (code, out, _) = qecad(&["model", "identify", "heywood-corr"]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "false\n"));
    let (_, out, _) = qecad(&["model", "include", "heywood-corr", "gaussian-complete-offdiag-3"]);
    assert_eq!(out, "true\n");
    let (_, out, _) = qecad(&["model", "equal", "heywood-corr", "gaussian-complete-offdiag-3"]);
    assert_eq!(out, "false\n");
    let (_, out, _) = qecad(&["model", "implicitize", &corpus("heywood.model")]);
    let (_, direct, _) = qecad(&["eliminate", &corpus("heywood_implicit.qe")]);
    assert_eq!(out, direct);
    let (_, out, _) = qecad(&[
        "model", "ci-implication", "--premise", "1 _|_ 2", "--premise", "1 _|_ 3 | 2", "--conclusion", "1 _|_ 3",
    ]);
    assert_eq!(out, "true\n");
    let (_, out, _) = qecad(&["model", "bound", "heywood-corr", "--quantity", "b1^2"]);
    assert_eq!(out, "r >= 0\n");
    let (code, _, _) = qecad(&["model", "include", "heywood-corr", "no-such-model"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["eliminate".to_string(), corpus("heywood_implicit.qe")],
        vec!["cad".to_string(), "--exact".to_string(), corpus("parabola.qe")],
        vec!["decide".to_string(), "--witness".to_string(), corpus("heywood_identify.qe")],
    ] {
        let a: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
        assert_eq!(qecad(&a).1, qecad(&a).1);
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_qecad");
    let ok = Command::new(bin).args(["decide", "-f", "(forall x) x*x >= 0"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "true\n");
    let bad = Command::new(bin).args(["decide", "-f", "((("]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(!bad.stderr.is_empty());
    let slow = Command::new(bin)
        .args(["eliminate", &corpus("heywood_implicit.qe")])
        .env("QECAD_TIME_BUDGET", "0.000000001")
        .output()
        .unwrap();
    assert_eq!(slow.status.code(), Some(3));
}
