use std::path::PathBuf;
use std::process::Command;

use proptest::prelude::*;
use serde_json::Value;
use sigma_dyn::algebra::TermOrder;
use sigma_dyn::cli::{parse_session, run_script, ScriptError};
use sigma_dyn::config::Config;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn read(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

fn sigma_dyn(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_sigma-dyn")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json_docs(stdout: &str) -> Vec<Value> {
    stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn every_fixture_runs_within_budget() {
    for f in ["e1.sdyn", "e2.sdyn", "e4.sdyn", "mobius.sdyn", "dme.sdyn", "broken.sdyn"] {
        let out = run_script(&read(f), Config::default());
        assert!(out.input_error.is_none(), "{f}: {:?}", out.input_error);
        for r in &out.reports {
            assert!(r.outcome.exit_code() != 3 && r.outcome.exit_code() != 4, "{f}: {} -> {:?}", r.command, r.result);
        }
    }
}

#[test]
fn exit_codes() {
    let path = fixture("e1.sdyn");
    assert_eq!(sigma_dyn(&["run", path.to_str().unwrap()]).0, 0);
    let path = fixture("broken.sdyn");
    assert_eq!(sigma_dyn(&["run", path.to_str().unwrap()]).0, 2);
    assert_eq!(sigma_dyn(&["run", "/nonexistent/script.sdyn"]).0, 4);

    let dir = std::env::temp_dir().join(format!("sigma-dyn-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.sdyn");
    std::fs::write(&bad, "field Q\nvariety V ambient x\nmap phi : V -> V : x + \n").unwrap();
    let (code, stdout) = sigma_dyn(&["run", bad.to_str().unwrap(), "--json"]);
    assert_eq!(code, 4);
    let doc = &json_docs(&stdout)[0];
    assert_eq!(doc["status"], "input-error");
    assert!(doc["error"].as_str().unwrap().starts_with("3:22: syntax error"));

    // five S-pairs cannot finish the cofactor eliminations
    let tight = dir.join("tight.sdyn");
    std::fs::write(&tight, "field Q\nvariety A2 ambient x, y\nmap h : A2 -> A2 : (y, -x + y^2 + 1)\ndarboux A2 h --degree 2\n")
        .unwrap();
    let (code, stdout) = sigma_dyn(&["run", tight.to_str().unwrap(), "--json", "--budget", "5"]);
    assert_eq!(code, 3, "{stdout}");
    assert_eq!(json_docs(&stdout)[0]["flags"]["budget_exhausted"], true);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn json_schema_and_spec_commands() {
    let path = fixture("e1.sdyn");
    let (code, stdout) = sigma_dyn(&["run", path.to_str().unwrap(), "--json"]);
    assert_eq!(code, 0);
    let docs = json_docs(&stdout);
    for d in &docs {
        assert_eq!(d["schema"], "sigma-dyn/1");
        for k in ["command", "inputs", "result", "certificates", "flags", "timing"] {
            assert!(d.get(k).is_some(), "missing {k}");
        }
    }
    let by = |c: &str| docs.iter().find(|d| d["command"] == c).unwrap().clone();
    let bg = by("binding-group");
    assert_eq!(bg["result"]["multiply"], serde_json::json!(["w_1 + w_2"]));
    assert_eq!(bg["result"]["theta"], serde_json::json!(["w + x"]));
    assert!(bg["certificates"].as_array().unwrap().iter().all(|c| c["holds"] == true));
    assert_eq!(by("orbit-density")["result"]["verdict"], "DENSE-≤3");
    assert_eq!(by("translational-witness")["result"]["w"], serde_json::json!(["1"]));

    let e2 = run_script(&read("e2.sdyn"), Config::default());
    let inv = e2.reports.iter().find(|r| r.command == "invariants").unwrap();
    assert_eq!(inv.result["basis"], serde_json::json!(["1"]));
}

#[test]
fn lex_order_changes_reported_bases_only() {
    let text = "field Q\nvariety A2 ambient x, y\nmap m : A2 -> A2 : (x + y, x*y)\ngraph m\n";
    let g = run_script(text, Config::default());
    let l = run_script(text, Config::default().with_order(TermOrder::Lex));
    assert_eq!(g.exit_code(), 0);
    assert_eq!(l.exit_code(), 0);
    assert_eq!(l.reports[0].inputs["order"], "lex");
    assert_eq!(g.reports[0].inputs["order"], "grevlex");
}

#[test]
fn sharp_membership_failure_is_a_failed_check() {
    let text = read("e4.sdyn").replace("sharp-solve T --degree 2 --point 0", "sharp-solve T --degree 2 --point t");
    let out = run_script(&text, Config::default());
    assert_eq!(out.exit_code(), 2);
}

#[test]
fn reports_are_deterministic() {
    for f in ["e1.sdyn", "e4.sdyn", "dme.sdyn", "mobius.sdyn"] {
        let a: Vec<String> = run_script(&read(f), Config::default()).reports.iter().map(|r| r.payload().to_string()).collect();
        let b: Vec<String> = run_script(&read(f), Config::default()).reports.iter().map(|r| r.payload().to_string()).collect();
        assert_eq!(a, b, "{f}");
    }
}

#[test]
fn fixtures_round_trip() {
    for f in ["e1.sdyn", "e2.sdyn", "e4.sdyn", "mobius.sdyn", "dme.sdyn", "broken.sdyn"] {
        let a = parse_session(&read(f)).unwrap();
        let b = parse_session(&a.to_string()).unwrap();
        assert_eq!(a.stmts, b.stmts, "{f}");
    }
}

#[test]
fn name_errors_carry_positions() {
    let e = parse_session("field Q\nvariety V ambient x\nsigmavariety S = (V, psi)\n").unwrap_err();
    assert!(matches!(e, ScriptError::Name { line: 3, col: 22, .. }), "{e:?}");
    let e = parse_session("field Q\nvariety V ambient x\nvariety V ambient y\n").unwrap_err();
    assert!(matches!(e, ScriptError::Name { line: 3, .. }), "{e:?}");
}

fn atom() -> impl Strategy<Value = String> {
    prop_oneof![
        (1i64..9).prop_map(|n| n.to_string()),
        Just("x".to_string()),
        Just("y".to_string()),
        Just("t".to_string()),
    ]
}

fn expr() -> impl Strategy<Value = String> {
    atom().prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a} + {b}")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})*({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a} - {b}")),
            (inner.clone(), 1u32..3).prop_map(|(a, e)| format!("({a})^{e}")),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pretty_print_then_parse_is_identity(
        a in expr(),
        b in expr(),
        deg in 0u32..5,
        with_ideal in any::<bool>(),
    ) {
        let ideal = if with_ideal { format!(" ideal {{ {a} }}") } else { String::new() };
        let text = format!(
            "field Q(t) sigma t -> t + 1 inv t -> t - 1\nvariety V ambient x, y{ideal}\nvariety A ambient x, y\n\
             map phi : A -> A : ({a}, {b})\npoint p = (t, 1/2)\ninvariants A phi --degree {deg}\norbit-density A phi --point p\n"
        );
        let s = parse_session(&text).unwrap();
        let again = parse_session(&s.to_string()).unwrap();
        prop_assert_eq!(s.stmts, again.stmts);
    }
}
