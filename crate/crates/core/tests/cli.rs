use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn cstarlab(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cstarlab")).args(args).output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).expect("utf-8 output"))
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, out) = cstarlab(&full);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: {e}\n{out}")))
}

/// Compares with `tests/golden/<name>.json`; `UPDATE_GOLDEN=1` rewrites it.
fn golden(name: &str, args: &[&str]) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"));
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (_, out) = cstarlab(&full);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &out).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let (got, want): (Value, Value) = (serde_json::from_str(&out).unwrap(), serde_json::from_str(&want).unwrap());
    assert_eq!(got, want, "{name} differs from its golden file");
}

#[test]
fn calkin_example() {
    let (code, v) = json(&["calkin-eq", "w^w+3", "w^w*5+3"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], true);
    assert_eq!(v["cross_checks"]["consistent"], true);
    let (code, text) = cstarlab(&["calkin-eq", "w^w+3", "w^w*5+3"]);
    assert_eq!(code, 0);
    assert!(text.contains("true"));
}

#[test]
fn atomless_quotient_example() {
    let (code, v) = json(&["ba-eq", "P(omega)/fin", "free"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], true);
    assert!(v.get("conflict").is_none());
}

#[test]
fn interval_algebra_example() {
    let (code, text) = cstarlab(&["ba-eq", "intalg(w)", "intalg(w*2)"]);
    assert_eq!(code, 0);
    assert!(text.contains("(1, 1, false)") && text.contains("(1, 2, false)"));
    assert!(text.contains("isolated-points-criterion"));
}

#[test]
fn golden_outputs() {
    golden("ba_eq_intalg", &["ba-eq", "intalg(w)", "intalg(w*2)"]);
    golden("ba_eq_fincof", &["ba-eq", "fincof", "P(omega)"]);
    golden("calkin_eq", &["calkin-eq", "w^w+3", "w^w*5+3"]);
    golden("ba_eq_free", &["ba-eq", "P(omega)/fin", "free"]);
    golden("ba_enumerate", &["ba-enumerate", "6"]);
    golden("ord_arith", &["ord-arith", "pow", "w+1", "w"]);
}

#[test]
fn exit_codes() {
    let (code, v) = json(&["ord-eq", "w^^2", "w"]);
    assert_eq!(code, 2);
    assert!(v["error"].to_string().contains('2'), "{v}");
    assert_eq!(cstarlab(&["translate", "forall x. x /\\ y = x"]).0, 2);
    assert_eq!(cstarlab(&["ef", "w", "w", "--rank", "9"]).0, 4);
    assert_eq!(cstarlab(&["interpolate", "--algebra", "finite:2", "--lower", "{0}", "--upper", "{0,1}"]).0, 3);
    assert_eq!(cstarlab(&["interpolate", "--lower", "0", "--upper", "*"]).0, 0);
    assert_eq!(cstarlab(&["realize", "x in {1}; (* x (elem 1 0)) in {0}; (* x (elem 0 1)) in {0}", "--points", "2"]).0, 3);
    assert_eq!(cstarlab(&["realize", "x in {1}", "--points", "2"]).0, 0);
    assert_eq!(cstarlab(&["ba-eq", "fincof", "P(omega)"]).0, 0);
}

#[test]
fn every_verb_reports_verb_and_inputs() {
    let commands: &[&[&str]] = &[
        &["ord-arith", "mul", "w+1", "w*2"],
        &["ord-eq", "w*2", "w*3"],
        &["calkin-eq", "w^w", "w^w*2"],
        &["ef", "4", "5", "--kind", "order", "--rank", "2"],
        &["ba-invariants", "prod(fincof, free)"],
        &["ba-eq", "finite(3)", "finite(3)"],
        &["ba-enumerate", "2"],
        &["stone", "3", "--map", "0,0,1", "--codomain", "2"],
        &["translate", "forall x. x <= 1", "--points", "2"],
        &["ceval", "(sup x :ball (norm x))", "--points", "2"],
        &["jspec", "0,1", "1,1"],
        &["fmember", "--lambda", "1,1", "0,1", "1,1"],
        &["code", "0.5,-0.5i", "--m", "4"],
        &["interpolate", "--lower", "0", "--upper", "*"],
        &["realize", "x in {1}", "--points", "2"],
        &["orth", "5"],
    ];
    for args in commands {
        let (code, v) = json(args);
        assert_eq!(code, 0, "{args:?}: {v}");
        assert_eq!(v["verb"], args[0], "{args:?}");
        assert!(v.get("inputs").is_some(), "{args:?}: {v}");
        assert!(v.get("verdict").is_some() || v.get("value").is_some(), "{args:?}: {v}");
    }
}

#[test]
fn cross_checks_agree_with_verdicts() {
    for (a, b) in [("w*2", "w*3"), ("w^2+1", "w^2*2+1"), ("5", "5"), ("w^w+w", "w^w*3+w")] {
        let (_, v) = json(&["ord-eq", a, b]);
        assert_eq!(v["cross_checks"]["consistent"], true, "{a} vs {b}: {v}");
        if v["verdict"] == true {
            assert!(v["cross_checks"]["ef"].as_array().unwrap().iter().all(|r| r["duplicator_wins"] == true));
        }
    }
    for (a, b) in [("finite(3)", "finite(3)"), ("finite(2)", "finite(4)"), ("prod(finite(1), finite(2))", "finite(3)")] {
        let (_, v) = json(&["ba-eq", a, b]);
        assert_eq!(v["cross_checks"]["consistent"], true, "{a} vs {b}: {v}");
    }
}

#[test]
fn out_file_matches_stdout() {
    let path = std::env::temp_dir().join(format!("cstarlab-out-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let (code, out) = cstarlab(&["--json", "--out", p, "orth", "3"]);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), out);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn seeded_runs_are_reproducible() {
    let args = ["--json", "--seed", "7", "ba-eq", "2", "3"];
    assert_eq!(cstarlab(&args), cstarlab(&args));
    let args = ["--json", "ceval", "(inf x :sa (norm (- x a)))", "--points", "2", "--param", "a=1,-1"];
    let (code, first) = cstarlab(&args);
    assert_eq!(code, 0, "{first}");
    assert_eq!(first, cstarlab(&args).1);
}
