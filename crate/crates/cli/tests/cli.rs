use acaf::report::Report;
use std::path::PathBuf;
use std::process::{Command, Output};

fn acaf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_acaf")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8")
}

fn temp(name: &str, body: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn empty_document_uses_the_defaults() {
    let o = acaf(&["eigenvalues", "--inline", ""]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("k=05") && !out.contains("k=06"), "default n is 6:\n{out}");
}

#[test]
fn eigenvalue_table_has_the_top_slot_values() {
    let o = acaf(&["eigenvalues", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let rep: Report = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rep.data["k=00 homogeneity=+01"], "-6 (dim 1)");
    assert_eq!(rep.data["k=01 homogeneity=+02"], "-10 (dim 6)");
}

#[test]
fn odd_dimension_is_an_input_error() {
    let o = acaf(&["nabla0", "--n", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("must be even"), "{}", stderr(&o));
    let o = acaf(&["nabla0", "--inline", "n = 7"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_and_inconsistent_problems_are_rejected() {
    for (body, needle) in [
        ("n = ", "line 1"),
        ("colour = 1", "unknown field"),
        ("[[gamma]]\nindex = [0, 1, 9]\nterms = []", "gamma[0].index"),
        ("[[gamma]]\nindex = [0, 1, 2]\nterms = [{ exp = [1, 0, 0, 0, 0, 0], c = \"1/0\" }]", "gamma[0].terms[0].c"),
        ("[[gamma]]\nindex = [0, 1, 2]\nterms = [{ exp = [1, 0], c = 1 }]", "gamma[0].terms[0].exp"),
        ("[[gamma]]\nindex = [0, 1, 2]\nterms = [{ exp = [1, 0, 0, 0, 0, 0], c = 1 }]", "torsion-free"),
        ("[[theta]]\nindex = [0, 1]\nterms = [{ exp = [0, 0, 0, 0, 0, 0], c = 1 }]", "theta"),
    ] {
        let o = acaf(&["curvature", "--inline", body]);
        assert_eq!(o.status.code(), Some(2), "{body}");
        assert!(stderr(&o).contains(needle), "{body}: {}", stderr(&o));
    }
    let o = acaf(&["cohomology", "--mode", "float"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(acaf(&["no-such-verb"]).status.code(), Some(2));
}

#[test]
fn nabla0_of_the_flat_chart_is_the_input() {
    let o = acaf(&["nabla0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let rep: Report = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(rep.all_passed() && rep.checks.len() == 4);
    assert_eq!(rep.data["nabla0 equals input"], "true");
}

#[test]
fn bgg_composite_vanishes_on_the_flat_chart() {
    let o = acaf(&["bgg-verify", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let rep: Report = serde_json::from_str(&stdout(&o)).unwrap();
    let c = rep.checks.iter().find(|c| c.name == "B1 B0 = 0").expect("composite check");
    assert_eq!(c.residual, "0");
}

#[test]
fn json_is_deterministic_and_parses_back() {
    let args = ["curvature", "--inline", "connection = \"acf\"", "--seed", "4", "--format", "json"];
    let (a, b) = (acaf(&args), acaf(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let rep: Report = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(rep.schema_version, 1);
    let again = serde_json::to_string_pretty(&rep).unwrap();
    assert_eq!(again.trim_end(), stdout(&a).trim_end());
    let other = acaf(&["curvature", "--inline", "connection = \"acf\"", "--seed", "5", "--format", "json"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn problem_file_with_explicit_coefficients() {
    let body = "n = 4\n[[gamma]]\nindex = [0, 1, 2]\nterms = [{ exp = [0, 0, 1, 0], c = \"2/3\" }]\n\
                [[gamma]]\nindex = [1, 0, 2]\nterms = [{ exp = [0, 0, 1, 0], c = \"2/3\" }]\n";
    let path = temp("explicit.toml", body);
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("explicit.json");
    let o = acaf(&["decompose-conn", path.to_str().unwrap(), "--format", "json", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let rep: Report = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(rep.all_passed());
    assert!(rep.data.keys().all(|k| k.starts_with("H[")) && !rep.data.is_empty(), "{:?}", rep.data);
}

#[test]
fn a_failed_check_exits_with_one() {
    let body = "[[h]]\nindex = [0, 1, 2]\nterms = [{ exp = [0, 0, 0, 0, 0, 0], c = 1 }]";
    let o = acaf(&["decompose-conn", "--inline", body]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL    supplied H matches"), "{}", stdout(&o));
}

#[test]
fn float_mode_agrees_with_exact_mode() {
    for verb in ["nabla0", "curvature"] {
        let run = |mode: &str| {
            let o = acaf(&[verb, "--inline", "connection = \"acf\"", "--mode", mode, "--format", "json"]);
            assert_eq!(o.status.code(), Some(0));
            let rep: Report = serde_json::from_str(&stdout(&o)).unwrap();
            rep.checks.into_iter().map(|c| (c.name, c.status)).collect::<Vec<_>>()
        };
        assert_eq!(run("exact"), run("float"), "{verb}");
    }
}
