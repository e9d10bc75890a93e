use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use pilp_core::config::Config;
use pilp_core::decide::{Counterexample, DecisionResult, ForAllExistsInstance, Verdict};
use pilp_core::gap::{GapInstance, GapWitness};
use pilp_core::io::{parse_int_vec, parse_polyhedron, parse_rat, parse_rat_matrix, parse_rat_vec};
use pilp_core::oracle::fiber;
use serde_json::{json, Value};

fn instances() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../instances")
}

fn pilp(args: &[&str], stdin: Option<&str>) -> (i32, Value, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pilp"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let json = if text.trim().is_empty() { Value::Null } else { serde_json::from_str(&text).unwrap() };
    (out.status.code().unwrap(), json, String::from_utf8(out.stderr).unwrap())
}

fn file(rel: &str) -> String {
    instances().join(rel).to_str().unwrap().to_owned()
}

fn sentence(path: &str) -> ForAllExistsInstance {
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let a = parse_rat_matrix(&v["A"], "A", None).unwrap();
    let p = v["p"].as_u64().unwrap() as usize;
    let q = parse_polyhedron(&v["Q"], "Q", Some(a.nrows() + p)).unwrap();
    ForAllExistsInstance::new(a, q, p).unwrap()
}

#[test]
fn decide_interval_holds() {
    let (code, out, _) = pilp(&["decide", &file("decide/interval_length_one.json")], None);
    assert_eq!(code, 0);
    assert_eq!(out, json!({"verdict": "Holds"}));
}

#[test]
fn decide_certificates_reverify() {
    let cfg = Config::default();
    for name in ["interval_length_half", "square_one_side_short", "half_steps_in_z", "triangle_empty_fiber"] {
        let path = file(&format!("decide/{name}.json"));
        let inst = sentence(&path);
        for extra in [&[][..], &["--bell-scarf"][..]] {
            let mut args = vec!["decide", path.as_str()];
            args.extend_from_slice(extra);
            let (code, out, _) = pilp(&args, None);
            assert_eq!(code, 1, "{name}");
            assert_eq!(out["verdict"], "Fails");
            let cx = &out["counterexample"];
            let res = DecisionResult {
                verdict: Verdict::Fails,
                counterexample: Some(Counterexample {
                    b: parse_rat_vec(&cx["b"], "b").unwrap(),
                    z: parse_int_vec(&cx["z"], "z").unwrap(),
                }),
            };
            assert!(res.verify(&inst, &cfg).unwrap(), "{name}");
        }
    }
}

#[test]
fn gap_threshold_gives_a_certificate() {
    let path = file("gap/interval_unit.json");
    let (code, out, _) = pilp(&["gap", "--gamma", "1/2", &path], None);
    assert_eq!(code, 1);
    assert_eq!(out["exceeds"], true);
    let c = &out["certificate"];
    let w = GapWitness {
        b: parse_rat_vec(&c["b"], "b").unwrap(),
        beta: parse_rat(&c["beta"], "beta").unwrap(),
        gamma: parse_rat(&c["gamma"], "gamma").unwrap(),
    };
    let inst = GapInstance::new(parse_rat_matrix(&json!([["1"], ["-1"]]), "A", None).unwrap(), vec![parse_rat(&json!("1"), "c").unwrap()]).unwrap();
    assert!(w.verify(&inst, &Config::default()).unwrap());

    let (code, out, _) = pilp(&["gap", "--gamma", "1", &path], None);
    assert_eq!((code, &out["exceeds"]), (0, &json!(false)));
}

#[test]
fn gap_max_values() {
    let (code, out, _) = pilp(&["gap", "--max", "--denom", "4", &file("gap/interval_unit.json")], None);
    assert_eq!(code, 0);
    assert_eq!(out["value"], "1");
    let (_, out, _) = pilp(&["gap", "--max", &file("gap/interval_double.json")], None);
    assert_eq!(out["value"], "2");
}

#[test]
fn width_of_unit_square() {
    let (code, out, _) = pilp(&["width", &file("width/unit_square.json")], None);
    assert_eq!(code, 0);
    assert_eq!(out["width"], "1");
    let d = parse_int_vec(&out["direction"], "direction").unwrap();
    assert_eq!(d.iter().filter(|x| x.magnitude() == &1u32.into()).count(), 1);
    assert_eq!(d.iter().filter(|x| x.magnitude() == &0u32.into()).count(), 1);
}

#[test]
fn feasible_exit_codes_and_witness() {
    let (code, out, _) = pilp(&["feasible", &file("feasible/interval_without_integer.json")], None);
    assert_eq!((code, &out["status"]), (1, &json!("Infeasible")));
    let (code, out, _) = pilp(&["feasible", &file("feasible/mixed_halves.json")], None);
    assert_eq!(code, 0);
    assert_eq!(out["witness"], json!(["1", "1/2"]));
}

#[test]
fn partition_and_structure_of_interval() {
    let (code, out, _) = pilp(&["partition", &file("partition/interval.json")], None);
    assert_eq!(code, 0);
    assert_eq!(out["regions"].as_array().unwrap().len(), 1);
    assert_eq!(out["regions"][0]["triple"]["c"], json!(["1"]));
    let (code, out, _) = pilp(&["structure", &file("structure/interval.json")], None);
    assert_eq!(code, 0);
    for s in out["schemes"].as_array().unwrap() {
        assert_eq!(s["candidates"].as_array().unwrap().len(), 1);
    }
}

#[test]
fn input_errors_name_the_field() {
    let cases = [
        (r#"{"A": [["1"], ["x"]], "p": 0, "Q": []}"#, "A[1][0]"),
        (r#"{"A": [["1"], ["-1"]], "p": 0, "Q": {"dim": 3, "constraints": []}}"#, "Q"),
        (r#"{"A": [["1"], ["-1"]], "p": 0}"#, "Q"),
        (r#"{"A": [["1"], ["-1"]], "Q": [], "typo": 1}"#, "typo"),
        ("not json", "stdin"),
    ];
    for (text, field) in cases {
        let (code, out, err) = pilp(&["decide", "-"], Some(text));
        assert_eq!(code, 2, "{text}");
        assert_eq!(out, Value::Null);
        assert!(err.contains(field), "{err} lacks {field}");
    }
    let (code, _, err) = pilp(&["gap", "--gamma", "1/2", "-"], Some(r#"{"A": [["1"], ["-1"]], "c": ["1", "2"]}"#));
    assert_eq!(code, 2);
    assert!(err.contains("c has length 2"));
    let (code, _, _) = pilp(&["frobnicate"], None);
    assert_eq!(code, 2);
}

#[test]
fn configured_limits_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("config.json");
    std::fs::write(&cfg, r#"{"flatness": {"1": "1"}}"#).unwrap();
    let (code, _, err) = pilp(&["--config", cfg.to_str().unwrap(), "structure", &file("structure/triangle.json")], None);
    assert_eq!(code, 3);
    assert!(err.contains("dimension 2"));
    let four = r#"{"A": [["1","0","0","0"], ["-1","0","0","0"]]}"#;
    let (code, _, _) = pilp(&["structure", "-"], Some(four));
    assert_eq!(code, 3);
}

#[test]
fn oracle_subcommands() {
    let (code, out, _) = pilp(&["oracle", "points", &file("feasible/interval_with_integer.json")], None);
    assert_eq!((code, out), (0, json!({"point": ["1"]})));
    let (code, out, _) =
        pilp(&["oracle", "forall-exists", "--lo", "-1", "--hi", "1", "--step", "1/4", &file("decide/interval_length_half.json")], None);
    assert_eq!(code, 1);
    let b = parse_rat_vec(&out["b"], "b").unwrap();
    let p = fiber(&parse_rat_matrix(&json!([["1"], ["-1"]]), "A", None).unwrap(), &b);
    assert_eq!(pilp_core::oracle::brute_has_int_point(&p), Some(None));
    let (code, out, _) = pilp(&["oracle", "gap", "--lo", "0", "--hi", "2", "--step", "1/4", &file("gap/interval_unit.json")], None);
    assert_eq!((code, out), (0, json!({"gap": "3/4"})));
    let (code, out, _) = pilp(&["oracle", "width", &file("width/unit_square.json")], None);
    assert_eq!((code, &out["width"]), (0, &json!("1")));
}
