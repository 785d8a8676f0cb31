use std::process::Command;

use serde_json::{json, Value};
use smooth_dual_cli::{run, EXIT_FAILURE, EXIT_LIMIT, EXIT_OK, EXIT_VALIDATION};

fn call(args: &[&str]) -> (i32, Value) {
    let argv = std::iter::once("smooth-dual").chain(args.iter().copied());
    let (code, out) = run(argv.map(std::ffi::OsString::from));
    let value =
        serde_json::from_str(&out).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {out}"));
    (code, value)
}

const GL3: &str = r#"{"blocks":[{"label":"a","exponent":3}]}"#;

#[test]
fn hp_reports_equal_parities() {
    let (code, v) = call(&["hp", "--component", GL3]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v, json!({"hp0": 4, "hp1": 4, "lemma22": 4}));
}

#[test]
fn strata_shapes_for_two_and_three() {
    for (c, shapes) in [
        ("(2)", json!([[2], [1]])),
        ("(3)", json!([[3], [1, 1], [1]])),
    ] {
        let (code, v) = call(&["strata", "--component", c]);
        assert_eq!(code, EXIT_OK);
        let got: Vec<Value> = v["strata"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| s["shape"].clone())
            .collect();
        assert_eq!(Value::Array(got), shapes);
    }
}

#[test]
fn orbits_count_matches_strata() {
    let (_, o) = call(&["orbits", "--component", "(2,2)"]);
    let (_, s) = call(&["strata", "--component", "(2,2)"]);
    assert_eq!(o["orbits"].as_array().unwrap().len(), 4);
    assert_eq!(s["strata"].as_array().unwrap().len(), 4);
}

#[test]
fn fiber_of_gl3_string_has_four_points() {
    let (code, v) = call(&["fiber", "--component", "(3)", "--point", "{q^-1,1,q}"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["count"], 4);

    let json_point = r#"{"blocks":[[{"q_exp":"-1/1","turn":"0/1"},{"q_exp":"0/1","turn":"0/1"},{"q_exp":"1/1","turn":"0/1"}]]}"#;
    let (code, w) = call(&["fiber", "--component", GL3, "--point", json_point]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["fiber"], w["fiber"]);
}

#[test]
fn project_then_numeric_specialization() {
    let point = r#"{"cycle_type":[[2]],"coords":["1"]}"#;
    let (code, v) = call(&["project", "--point", point]);
    assert_eq!(code, EXIT_OK);
    let block = &v["point"]["blocks"][0];
    assert_eq!(block[0]["q_exp"], "-1/2");
    assert_eq!(block[1]["q_exp"], "1/2");

    let (code, v) = call(&["project", "--point", point, "--q", "4"]);
    assert_eq!(code, EXIT_OK);
    let text = v.to_string();
    assert!(text.contains("0.5") && text.contains("2.0"), "{text}");
}

#[test]
fn temper_and_homotopy() {
    let point = r#"{"cycle_type":[[2,1]],"coords":["q^1/2","q^-1*e(1/4)"]}"#;
    let (code, v) = call(&["temper", "--point", point]);
    assert_eq!(code, EXIT_OK);
    for c in v["point"]["coords"].as_array().unwrap() {
        assert_eq!(c["q_exp"], "0/1");
    }
    let (code, v) = call(&["homotopy", "--t", "1/2", "--point", point]);
    assert_eq!(code, EXIT_OK);
    let exps: Vec<&str> = v["point"]["coords"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["q_exp"].as_str().unwrap())
        .collect();
    assert!(exps.contains(&"1/4") && exps.contains(&"-1/2"), "{exps:?}");

    let (code, _) = call(&["homotopy", "--t", "3/2", "--point", point]);
    assert_eq!(code, EXIT_VALIDATION);
}

#[test]
fn symcoords_both_directions() {
    let (code, v) = call(&[
        "symcoords",
        "--n",
        "2",
        "--points",
        r#"[{"re":1},{"re":2}]"#,
    ]);
    assert_eq!(code, EXIT_OK);
    let sigma = v["sigma"].as_array().unwrap();
    assert_eq!(sigma[0]["re"], 3.0);
    assert_eq!(sigma[1]["re"], 2.0);

    let (code, v) = call(&["symcoords", "--n", "2", "--sigma", r#"[{"re":3},{"re":2}]"#]);
    assert_eq!(code, EXIT_OK);
    let mut roots: Vec<f64> = v["roots"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["re"].as_f64().unwrap())
        .collect();
    roots.sort_by(f64::total_cmp);
    assert!((roots[0] - 1.0).abs() < 1e-12 && (roots[1] - 2.0).abs() < 1e-12);

    let (code, _) = call(&["symcoords", "--n", "3", "--sigma", r#"[{"re":3},{"re":2}]"#]);
    assert_eq!(code, EXIT_VALIDATION);
}

#[test]
fn malformed_input_is_a_validation_error() {
    let (code, v) = call(&["hp", "--component", "{not json"]);
    assert_eq!(code, EXIT_VALIDATION);
    assert!(v["error"]["message"].is_string());
    assert!(v["error"]["kind"].is_string());

    let (code, _) = call(&["hp", "--component", r#"{"blocks":[]}"#]);
    assert_eq!(code, EXIT_VALIDATION);
    let (code, _) = call(&["fiber", "--component", "(3)", "--point", "{1,q}"]);
    assert_eq!(code, EXIT_VALIDATION);
    let (code, v) = call(&["no-such-verb"]);
    assert_eq!(code, EXIT_VALIDATION);
    assert!(v.get("error").is_some());
}

#[test]
fn oversized_component_is_refused() {
    let (code, v) = call(&["hp", "--component", "(21)"]);
    assert_eq!(code, EXIT_LIMIT);
    assert!(v["error"].is_object());
    let (code, _) = call(&[
        "fiber",
        "--component",
        "(13)",
        "--point",
        "{1,1,1,1,1,1,1,1,1,1,1,1,1}",
    ]);
    assert_eq!(code, EXIT_LIMIT);
    let (code, _) = call(&["hp", "--component", "(21)", "--limit", "21"]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn help_is_json() {
    let (code, v) = call(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(v["help"].as_str().unwrap().contains("fiber"));
}

#[test]
fn verify_passes() {
    let (code, v) = call(&["verify"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 8);
    assert_ne!(code, EXIT_FAILURE);
}

#[test]
fn binary_output_is_byte_identical_across_runs() {
    let bin = env!("CARGO_BIN_EXE_smooth-dual");
    let args = [
        "fiber",
        "--component",
        "(2,2)",
        "--point",
        "{1,q};{q^1/2,q^1/2}",
    ];
    let first = Command::new(bin).args(args).output().unwrap();
    let second = Command::new(bin).args(args).output().unwrap();
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let verify1 = Command::new(bin).arg("verify").output().unwrap();
    let verify2 = Command::new(bin).arg("verify").output().unwrap();
    assert_eq!(verify1.stdout, verify2.stdout);
    assert!(String::from_utf8_lossy(&verify1.stderr).contains("PASS"));
}
