use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn models() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

fn model(name: &str) -> String {
    models().join(name).to_string_lossy().into_owned()
}

fn uconf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uconf"))
        .args(args)
        .env_remove("UCONF_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn result_map(v: &Value) -> Vec<(Vec<String>, String)> {
    v["result"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            let config = e["config"].as_array().unwrap().iter().map(|p| p.as_str().unwrap().to_string()).collect();
            (config, e["element"].as_str().unwrap().to_string())
        })
        .collect()
}

#[test]
fn dims_on_bundled_model() {
    for k in 0..=3 {
        let out = uconf(&["dims", "--k", &k.to_string()]);
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        let fact: u64 = (1..=k as u64).product();
        assert_eq!(v["T"], fact);
        assert_eq!(v["TboxT"], (k as u64 + 1) * fact);
        assert_eq!(v["ok"], true);
    }
}

#[test]
fn delta_bracket_is_constant() {
    let out = uconf(&["bracket", "--model", &model("m3.json"), "--lhs", &model("delta_p.json"), "--rhs", &model("delta_q.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(result_map(&v), vec![(vec!["p".to_string(), "q".to_string()], "1[p] # 1[q]".to_string())]);
    assert_eq!(v["dropped"].as_array().unwrap().len(), 0);

    let out = uconf(&["bracket", "--lhs", &model("delta_q.json"), "--rhs", &model("delta_p.json")]);
    assert_eq!(result_map(&json(&out)), vec![(vec!["p".to_string(), "q".to_string()], "-1 * 1[p] # 1[q]".to_string())]);
}

#[test]
fn unit_is_neutral_for_convolution() {
    let q = model("quadratic.json");
    let direct = uconf(&["convolve", "--lhs", &q, "--rhs", &model("unit.json")]);
    let flipped = uconf(&["convolve", "--lhs", &model("unit.json"), "--rhs", &q]);
    assert_eq!(direct.status.code(), Some(0));
    let original: Value = serde_json::from_str(&std::fs::read_to_string(models().join("quadratic.json")).unwrap()).unwrap();
    assert_eq!(json(&direct)["result"], original);
    assert_eq!(json(&flipped)["result"], original);
}

#[test]
fn eval_functionals() {
    let out = uconf(&["eval", "--lhs", &model("unit.json"), "--field", &model("field.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"], "1");
    let out = uconf(&["eval", "--lhs", &model("quadratic.json"), "--field", &model("field.json")]);
    assert_eq!(json(&out)["value"], "13/4");
}

#[test]
fn peierls_check_agrees() {
    let out = uconf(&[
        "peierls-check",
        "--lhs",
        &model("quadratic.json"),
        "--rhs",
        &model("delta_q.json"),
        "--field",
        &model("field.json"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["equal"], true);
    assert_eq!(v["symbolic"], "2 * phi[p,0]");
    assert_eq!(v["values"]["symbolic"], "4");
}

#[test]
fn axioms_are_deterministic() {
    let args = ["axioms", "--seed", "11", "--cases", "4", "--max-points", "2", "--max-degree", "2"];
    let a = uconf(&args);
    let b = uconf(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["passed"], true);
    assert!(v["laws"].as_array().unwrap().len() > 20);
}

#[test]
fn seed_from_environment() {
    let run = |seed: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_uconf"));
        cmd.args(["axioms", "--seed", "1", "--cases", "2", "--max-points", "2", "--max-degree", "1"]);
        match seed {
            Some(s) => cmd.env("UCONF_SEED", s),
            None => cmd.env_remove("UCONF_SEED"),
        };
        cmd.output().unwrap()
    };
    assert_eq!(json(&run(Some("7")))["seed"], 7);
    assert_eq!(json(&run(None))["seed"], 1);
    let bad = run(Some("seven"));
    assert_eq!(bad.status.code(), Some(2));
    assert!(json(&bad)["error"].is_string());
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let corrupt = dir.path().join("corrupt.json");
    std::fs::write(
        &corrupt,
        r#"{"points":[{"id":"p","rank":1},{"id":"q","rank":1}],"kernel":[{"x":"p","i":0,"y":"p","j":0,"value":"1"}]}"#,
    )
    .unwrap();
    let out = uconf(&["dims", "--model", corrupt.to_str().unwrap(), "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["error"].as_str().unwrap().contains("corrupt.json"));
    assert!(!out.stderr.is_empty());

    let section = dir.path().join("bad.json");
    std::fs::write(&section, r#"[{"config":["p"],"element":"e[p,0] +"}]"#).unwrap();
    let out = uconf(&["eval", "--lhs", section.to_str().unwrap(), "--field", &model("field.json")]);
    assert_eq!(out.status.code(), Some(2));

    let out = uconf(&["eval", "--lhs", &model("unit.json"), "--field", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
