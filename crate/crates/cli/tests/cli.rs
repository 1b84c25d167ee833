use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

use irrcert_core::BigRat;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::Value;

fn schema() -> &'static jsonschema::Validator {
    static V: OnceLock<jsonschema::Validator> = OnceLock::new();
    V.get_or_init(|| {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
        let s: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        jsonschema::validator_for(&s).unwrap()
    })
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("irrcert-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_irrcert")).args(args).output().unwrap()
}

/// Runs with `--json -`, validates the report against the schema, returns it with the exit code.
fn report(args: &[&str]) -> (Value, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_irrcert")).args(args).args(["--json", "-"]).output().unwrap();
    let code = out.status.code().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(&text)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\n{text}\n{}", String::from_utf8_lossy(&out.stderr)));
    let errors: Vec<String> = schema().iter_errors(&v).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{args:?}: {errors:#?}");
    assert_eq!(v["summary"]["exit_code"], code);
    (v, code)
}

fn of_kind<'a>(v: &'a Value, kind: &str) -> Vec<&'a Value> {
    v["results"].as_array().unwrap().iter().filter(|r| r["result"] == kind).collect()
}

#[test]
fn check_alg_indep_on_factorial_powers() {
    let cfg = scratch(
        "thm2.json",
        r#"{"family": {"name": "ex-thm2-nk", "params": {"a": "3^(n!)"}}, "horizon": 12, "presets": ["thm-alg-indep"]}"#,
    );
    let (v, code) = report(&["check", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0);
    let checks = of_kind(&v, "check");
    assert_eq!(checks.len(), 1);
    assert!(checks[0]["checks"].as_array().unwrap().iter().all(|c| c["status"] == "WITNESSED"));
    assert_eq!(v["summary"]["presets"]["thm-alg-indep"], "WITNESSED");
}

#[test]
fn config_errors_exit_with_65() {
    let missing_d =
        scratch("general.json", r#"{"family": {"name": "ex-thm2-nk"}, "horizon": 12, "presets": ["thm-general"]}"#);
    let out = run(&["check", "--config", missing_d.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(65));
    assert!(String::from_utf8_lossy(&out.stderr).contains("hypothesis.d"));

    let even = scratch("even.json", r#"{"family": {"name": "ex-thm2-nk", "params": {"a": "2*n"}}, "horizon": 8}"#);
    let out = run(&["check", "--config", even.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(65));
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd"));

    let typo = scratch("typo.json", "{\"family\": {\"name\": \"erdos\"},\n \"horizon\": 8, \"horizn\": 3}");
    let out = run(&["check", "--config", typo.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(65));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn usage_errors_exit_with_64() {
    assert_eq!(run(&[]).status.code(), Some(64));
    assert_eq!(run(&["check"]).status.code(), Some(64));
    assert_eq!(run(&["genus"]).status.code(), Some(64));
    assert_eq!(run(&["check", "--window", "3"]).status.code(), Some(64));
}

/// `Σ_{n ≤ N} 2^{−2^n}` summed directly.
fn doubly_exponential_sum(n: u32) -> BigRat {
    (1..=n).map(|i| BigRat::new(BigInt::one(), BigInt::one() << (1u32 << i))).sum()
}

#[test]
fn certify_linear_polynomial_on_doubly_exponential_series() {
    let cfg = scratch(
        "dexp.json",
        r#"{"family": {"name": "erdos", "params": {"a": "2^(2^n)"}}, "horizon": 8, "certify_range": [4, 8], "polynomials": ["x1 - 1"]}"#,
    );
    let (v, code) = report(&["certify", "--config", cfg.to_str().unwrap(), "--jobs", "3"]);
    assert_eq!(code, 0);
    let certs = of_kind(&v, "certificate");
    assert_eq!(certs.len(), 5);
    for (c, n) in certs.iter().zip(4u32..) {
        assert_eq!(c["n"], n);
        assert_eq!(c["verdict"], "NONVANISHING_CERTIFIED");
        let value = doubly_exponential_sum(n) - BigRat::one();
        assert!(!value.is_zero());
        assert_eq!(c["crosscheck"]["value"], value.to_string());
    }
}

#[test]
fn certify_rejects_degree_above_d_and_gates_high_degree_pairs() {
    let cfg = scratch(
        "dexp2.json",
        r#"{"family": {"name": "erdos", "params": {"a": "2^(2^n)"}}, "horizon": 8, "polynomials": ["x1^2 - 2"]}"#,
    );
    assert_eq!(run(&["certify", "--config", cfg.to_str().unwrap()]).status.code(), Some(65));

    let pair = scratch(
        "pair.json",
        r#"{"family": {"name": "ex-inf-k2"}, "horizon": 8, "certify_range": [6, 7], "hypothesis": {"d": 5},
            "polynomials": ["x1^5 + x2^5 - 1", "x1*x2 - 1"]}"#,
    );
    let (v, code) = report(&["certify", "--config", pair.to_str().unwrap()]);
    assert_eq!(code, 0);
    let results = v["results"].as_array().unwrap();
    assert_eq!(results[0]["result"], "gate");
    assert_eq!(results[0]["verdict"], "GENUS_GATE_PASS");
    assert_eq!(of_kind(&v, "certificate").len(), 2);
}

#[test]
fn inconclusive_and_falsified_exit_codes() {
    let odd = scratch(
        "odd.json",
        r#"{"family": {"name": "erdos", "params": {"a": "3^n"}}, "horizon": 8, "polynomials": ["x1 - 1"]}"#,
    );
    let (v, code) = report(&["certify", "--config", odd.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(!of_kind(&v, "certificate_error").is_empty());

    let flat = scratch("flat.json", r#"{"family": {"name": "erdos", "params": {"a": "6"}}, "horizon": 8}"#);
    let (v, code) = report(&["check", "--config", flat.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["summary"]["verdict"], "FAIL");
}

#[test]
fn genus_golden_examples() {
    let (v, code) = report(&["genus", "--poly", "x1^4 + x2^4 - 1", "--poly", "x2^2 - x1^2 - x1^3", "--poly", "x1"]);
    assert_eq!(code, 0);
    let curves = of_kind(&v, "curve");
    assert_eq!(curves[0]["genus"], serde_json::json!({"kind": "exact", "value": 3}));
    assert_eq!(curves[0]["smooth"], true);
    assert_eq!(curves[1]["genus"], serde_json::json!({"kind": "exact", "value": 0}));
    let nodes = curves[1]["singular_points"].as_array().unwrap();
    assert_eq!(nodes.len(), 1);
    assert_eq!(nodes[0]["ordinary"], "ORDINARY");
    assert_eq!(curves[2]["genus"]["value"], 0);
}

#[test]
fn examples_pipeline() {
    let (v, code) = report(&["examples", "ex-p-irr", "--horizon", "10", "--height", "10"]);
    assert_eq!(code, 0);
    assert_eq!(v["summary"]["presets"]["thm-p-irrational"], "WITNESSED");
    let scan = of_kind(&v, "scan");
    assert_eq!(scan[0]["certified"], scan[0]["total"]);

    let (v, code) = report(&["examples", "zeta5", "--horizon", "10"]);
    assert_eq!(code, 0);
    assert_eq!(v["summary"]["presets"]["thm-general"], "WITNESSED");

    // g(n)^{1/2^n} = 3 stays bounded, so the growth hypothesis cannot be witnessed.
    let slow = scratch("zeta5.json", r#"{"family": {"name": "zeta5", "params": {"a": "3^(2^n)"}}, "horizon": 10}"#);
    let (v, code) = report(&["examples", "zeta5", "--horizon", "10", "--config", slow.to_str().unwrap()]);
    assert_eq!(code, 1);
    let check = &of_kind(&v, "check")[0]["checks"];
    let limsup = check.as_array().unwrap().iter().find(|c| c["condition"] == "envelope-limsup").unwrap();
    assert_eq!(limsup["status"], "UNKNOWN");

    let out = run(&["examples", "nope", "--horizon", "10"]);
    assert_eq!(out.status.code(), Some(65));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("ex-p-irr") && err.contains("zeta5"), "{err}");
}

#[test]
fn zstat_and_tails_reports() {
    let cfg = scratch(
        "fact.json",
        r#"{"family": {"name": "erdos", "params": {"a": "2^(n!)"}}, "horizon": 10, "window": [4, 10]}"#,
    );
    let (v, code) = report(&["zstat", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0);
    let z = of_kind(&v, "z_statistic");
    assert_eq!(z.len(), 7);
    let last = z.last().unwrap()["log2_approx"].as_f64().unwrap();
    assert!(last < -1.0e6);

    let (v, code) = report(&["tails", "--config", cfg.to_str().unwrap(), "--window", "4:6"]);
    assert_eq!(code, 0);
    assert_eq!(of_kind(&v, "tail").len(), 3);
}

#[test]
fn json_file_matches_stdout() {
    let path = scratch("out.json", "");
    let out = run(&["genus", "--poly", "x1^3 + x2^3 - 1", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("genus 1"));
    let written = std::fs::read(&path).unwrap();
    let piped = run(&["genus", "--poly", "x1^3 + x2^3 - 1", "--json", "-"]).stdout;
    assert_eq!(written, piped);
}

#[test]
fn schema_rejects_malformed_reports() {
    let (mut v, _) = report(&["genus", "--poly", "x1"]);
    v["results"][0]["result"] = "mystery".into();
    assert!(!schema().is_valid(&v));
    let (mut v, _) = report(&["genus", "--poly", "x1"]);
    v.as_object_mut().unwrap().remove("summary");
    assert!(!schema().is_valid(&v));
}
