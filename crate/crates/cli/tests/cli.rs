use std::path::Path;
use std::process::Command;

use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn records(&self) -> Vec<Value> {
        self.stdout.lines().map(|l| serde_json::from_str(l).expect("json line")).collect()
    }

    fn record(&self) -> Value {
        let mut r = self.records();
        assert_eq!(r.len(), 1, "{}", self.stdout);
        r.remove(0)
    }
}

fn run_with(args: &[&str], cache_env: Option<&Path>) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_zeta-alpha"));
    cmd.args(args).env_remove("ZETA_ALPHA_CACHE");
    if let Some(p) = cache_env {
        cmd.env("ZETA_ALPHA_CACHE", p);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn run(args: &[&str]) -> Run {
    run_with(args, None)
}

fn num(v: &Value, key: &str) -> f64 {
    match &v[key] {
        Value::String(s) => s.parse().unwrap(),
        other => other.as_f64().unwrap_or_else(|| panic!("{key} missing in {v}")),
    }
}

#[test]
fn alpha_exact_form() {
    let r = run(&["alpha", "2", "--exact"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.record()["value"], "(s-1)*(1/8*s + 1/12)");
    assert_eq!(run(&["--format", "plain", "alpha", "0"]).stdout, "1\n");
    assert_eq!(run(&["--format", "plain", "alpha", "1"]).stdout, "(s-1)*(1/2)\n");
}

#[test]
fn alpha_prime_and_point_values() {
    assert_eq!(run(&["alpha", "12", "--prime"]).record()["value"], "703604254357/31384184832000");
    assert_eq!(run(&["alpha", "2", "--at", "-2"]).record()["value"], "1/2");
    // worked by hand from the factored forms of α_2 and α_3
    assert_eq!(run(&["alpha", "2", "--at", "1/2,1"]).record()["value"], "-19/96 + 1/12*i");
    assert_eq!(run(&["alpha", "3", "--at", "0.5"]).record()["value"], "-5/128");
}

#[test]
fn exact_outputs_have_no_decimal_point() {
    for args in [
        &["alpha", "9"][..],
        &["alpha", "9", "--prime"],
        &["alpha", "9", "--at", "1.5,-2.25"],
        &["special", "--range", "1", "12"],
    ] {
        let r = run(args);
        assert_eq!(r.code, 0);
        for rec in r.records() {
            assert_eq!(rec["kind"], "exact");
            assert!(!rec.to_string().contains('.'), "{rec}");
        }
    }
}

#[test]
fn flag_errors_exit_two() {
    for args in [
        &["alpha"][..],
        &["alpha", "x"],
        &["alpha", "2", "--at", "abc"],
        &["alpha", "2", "--prime", "--at", "1"],
        &["eval", "nonsense", "--s", "2"],
        &["eval", "gamma"],
        &["eval", "shift-stirling2", "--s", "3"],
        &["eval", "gamma", "--s", "2", "--tol", "-1"],
        &["eval", "gamma", "--s", "2", "--prec", "8"],
        &["eval", "gamma", "--s", "2", "--tol", "1e-60", "--prec", "64"],
        &["special"],
        &["special", "--range", "0", "3"],
        &["special", "--range", "5", "2"],
        &["special", "--lambda", "41"],
        &["verify", "--suite", "nope"],
        &["--format", "xml", "alpha", "1"],
        &["cache", "load"],
    ] {
        let r = run(args);
        assert_eq!(r.code, 2, "{args:?}: {}", r.stderr);
        assert!(r.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn table_limit_exit_three() {
    let r = run(&["--table-limit", "10", "alpha", "11"]);
    assert_eq!(r.code, 3);
    assert_eq!(run(&["--table-limit", "10", "alpha", "10"]).code, 0);
    assert_eq!(run(&["--table-limit", "10", "alpha", "11", "--prime"]).code, 3);
}

#[test]
fn eval_zeta_at_two() {
    let r = run(&["eval", "zeta", "--s", "2", "--tol", "1e-3", "--prec", "128"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rec = r.record();
    let want = std::f64::consts::PI.powi(2) / 6.0;
    assert!(num(&rec, "tail_bound") <= 1e-3);
    assert!((num(&rec, "value") - want).abs() <= 2e-3);
    assert_eq!(rec["certified"], true);
    assert!(rec["terms_used"].as_u64().unwrap() > 0);
}

#[test]
fn eval_pole_exit_five() {
    let r = run(&["eval", "gammazeta", "--s", "1", "--tol", "1e-3"]);
    assert_eq!(r.code, 5);
    assert!(r.stderr.contains("pole"));
    assert_eq!(run(&["eval", "gamma", "--s", "-2"]).code, 5);
    assert_eq!(run(&["eval", "trigamma", "--s", "0"]).code, 5);
}

#[test]
fn eval_budget_exit_four_keeps_certificate_fields() {
    let r = run(&["eval", "gamma", "--s", "7", "--term-cap", "100"]);
    assert_eq!(r.code, 4);
    let rec = r.record();
    assert_eq!(rec["certified"], false);
    assert_eq!(rec["terms_used"], 100);
    assert!(num(&rec, "tail_bound") > 1e-3);
}

#[test]
fn eval_shift_stirling2_at_three() {
    let r = run(&["eval", "shift-stirling2", "--s", "3", "--lambda", "1", "--tol", "1e-3"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rec = r.record();
    assert!((num(&rec, "value") - std::f64::consts::PI.powi(2) / 3.0).abs() <= 2e-3);
    assert_eq!(rec["lambda"], 1);
}

#[test]
fn eval_complex_point_and_formats() {
    let r = run(&["eval", "gamma", "--s", "2,1", "--tol", "1e-2"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rec = r.record();
    // Γ(2+i) = (1+i)Γ(1+i); Γ(1+i) ≈ 0.4980156681 - 0.1549498283i
    assert!((num(&rec, "value") - 0.6529654964).abs() <= 2e-2);
    assert!((num(&rec, "value_im") - 0.3430658398).abs() <= 2e-2);

    let csv = run(&["--format", "csv", "eval", "eulergamma", "--tol", "1e-2"]);
    let lines: Vec<&str> = csv.stdout.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("kind,identity,value,value_im,terms_used,tail_bound"));
    let plain = run(&["--format", "plain", "eval", "eulergamma", "--tol", "1e-2"]);
    let v: f64 = plain.stdout.trim().parse().unwrap();
    assert!((v - 0.5772156649).abs() <= 2e-2);
}

#[test]
fn special_values() {
    let one = run(&["special", "--lambda", "1"]).record();
    assert_eq!(one["value"], "-1/2");
    assert_eq!(one["agree"], true);
    assert_eq!(run(&["special", "--lambda", "2"]).record()["value"], "-1/12");
    let r = run(&["special", "--range", "1", "10"]);
    let recs = r.records();
    assert_eq!(recs.len(), 10);
    assert!(recs.iter().all(|v| v["agree"] == true));
    let lambdas: Vec<u64> = recs.iter().map(|v| v["lambda"].as_u64().unwrap()).collect();
    assert_eq!(lambdas, (1..=10).collect::<Vec<_>>());
    assert_eq!(run(&["special", "--lambda", "50", "--max-lambda", "60"]).code, 0);
}

#[test]
fn verify_structure() {
    let r = run(&["verify", "--suite", "structure", "--kmax", "41"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let recs = r.records();
    assert!(recs.iter().all(|v| v["passed"] == true));
    assert_eq!(recs.last().unwrap()["suite"], "summary");
    let par = run(&["verify", "--suite", "structure", "--kmax", "41", "--parallel"]);
    assert_eq!(par.stdout, r.stdout);
}

#[test]
fn verify_bounds_and_identities() {
    let r = run(&["verify", "--suite", "bounds", "--kmax", "1000", "--parallel"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.records().len(), 6);
    let r = run(&["verify", "--suite", "identities", "--parallel"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let agree = r.records().into_iter().filter(|v| v["check"] == "shift_forms_agree").count();
    assert_eq!(agree, 20);
}

#[test]
fn cache_round_trip_prefix_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("alpha.cache");
    let p = path.to_str().unwrap();

    let saved = run(&["cache", "save", "--path", p, "--kmax", "50"]);
    assert_eq!(saved.code, 0, "{}", saved.stderr);
    let loaded = run(&["cache", "load", "--path", p]);
    assert_eq!(loaded.record()["max_k"], 50);
    assert_eq!(loaded.record()["checksum"], saved.record()["checksum"]);
    assert_eq!(run(&["cache", "load", "--path", p, "--kmax", "30"]).record()["max_k"], 30);
    assert_eq!(run(&["cache", "load", "--path", p, "--kmax", "51"]).code, 3);

    // the cache serves alpha through the environment, with its own limit
    assert_eq!(run_with(&["alpha", "50"], Some(&path)).record()["value"], run(&["alpha", "50"]).record()["value"]);
    assert_eq!(run_with(&["alpha", "51"], Some(&path)).code, 3);
    assert_eq!(run_with(&["cache", "load"], Some(&path)).code, 0);

    let bytes = std::fs::read(&path).unwrap();
    let truncated = dir.path().join("truncated.cache");
    std::fs::write(&truncated, &bytes[..bytes.len() / 2]).unwrap();
    assert_eq!(run(&["cache", "load", "--path", truncated.to_str().unwrap()]).code, 6);
    assert_eq!(run_with(&["alpha", "2"], Some(&truncated)).code, 6);

    let text = String::from_utf8(bytes).unwrap();
    let newer = dir.path().join("newer.cache");
    std::fs::write(&newer, text.replacen(" v1 ", " v2 ", 1)).unwrap();
    let r = run(&["cache", "load", "--path", newer.to_str().unwrap()]);
    assert_eq!(r.code, 6);
    assert!(r.stderr.contains("version"));

    let missing = dir.path().join("missing.cache");
    assert_eq!(run(&["cache", "load", "--path", missing.to_str().unwrap()]).code, 6);
}

#[test]
fn help_exits_zero() {
    let r = run(&["--help"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("verify"));
}
