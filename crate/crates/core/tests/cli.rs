use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn nlcs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nlcs"))
        .args(args)
        .output()
        .expect("spawn nlcs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).expect("valid JSON")
}

fn build_to(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name).to_string_lossy().into_owned();
    let mut full = vec!["build"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &path]);
    let out = nlcs(&full);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn build_nbs_writes_unit_norm_vector() {
    let dir = tempfile::tempdir().unwrap();
    let path = build_to(
        dir.path(),
        "s.json",
        &["--family", "nbs", "--eta", "0.3", "--M", "4"],
    );
    let v = json(&std::fs::read(&path).unwrap());
    let amp = v["amp"].as_array().unwrap();
    assert_eq!(v["dim"].as_u64().unwrap() as usize, amp.len());
    let norm: f64 = amp
        .iter()
        .map(|z| {
            let (re, im) = (z[0].as_f64().unwrap(), z[1].as_f64().unwrap());
            re * re + im * im
        })
        .sum();
    assert!((norm - 1.0).abs() < 1e-12);
    // ⟨0|η,M⟩ = (1−η)^{M/2}
    assert!((amp[0][0].as_f64().unwrap() - 0.49).abs() < 1e-15);
}

#[test]
fn build_coherent_zero_is_vacuum() {
    let out = nlcs(&["build", "--family", "coherent", "--alpha", "0"]);
    assert_eq!(code(&out), 0);
    let v = json(&out.stdout);
    let amp = v["amp"].as_array().unwrap();
    assert_eq!(amp[0][0].as_f64(), Some(1.0));
    assert!(amp[1..]
        .iter()
        .all(|z| z[0].as_f64() == Some(0.0) && z[1].as_f64() == Some(0.0)));
}

#[test]
fn build_rejects_bad_parameters() {
    let out = nlcs(&["build", "--family", "binomial", "--eta", "1.0", "--M", "2"]);
    assert_eq!(code(&out), 2);
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());

    assert_eq!(
        code(&nlcs(&["build", "--family", "nbs", "--eta", "0.3"])),
        2
    );
    assert_eq!(code(&nlcs(&["build", "--spec", "{not json"])), 2);
    assert_eq!(
        code(&nlcs(&[
            "build", "--family", "nbs", "--eta", "0.3", "--M", "0"
        ])),
        2
    );
}

#[test]
fn build_truncation_failure_exits_3() {
    let out = nlcs(&[
        "build", "--family", "coherent", "--alpha", "5", "--dim", "8",
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn build_from_inline_and_file_spec() {
    let spec = r#"{"family":"negative_binomial","params":{"eta":0.3,"M":4}}"#;
    let inline = nlcs(&["build", "--spec", spec]);
    assert_eq!(code(&inline), 0);
    let flags = nlcs(&["build", "--family", "nbs", "--eta", "0.3", "--M", "4"]);
    assert_eq!(inline.stdout, flags.stdout);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spec.json");
    std::fs::write(&path, spec).unwrap();
    let from_file = nlcs(&["build", "--spec", path.to_str().unwrap()]);
    assert_eq!(from_file.stdout, flags.stdout);
}

#[test]
fn stats_examples() {
    let dir = tempfile::tempdir().unwrap();

    let five = build_to(
        dir.path(),
        "five.json",
        &["--family", "excited", "--alpha", "0", "--m", "5"],
    );
    let s = json(&nlcs(&["stats", &five]).stdout);
    assert!((s["mean"].as_f64().unwrap() - 5.0).abs() < 1e-12);
    assert!(s["variance"].as_f64().unwrap().abs() < 1e-12);
    assert!((s["mandel_q"].as_f64().unwrap() + 1.0).abs() < 1e-12);

    let nbs = build_to(
        dir.path(),
        "nbs.json",
        &["--family", "nbs", "--eta", "0.3", "--M", "4"],
    );
    let s = json(&nlcs(&["stats", &nbs]).stdout);
    assert!((s["mandel_q"].as_f64().unwrap() - 0.3 / 0.7).abs() < 1e-6);

    let vac = build_to(
        dir.path(),
        "vac.json",
        &["--family", "coherent", "--alpha", "0"],
    );
    let s = json(&nlcs(&["stats", &vac]).stdout);
    assert!(s["mandel_q"].is_null());
}

#[test]
fn stats_rejects_malformed_files() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"dim\": 3, \"amp\": [[1, 0]], \"spill\": 0}").unwrap();
    assert_eq!(code(&nlcs(&["stats", bad.to_str().unwrap()])), 2);
    std::fs::write(&bad, "garbage").unwrap();
    assert_eq!(code(&nlcs(&["stats", bad.to_str().unwrap()])), 2);
    assert_eq!(
        code(&nlcs(&[
            "stats",
            dir.path().join("missing.json").to_str().unwrap()
        ])),
        2
    );
}

#[test]
fn check_all_passes_with_seed() {
    let out = nlcs(&["check", "all", "--seed", "7"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out.stdout);
    let total = r["summary"]["total"].as_u64().unwrap();
    assert!(total > 0);
    assert_eq!(r["summary"]["passed"].as_u64().unwrap(), total);
    assert_eq!(r["summary"]["failed"].as_u64().unwrap(), 0);
    assert_eq!(r["config"]["seed"].as_u64(), Some(7));

    let checks = r["checks"].as_array().unwrap();
    let names: Vec<&str> = checks.iter().map(|c| c["name"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    for c in checks {
        let passed = c["value"].as_f64().unwrap() <= c["tolerance"].as_f64().unwrap();
        assert_eq!(c["passed"].as_bool(), Some(passed));
        assert!(!c["paper_eq"].as_str().unwrap().is_empty());
    }
}

#[test]
fn check_binomial_reports_expected_negative_witness() {
    let out = nlcs(&[
        "check", "eigen", "--family", "binomial", "--eta", "0.3", "--M", "4",
    ]);
    assert_eq!(code(&out), 0);
    let r = json(&out.stdout);
    let witness = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["kind"] == "expected_negative")
        .expect("witness check");
    assert_eq!(witness["passed"].as_bool(), Some(true));
    assert!((witness["witness_bound"].as_f64().unwrap() - 0.09).abs() < 1e-12);
}

#[test]
fn check_identities_within_tolerance() {
    let out = nlcs(&["check", "identities", "--dim", "64"]);
    assert_eq!(code(&out), 0);
    let r = json(&out.stdout);
    for c in r["checks"].as_array().unwrap() {
        let name = c["name"].as_str().unwrap();
        if name.contains("push_through")
            || name.contains("power_expansion")
            || name.contains("commutator")
        {
            assert!(c["value"].as_f64().unwrap() <= 1e-12, "{name}");
        }
    }
}

#[test]
fn check_config_errors_exit_2() {
    assert_eq!(code(&nlcs(&["check", "bogus"])), 2);
    assert_eq!(code(&nlcs(&["check", "eigen", "--eta", "1.5"])), 2);
    assert_eq!(code(&nlcs(&["check", "eigen", "--M", "0"])), 2);
    assert_eq!(code(&nlcs(&["check", "eigen", "--family", "nope"])), 2);
}

#[test]
fn check_reports_are_deterministic_except_timestamp() {
    let strip = |out: Output| {
        let mut v = json(&out.stdout);
        v.as_object_mut()
            .unwrap()
            .remove("timestamp")
            .expect("timestamp field");
        serde_json::to_string(&v).unwrap()
    };
    let a = strip(nlcs(&["check", "excitation", "--seed", "11"]));
    let b = strip(nlcs(&["check", "excitation", "--seed", "11"]));
    assert_eq!(a, b);
    let other = strip(nlcs(&["check", "excitation", "--seed", "12"]));
    assert_ne!(a, other);
}

#[test]
fn check_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = nlcs(&["check", "equivalence", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let r = json(&std::fs::read(&path).unwrap());
    assert_eq!(r["suite"], "equivalence");
}
