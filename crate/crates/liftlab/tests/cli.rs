use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_liftlab"));
    cmd.env_remove("LIFTLAB_SEED");
    cmd
}

fn scenarios() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run_json(args: &[&str], scenario: &Path, dir: &Path) -> (Output, Value) {
    let out_path = dir.join("report.json");
    let _ = std::fs::remove_file(&out_path);
    let output = bin()
        .arg("run")
        .arg(scenario)
        .arg("--json")
        .arg(&out_path)
        .args(args)
        .output()
        .unwrap();
    let json = std::fs::read_to_string(&out_path)
        .map(|s| serde_json::from_str(&s).unwrap())
        .unwrap_or(Value::Null);
    (output, json)
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn analytic_plane_passes() {
    let dir = tempfile::tempdir().unwrap();
    let (out, report) = run_json(&[], &scenarios().join("analytic_plane.json"), dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(report["passed"], Value::Bool(true));
    let ids: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert_eq!(
        ids,
        ["purity", "tachibana_zero", "nijenhuis_zero", "theorem1"]
    );
    assert_eq!(report["engine"]["seed"], 42);
    assert_eq!(report["engine"]["points"], 64);
}

#[test]
fn product_section_fails_with_unit_residual() {
    let dir = tempfile::tempdir().unwrap();
    let (out, report) = run_json(&[], &scenarios().join("flat_product.json"), dir.path());
    assert_eq!(out.status.code(), Some(1));
    let check = &report["checks"][1];
    assert_eq!(check["id"], "totally_geodesic");
    assert_eq!(check["status"], "fail");
    assert_eq!(check["residual"].as_f64(), Some(1.0));
    assert_eq!(check["details"]["min_over_points"].as_f64(), Some(1.0));
    assert_eq!(check["witness"].as_array().unwrap().len(), 2);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("totally_geodesic   fail"), "{text}");
}

#[test]
fn missing_phi_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "s.json",
        r#"{"name": "m", "n": 2, "q": 1, "xi": {"1": "x1"}, "checks": ["theorem1"]}"#,
    );
    let out = bin().arg("run").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("check `theorem1` requires field `phi`"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn parse_errors_report_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "s.json",
        "{\n  \"name\": \"p\",\n  \"n\": 2\n  \"q\": 1\n}\n",
    );
    let out = bin().arg("run").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("line 4, column 3"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn bad_expression_names_field_and_entry() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "s.json",
        r#"{"name": "e", "n": 2, "q": 1, "phi": "standard_complex_r2", "xi": {"2": "x3"}, "checks": ["purity"]}"#,
    );
    let out = bin().arg("run").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("field `xi`, entry \"2\""),
        "{}",
        stderr(&out)
    );
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(bin().output().unwrap().status.code(), Some(2));
    assert_eq!(
        bin()
            .args(["explain", "nope"])
            .output()
            .unwrap()
            .status
            .code(),
        Some(2)
    );
    let missing = bin()
        .args(["run", "/nonexistent/scenario.json"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));
    let scenario = scenarios().join("analytic_plane.json");
    let bad = bin()
        .arg("run")
        .arg(&scenario)
        .args(["--points", "0"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn singular_fields_exhaust_the_sampler() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "s.json",
        r#"{"name": "s", "n": 2, "q": 1, "phi": "standard_complex_r2", "xi": {"1": "1/(x1 - x1)"},
            "checks": ["purity"]}"#,
    );
    let out = bin().arg("run").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("sampl"), "{}", stderr(&out));
}

#[test]
fn seed_sources_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = scenarios().join("flat_product.json");
    let seed_of = |args: &[&str], env: Option<&str>| {
        let out_path = dir.path().join("seed.json");
        let mut cmd = bin();
        cmd.arg("run")
            .arg(&scenario)
            .arg("--json")
            .arg(&out_path)
            .args(args);
        if let Some(e) = env {
            cmd.env("LIFTLAB_SEED", e);
        }
        cmd.output().unwrap();
        let report: Value =
            serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
        report["engine"]["seed"].as_u64().unwrap()
    };
    assert_eq!(seed_of(&[], None), 42);
    assert_eq!(seed_of(&[], Some("11")), 11);
    assert_eq!(seed_of(&["--seed", "5"], Some("11")), 5);

    let pinned = write(
        dir.path(),
        "pinned.json",
        r#"{"name": "p", "n": 2, "q": 2, "gamma": "flat", "xi": {"1,2": "x1*x2"},
            "sample": {"seed": 8, "count": 4}, "checks": ["totally_geodesic"]}"#,
    );
    let out_path = dir.path().join("pinned_report.json");
    bin()
        .arg("run")
        .arg(&pinned)
        .arg("--json")
        .arg(&out_path)
        .env("LIFTLAB_SEED", "11")
        .output()
        .unwrap();
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["engine"]["seed"], 8);
    assert_eq!(report["engine"]["points"], 4);
}

#[test]
fn tolerance_flag_changes_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let (out, report) = run_json(
        &["--tol", "2"],
        &scenarios().join("flat_product.json"),
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report["checks"][1]["tolerance"].as_f64(), Some(2.0));
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["sphere_generic.json", "analytic_quadratic.json"] {
        let scenario = scenarios().join(name);
        let a = dir.path().join("a.json");
        let b = dir.path().join("b.json");
        for out in [&a, &b] {
            bin()
                .arg("run")
                .arg(&scenario)
                .arg("--json")
                .arg(out)
                .output()
                .unwrap();
        }
        assert_eq!(
            std::fs::read(&a).unwrap(),
            std::fs::read(&b).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn presets_and_explain() {
    let out = bin().arg("presets").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["standard_complex_r2", "sphere_chart", "flat"] {
        assert!(text.contains(name), "{text}");
    }
    for id in liftlab::CheckId::ALL {
        let out = bin().args(["explain", id.as_str()]).output().unwrap();
        assert_eq!(out.status.code(), Some(0));
        assert!(String::from_utf8(out.stdout)
            .unwrap()
            .starts_with(id.as_str()));
    }
}

#[test]
fn shipped_scenarios_have_expected_outcomes() {
    let expected = [
        ("analytic_plane.json", 0),
        ("analytic_quadratic.json", 0),
        ("non_analytic_plane.json", 1),
        ("flat_affine.json", 0),
        ("flat_product.json", 1),
        ("sphere_metric.json", 0),
        ("sphere_generic.json", 1),
    ];
    for (name, code) in expected {
        let out = bin()
            .arg("run")
            .arg(scenarios().join(name))
            .output()
            .unwrap();
        assert_eq!(
            out.status.code(),
            Some(code),
            "{name}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
    }
}
