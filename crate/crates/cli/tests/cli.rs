use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hap(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hap"))
        .args(args)
        .arg("--output-dir")
        .arg(dir)
        .env_remove("HAP_DEFAULT_BITS")
        .output()
        .expect("hap runs")
}

fn ok(dir: &Path, args: &[&str]) {
    let out = hap(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn json(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

fn number(v: &Value) -> f64 {
    v.as_str().expect("numbers are decimal strings").parse().unwrap()
}

#[test]
fn fit_from_csv_writes_coefficients_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("samples.csv");
    fs::write(&input, "x,f\n-1,1\n0,0\n1,1\n2,4\n").unwrap();
    ok(dir.path(), &["fit", "--input", input.to_str().unwrap(), "--precision-bits", "200"]);
    let coeffs = fs::read_to_string(dir.path().join("coefficients.csv")).unwrap();
    let lines: Vec<&str> = coeffs.lines().collect();
    assert_eq!(lines[0], "center,degree");
    assert_eq!(lines[1], "0,3");
    assert_eq!(number(&Value::String(lines[4].into())), 1.0);
    let report = json(dir.path(), "fit.json");
    assert_eq!(report["p_bits"], 200);
    assert_eq!(report["n"], 4);
    assert!(report["max_midpoint_error"].is_null());
    assert!(report["span_observed"].is_null());
    assert_eq!(report["config"]["arguments"]["fit"]["input"], input.to_str().unwrap());
    assert!(dir.path().join("timing.json").exists());
}

#[test]
fn malformed_csv_reports_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.csv");
    fs::write(&input, "x,f\n0,1\n1,oops\n").unwrap();
    let out = hap(dir.path(), &["fit", "--input", input.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn same_flags_give_identical_files() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["fit2d", "--count", "21", "--seed", "7", "--precision-bits", "300"];
    ok(a.path(), &args);
    ok(b.path(), &args);
    for name in ["coefficients.csv", "fit2d.json"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }
    assert_eq!(json(a.path(), "fit2d.json")["config"]["seed"], 7);
}

#[test]
fn precision_falls_back_to_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_hap"))
        .args(["integrate", "--function", "t2", "--n", "5", "--output-dir"])
        .arg(dir.path())
        .env("HAP_DEFAULT_BITS", "96")
        .output()
        .unwrap();
    assert!(out.status.success());
    let report = json(dir.path(), "integrate.json");
    assert_eq!(report["p_bits"], 96);
    // ∫_{-1}^{1} x² = 2/3.
    assert!((number(&report["integral"]) - 2.0 / 3.0).abs() < 1e-15);
}

#[test]
fn extrap_on_sin_reports_both_spans() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["extrap", "--function", "sin", "--n", "41", "--precision-bits", "400"]);
    let report = json(dir.path(), "extrap.json");
    let r = number(&report["r_predicted"]);
    let span = number(&report["span_observed"]);
    assert!(r > 1.0 && span > 1.0);
    let grid = fs::read_to_string(dir.path().join("extrap.csv")).unwrap();
    assert!(grid.starts_with("x,error\n"));
}

#[test]
fn diff_and_interp_carry_errors_for_builtins() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["diff", "--function", "sin", "--n", "31", "--order", "1", "--at", "0", "--precision-bits", "300"]);
    let text = fs::read_to_string(dir.path().join("diff.csv")).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "0");
    assert!((row[1].parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
    ok(dir.path(), &["interp", "--function", "t2", "--n", "5", "--precision-bits", "128"]);
    let text = fs::read_to_string(dir.path().join("interp.csv")).unwrap();
    assert_eq!(text.lines().next(), Some("x,value,error"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn ode_beam_with_explicit_conditions() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        dir.path(),
        &[
            "ode-beam",
            "--n",
            "11",
            "--load",
            "const:0",
            "--bc",
            "0@0=0",
            "--bc",
            "1@0=0",
            "--bc",
            "0@1=1",
            "--bc",
            "1@1=0",
            "--precision-bits",
            "300",
        ],
    );
    let report = json(dir.path(), "residual.json");
    assert!(number(&report["max_trailing_coefficient"]) < 1e-60);
    let coeffs = fs::read_to_string(dir.path().join("coefficients.csv")).unwrap();
    let a: Vec<f64> = coeffs.lines().skip(2).map(|l| l.parse().unwrap()).collect();
    assert!((a[2] - 3.0).abs() < 1e-60 && (a[3] + 2.0).abs() < 1e-60);
}

#[test]
fn ode_beam_rejects_bad_load() {
    let dir = tempfile::tempdir().unwrap();
    let out = hap(dir.path(), &["ode-beam", "--load", "linear:1"]);
    assert!(!out.status.success());
}

#[test]
fn pde_plate_writes_field_shear_and_equilibrium() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["pde-plate", "--divisions", "6", "--dx", "1/5", "--load", "uniform:2", "--precision-bits", "400"]);
    let field = fs::read_to_string(dir.path().join("deflection.csv")).unwrap();
    assert_eq!(field.lines().next(), Some("x,y,w"));
    assert_eq!(field.lines().count(), 1 + 36);
    let shear = fs::read_to_string(dir.path().join("shear.csv")).unwrap();
    assert_eq!(shear.lines().next(), Some("x,y,qx,qy"));
    let report = json(dir.path(), "equilibrium.json");
    // Slab side 1, so the applied force is 2.
    assert!((number(&report["total_load"]) - 2.0).abs() < 1e-12);
    assert!(number(&report["equilibrium_error"]) < 1e-40);
    assert!(report["equilibrium_quadrature"].is_string());
}

#[test]
fn sysid_on_builtin_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["sysid", "--n", "11", "--precision-bits", "400"]);
    let report = json(dir.path(), "sysid.json");
    let b: Vec<f64> = report["b"].as_array().unwrap().iter().map(number).collect();
    assert!(b[0].abs() < 1e-40 && b[1].abs() < 1e-40 && (b[2] - 0.5).abs() < 1e-40);
    assert!(number(&report["t_prime"]) > 1e6);

    let input = dir.path().join("s.csv");
    fs::write(&input, "t,s\n0,0\n0.5,0.25\n1,1\n1.5,2.25\n").unwrap();
    ok(dir.path(), &["sysid", "--input", input.to_str().unwrap(), "--precision-bits", "200"]);
    let report = json(dir.path(), "sysid.json");
    assert!(report["t_prime"].is_null());
}

#[test]
fn table3_has_one_row_per_precision() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["table3", "--precisions", "64,128", "--n", "21"]);
    let text = fs::read_to_string(dir.path().join("table3.csv")).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "p,integral");
    assert!(rows[1].starts_with("64,") && rows[2].starts_with("128,"));
    let timing = json(dir.path(), "timing.json");
    assert_eq!(timing["per_precision"].as_array().unwrap().len(), 2);
}

#[test]
fn table1_columns() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["table1", "--precisions", "200", "--n", "11"]);
    let text = fs::read_to_string(dir.path().join("table1.csv")).unwrap();
    assert_eq!(text.lines().next(), Some("p,det_analytic,det_numeric,det_gap,inverse_gap,coeff_gap,coeff_gap_exact"));
}
