use std::process::{Command, Output};

use dirdist::dist::{sc_pdf, ScParams};
use dirdist::quad::sphere_integral;
use dirdist::UnitVector;

fn dirdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirdist"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Parses CSV output into a header and numeric rows.
fn table(o: &Output) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = stdout(o);
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn wc_samples_are_reproducible() {
    let args = ["sample", "wc", "-n", "3", "--seed", "1", "--params", "lambda=0.5"];
    let a = dirdist(&args);
    let b = dirdist(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let (header, rows) = table(&a);
    assert_eq!(header, ["theta"]);
    assert_eq!(rows.len(), 3);
    let other = dirdist(&["sample", "wc", "-n", "3", "--seed", "2", "--params", "lambda=0.5"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn floats_carry_seventeen_digits() {
    let o = dirdist(&["convert", "lambda", "0.3"]);
    let text = stdout(&o);
    let row = text.lines().nth(1).unwrap();
    for field in row.split(',') {
        let mantissa = field.split('e').next().unwrap().replace(['-', '.'], "");
        assert_eq!(mantissa.len(), 17, "{field}");
    }
}

#[test]
fn bad_parameters_exit_with_two() {
    let o = dirdist(&["sample", "acg", "--params", "q=2", "omega=1,2,2,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    assert_eq!(dirdist(&["sample", "wc", "--params", "lambda=1.5"]).status.code(), Some(2));
    assert_eq!(dirdist(&["sample", "wc"]).status.code(), Some(2));
    assert_eq!(dirdist(&["sample", "nope"]).status.code(), Some(2));
    assert_eq!(dirdist(&["--bogus"]).status.code(), Some(2));
}

#[test]
fn sc_samples_to_file_match_quadrature() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sc.csv");
    let o = dirdist(&[
        "sample", "sc", "-n", "100000", "--seed", "5", "--out", path.to_str().unwrap(), "--params", "lambda=0.5", "mu0=0,0.6,0.8",
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x1,x2,x3"));
    let dots: Vec<f64> = lines
        .map(|l| {
            let x: Vec<f64> = l.split(',').map(|v| v.parse().unwrap()).collect();
            0.6 * x[1] + 0.8 * x[2]
        })
        .collect();
    assert_eq!(dots.len(), 100_000);

    let mu0 = UnitVector::new(vec![0.0, 0.6, 0.8]).unwrap();
    let p = ScParams::new(0.5, mu0.clone()).unwrap();
    let truth = sphere_integral(3, |y| y.dot(&mu0) * sc_pdf(y, &p).unwrap()).unwrap();
    let n = dots.len() as f64;
    let mean = dots.iter().sum::<f64>() / n;
    let var = dots.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0);
    assert!((mean - truth).abs() < 3.0 * (var / n).sqrt(), "mean {mean}, truth {truth}");
}

#[test]
fn density_grids_integrate_to_one() {
    let (_, rows) = table(&dirdist(&["density", "wc", "--grid", "8", "--params", "lambda=0"]));
    assert_eq!(rows.len(), 8);
    for r in &rows {
        assert!((r[1] - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-15);
    }

    let (_, rows) = table(&dirdist(&["density", "acg", "--params", "b=0.5"]));
    assert_eq!(rows.len(), 1024);
    let total: f64 = rows.iter().map(|r| r[1] * r[2]).sum();
    assert!((total - 1.0).abs() < 1e-10);

    let (header, rows) = table(&dirdist(&["density", "sc", "--params", "lambda=0.5", "mu0=0.3,-0.2,0.9"]));
    assert_eq!(header, ["x1", "x2", "x3", "density", "weight"]);
    let total: f64 = rows.iter().map(|r| r[3] * r[4]).sum();
    assert!((total - 1.0).abs() < 1e-6);
}

#[test]
fn density_at_points() {
    let (_, rows) = table(&dirdist(&["density", "mvt", "--params", "location=0", "dof=1", "--at", "0"]));
    assert!((rows[0][1] - 1.0 / std::f64::consts::PI).abs() < 1e-15);
    let (_, rows) = table(&dirdist(&["density", "sc", "--params", "lambda=0.5", "mu0=0,0,1", "--at", "0,0,1"]));
    assert!((rows[0][3] - 9.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-14);
    assert_eq!(dirdist(&["density", "mvt", "--params", "location=0", "dof=1"]).status.code(), Some(2));
}

#[test]
fn convert_lists_every_parameterization() {
    let (header, rows) = table(&dirdist(&["convert", "alpha", "0.4"]));
    assert_eq!(header, ["A", "B", "C", "lambda", "b", "mu", "alpha"]);
    let r = &rows[0];
    assert_eq!(r[1], 1.0);
    assert!((r[3] - 0.5).abs() < 1e-15);
    assert!((r[4] - 1.0 / 3.0).abs() < 1e-15);
    assert!((r[6] - 0.4).abs() < 1e-15);
    assert_eq!(dirdist(&["convert", "alpha", "0.5"]).status.code(), Some(2));
}

#[test]
fn projections_round_trip() {
    let (_, rows) = table(&dirdist(&["project", "stereographic", "--point", "0.6,0.8", "--point", "1,0"]));
    assert!((rows[0][0] - 0.5).abs() < 1e-15);
    assert_eq!(rows[1][0], 0.0);
    let (_, back) = table(&dirdist(&["project", "stereographic-inverse", "--point", "0.5"]));
    assert!((back[0][0] - 0.6).abs() < 1e-15 && (back[0][1] - 0.8).abs() < 1e-15);
    let (_, g) = table(&dirdist(&["project", "gnomonic", "--point", "0.6,0.8"]));
    assert!((g[0][0] - 4.0 / 3.0).abs() < 1e-15);
    assert_eq!(dirdist(&["project", "gnomonic", "--point", "-1,0"]).status.code(), Some(2));
    assert_eq!(dirdist(&["project", "stereographic", "--point", "-1,0"]).status.code(), Some(2));
}

#[test]
fn spectral_matches_wc() {
    let (header, rows) = table(&dirdist(&["spectral", "--params", "lambda=0.5"]));
    assert_eq!(header, ["theta", "ar1", "wc"]);
    for r in rows {
        assert!((r[1] - r[2]).abs() <= 1e-12 * r[2]);
    }
}

#[test]
fn check_reports_and_exit_codes() {
    let o = dirdist(&["check", "mobius", "--trials", "100000", "--seed", "42", "--tol", "1e-12", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["suite"], "mobius");
    assert_eq!(v["passed"], true);
    assert_eq!(v["seed"], 42);
    assert_eq!(v["trials"], 100000);
    for key in ["max_abs_error", "tolerance", "wall_time"] {
        assert!(v[key].is_f64(), "{key}");
    }

    assert_eq!(dirdist(&["check", "mobius", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(dirdist(&["check", "unknown"]).status.code(), Some(2));
    assert_eq!(dirdist(&["check", "mobius", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(dirdist(&["check", "normalization", "--tol", "1e-300"]).status.code(), Some(1));
}

#[test]
fn check_all_is_deterministic() {
    let run = || {
        let o = dirdist(&["check", "all", "--trials", "50", "--seed", "3", "--format", "json"]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        for r in v.as_array_mut().unwrap() {
            r.as_object_mut().unwrap().remove("wall_time");
        }
        v
    };
    let a = run();
    assert_eq!(a.as_array().unwrap().len(), 13);
    assert_eq!(a, run());
}
