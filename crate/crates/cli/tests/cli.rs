//! End-to-end tests of the `hypconf` binary: exit-code contract, row-count
//! and determinism guarantees, and the shape of the emitted reports.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hypconf"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("failed to spawn hypconf")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("non-UTF8 output")
}

#[test]
fn help_exits_zero_with_usage() {
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Usage"));
}

#[test]
fn missing_subcommand_is_a_config_error() {
    let o = run(&[]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unparsable_parameter_is_a_config_error() {
    let o = run(&["stokes", "--a", "zebra", "--eps-grid", "0.1:0.0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn grid_point_outside_requested_sector_is_a_config_error() {
    // arg ε = 0 lies on the excluded ray of S⁻.
    let o = run(&["stokes", "--sector", "minus", "--eps-grid", "0.1:0.0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn half_half_rows_are_constant() {
    // a = b = 1/2: λ±(ε) = μ±(ε) = −2i for every ε, and L = −4.
    let o = run(&[
        "stokes",
        "--a",
        "0.5",
        "--b",
        "0.5",
        "--eps-grid",
        "0.1:0.3,0.07:-0.2,0.05:0.6",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 4);
    let header: Vec<&str> = rows[0].split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    for row in &rows[1..] {
        let f: Vec<f64> = row
            .split(',')
            .map(|c| c.parse().unwrap_or(f64::NAN))
            .collect();
        assert!((f[col("lambda_re")]).abs() < 1e-12);
        assert!((f[col("lambda_im")] + 2.0).abs() < 1e-12);
        assert!((f[col("mu_re")]).abs() < 1e-12);
        assert!((f[col("mu_im")] + 2.0).abs() < 1e-12);
        assert!((f[col("l_re")] + 4.0).abs() < 1e-12);
        assert!((f[col("l_im")]).abs() < 1e-12);
    }
}

#[test]
fn hundred_point_grid_gives_hundred_rows() {
    let o = run(&["stokes", "--eps-grid", "log:1e-1:1e-2:100:0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 101);
}

#[test]
fn json_rows_carry_branched_eps() {
    let o = run(&["stokes", "--eps-grid", "0.1:6.5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let eps = &v[0]["eps"];
    // The lifted argument survives serialization (6.5 > π would collapse
    // under a principal-value representation).
    assert!((eps["modulus"].as_f64().unwrap() - 0.1).abs() < 1e-15);
    assert!((eps["argument"].as_f64().unwrap() - 6.5).abs() < 1e-15);
    assert!(v[0]["lambda"]["re"].is_number());
    assert!(v[0]["lambda"]["im"].is_number());
}

#[test]
fn verify_is_byte_identical_for_fixed_seed() {
    let o1 = run(&["verify", "--suite", "borel", "--seed", "7"]);
    let o2 = run(&["verify", "--suite", "borel", "--seed", "7"]);
    assert_eq!(o1.status.code(), Some(0));
    assert_eq!(o1.stdout, o2.stdout);
}

#[test]
fn verify_reports_match_the_published_schema_shape() {
    for suite in ["borel", "riccati", "symmetry", "universal"] {
        let o = run(&["verify", "--suite", suite]);
        assert_eq!(o.status.code(), Some(0), "suite {suite} failed");
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["suite"], suite);
        assert_eq!(v["all_pass"], true);
        let checks = v["checks"].as_array().unwrap();
        assert!(!checks.is_empty());
        for c in checks {
            assert!(c["identity"].is_string());
            assert!(c["residual"].is_number());
            assert!(c["tolerance"].as_f64().unwrap() > 0.0);
            assert_eq!(c["pass"], true);
        }
    }
}

#[test]
fn borel_suite_reports_the_lambda_zero_branch() {
    let o = run(&["verify", "--suite", "borel"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let found = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["branch"] == "lambda-zero" && c["pass"] == true);
    assert!(found, "no passing lambda-zero branch check in the borel suite");
}

#[test]
fn empty_grid_emits_header_only() {
    let o = run(&["plotdata", "--kind", "stokes_limit_scan", "--eps-grid", ""]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("eps_modulus,"));
}

#[test]
fn stokes_limit_scan_errors_decrease() {
    let o = run(&[
        "plotdata",
        "--kind",
        "stokes_limit_scan",
        "--a",
        "0.3",
        "--b",
        "0.45",
        "--eps-grid",
        "log:1e-1:1e-4:7:0.7853981633974483",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    let header: Vec<&str> = rows[0].split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    let errs: Vec<f64> = rows[1..]
        .iter()
        .map(|r| r.split(',').nth(col("lambda_err")).unwrap().parse().unwrap())
        .collect();
    assert_eq!(errs.len(), 7);
    assert!(errs.windows(2).all(|w| w[0] > w[1]), "{errs:?}");
}

#[test]
fn riccati_portrait_graphs_hit_their_anchors() {
    let o = run(&["plotdata", "--kind", "riccati_portrait", "--eps", "0.1:0.0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut rho2_anchor = false;
    let mut rho3_anchor = false;
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let (x_re, y_re): (f64, f64) = (f[2].parse().unwrap(), f[4].parse().unwrap());
        let x_im: f64 = f[3].parse().unwrap();
        let y_im: f64 = f[5].parse().unwrap();
        if f[0] == "rho2" && x_re == 0.0 && x_im == 0.0 {
            rho2_anchor = (y_re - 1.0).abs() < 1e-12 && y_im == 0.0;
        }
        if f[0] == "rho3" && (x_re - 0.1).abs() < 1e-15 && x_im == 0.0 {
            rho3_anchor = y_re.abs() < 1e-12 && y_im.abs() < 1e-12;
        }
    }
    assert!(rho2_anchor, "rho2 does not pass through (0, 1)");
    assert!(rho3_anchor, "rho3 does not pass through (eps, 0)");
}

#[test]
fn h_limit_scan_differences_shrink() {
    let o = run(&["plotdata", "--kind", "h_limit_scan"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut per_x: std::collections::BTreeMap<String, Vec<f64>> = Default::default();
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        per_x
            .entry(format!("{},{}", f[0], f[1]))
            .or_default()
            .push(f[8].parse().unwrap());
    }
    assert!(!per_x.is_empty());
    for (x, diffs) in per_x {
        assert!(
            diffs.windows(2).all(|w| w[0] > w[1]),
            "differences at x = {x} do not decrease: {diffs:?}"
        );
    }
}

#[test]
fn out_flag_writes_the_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o1 = run(&["verify", "--suite", "universal", "--seed", "3"]);
    let o2 = bin()
        .args([
            "verify",
            "--suite",
            "universal",
            "--seed",
            "3",
            "--out",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(o2.status.code(), Some(0));
    assert!(o2.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), o1.stdout);
}

#[test]
fn eps_dependent_parameters_are_polynomials_in_eps() {
    // a(ε) = 0.5 + ε, b = 0.5 at real ε = 0.05: compare with the constant
    // parameters a = 0.55 evaluated directly.
    let o1 = run(&["stokes", "--a", "0.5;1", "--b", "0.5", "--eps-grid", "0.05:0.0"]);
    let o2 = run(&["stokes", "--a", "0.55", "--b", "0.5", "--eps-grid", "0.05:0.0"]);
    assert_eq!(o1.status.code(), Some(0));
    assert_eq!(stdout(&o1), stdout(&o2));
}
