use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const HEAT: [&str; 2] = [
    "--override=model.f=[[0, 0.0, 0.0]]",
    "--override=model.sigma=[[0, 1.4142135623730951, 0.0]]",
];

fn run(dir: &Path, args: &[&str]) -> (Output, Option<Value>) {
    let out = Command::new(env!("CARGO_BIN_EXE_weakbea"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .arg("--quiet")
        .output()
        .expect("binary runs");
    let report = fs::read_to_string(dir.join("report.json"))
        .ok()
        .map(|s| serde_json::from_str(&s).expect("report is JSON"));
    (out, report)
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))
}

#[test]
fn constant_model_expansion_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("const.toml");
    fs::write(
        &cfg,
        "order = 3\n[model]\nf = [[0, 0.7, 0.0]]\nsigma = [[0, 1.1, 0.0]]\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let (out, rep) = run(&out_dir, &["expand", "--config", cfg.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rep = rep.unwrap();
    assert_eq!(rep["command"], "expand");
    assert_eq!(rep["pass"], true);
    assert_eq!(check(&rep, "constant_coefficient_exactness")["pass"], true);
    assert!(out_dir.join("operators.csv").exists());
    assert_eq!(rep["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "[model]\nf = [[1, 0.0, -1.0]]\n").unwrap();
    let (out, rep) = run(
        &dir.path().join("a"),
        &["expand", "--config", cfg.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sigma"));
    assert!(rep.is_none());

    let (out, _) = run(
        &dir.path().join("b"),
        &["invariant", "--override=resolution.bogus=3"],
    );
    assert_eq!(out.status.code(), Some(2));
    let (out, _) = run(
        &dir.path().join("c"),
        &["invariant", "--config", "/nonexistent.toml"],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn langevin_invariant_densities() {
    let dir = tempfile::tempdir().unwrap();
    let (out, rep) = run(dir.path(), &["invariant"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rep = rep.unwrap();
    let gibbs = check(&rep, "gibbs_density");
    assert!(gibbs["value"].as_f64().unwrap() < 1e-10);
    let rho = fs::read_to_string(dir.path().join("rho.csv")).unwrap();
    assert!(rho.starts_with("x,value\n"));
    assert_eq!(rho.lines().count(), 257);
    assert!(dir.path().join("mu_2.csv").exists());
    assert!(dir.path().join("plot.gp").exists());
}

#[test]
fn heat_mixing_rates_follow_the_harmonic() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["mixing"];
    args.extend(HEAT);
    let (out, rep) = run(&dir.path().join("k1"), &args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rate = rep.unwrap()["values"]["continuous_rate"].as_f64().unwrap();
    assert!((rate - 1.0).abs() < 1e-6, "{rate}");

    args.extend([
        "--override=observable=[[2, 1.0, 0.0]]",
        "--override=mixing.horizon=5.0",
    ]);
    let (out, rep) = run(&dir.path().join("k2"), &args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rep = rep.unwrap();
    let rate = rep["values"]["continuous_rate"].as_f64().unwrap();
    assert!((rate - 4.0).abs() < 1e-6, "{rate}");
    let gap = rep["values"]["spectral_gap"].as_f64().unwrap();
    assert!((gap - 1.0).abs() < 1e-9);
}

#[test]
fn failed_fit_still_writes_the_tables() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec![
        "mixing",
        "--override=observable=[[3, 1.0, 0.0]]",
        "--override=mixing.horizon=20.0",
    ];
    args.extend(HEAT);
    let (out, rep) = run(dir.path(), &args);
    assert_eq!(out.status.code(), Some(1));
    let rep = rep.unwrap();
    assert_eq!(rep["pass"], false);
    let c = check(&rep, "continuous_rate");
    assert!(c["value"].is_null());
    assert!(c["note"].as_str().unwrap().contains("noise floor"));
    assert!(dir.path().join("decay_continuous.csv").exists());
    assert!(dir.path().join("decay_discrete.csv").exists());
}

#[test]
fn constant_observable_sits_at_the_floor() {
    let dir = tempfile::tempdir().unwrap();
    let (out, rep) = run(
        dir.path(),
        &["converge", "--override=observable=[[0, 1.0, 0.0]]"],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let c = check(rep.as_ref().unwrap(), "long_time_slope_N1");
    assert!(c["note"].as_str().unwrap().contains("floor"));
    let csv = fs::read_to_string(dir.path().join("long_time.csv")).unwrap();
    assert!(csv.starts_with("tau,error_N0,error_N1,error_N2\n"));
}

const SMALL_MC: [&str; 5] = [
    "--override=simulate.paths=4000",
    "--override=simulate.steps=20",
    "--override=simulate.ergodic_steps=40000",
    "--override=simulate.burn_in=400",
    "--sequential",
];

fn without_wall_time(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("wall_time");
    v
}

#[test]
fn reruns_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["simulate"];
    args.extend(SMALL_MC);
    let (first, a) = run(&dir.path().join("a"), &args);
    let (second, b) = run(&dir.path().join("b"), &args);
    assert_eq!(first.status.code(), second.status.code());
    assert_eq!(without_wall_time(a.unwrap()), without_wall_time(b.unwrap()));
    let ea = fs::read_to_string(dir.path().join("a/estimates.csv")).unwrap();
    let eb = fs::read_to_string(dir.path().join("b/estimates.csv")).unwrap();
    assert_eq!(ea, eb);
}

#[test]
fn a_single_path_reports_no_standard_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["simulate"];
    args.extend(SMALL_MC);
    args.push("--override=simulate.paths=1");
    let (out, rep) = run(dir.path(), &args);
    assert_ne!(out.status.code(), Some(2));
    let rep = rep.unwrap();
    assert_eq!(rep["values"]["one_step_std_error"], "n/a");
    let c = check(&rep, "mc_p_step");
    assert_eq!(c["enforced"], false);
    assert_eq!(c["threshold"], "n/a");
}

#[test]
fn driftless_model_has_uniform_densities() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["invariant", "--override=tau=[0.1, 0.05]"];
    args.extend(HEAT);
    let (out, rep) = run(dir.path(), &args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let uniform = 1.0 / (2.0 * std::f64::consts::PI);
    for file in [
        "rho.csv",
        "mu_modified_tau0.05.csv",
        "kernel_invariant_tau0.1.csv",
    ] {
        let csv = fs::read_to_string(dir.path().join(file)).unwrap();
        for line in csv.lines().skip(1) {
            let v: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
            assert!((v - uniform).abs() < 1e-12, "{file}: {line}");
        }
    }
    let c = check(rep.as_ref().unwrap(), "kernel_invariant_slope_N0");
    assert!(c["note"].as_str().unwrap().contains("floor"));
}

#[test]
fn constant_model_long_time_errors_sit_at_the_floor() {
    let dir = tempfile::tempdir().unwrap();
    let (out, rep) = run(
        dir.path(),
        &[
            "converge",
            "--override=N=1",
            "--override=model.f=[[0, 0.7, 0.0]]",
            "--override=model.sigma=[[0, 1.1, 0.0]]",
        ],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rep = rep.unwrap();
    assert_eq!(rep["config"]["order"], 1);
    assert!(rep["values"]["long_time_horizon"].as_f64().unwrap() > 20.0);
    for n in 0..=1 {
        let c = check(&rep, &format!("long_time_slope_N{n}"));
        assert!(c["note"].as_str().unwrap().contains("floor"));
        assert_eq!(check(&rep, &format!("one_step_slope_N{n}"))["pass"], true);
    }
    assert_eq!(rep["versions"]["weakbea"], rep["versions"]["weakbea-cli"]);
}

#[test]
fn short_horizons_are_reported_as_transient_limited() {
    let dir = tempfile::tempdir().unwrap();
    let (out, rep) = run(
        dir.path(),
        &[
            "converge",
            "--override=N=0",
            "--override=converge.horizon=0.01",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    let c = check(rep.as_ref().unwrap(), "long_time_slope_N0");
    assert_eq!(c["pass"], false);
    assert!(c["note"].as_str().unwrap().contains("transient"));
}
