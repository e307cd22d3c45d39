mod common;

use std::path::Path;
use std::process::{Command, Output};

use approx::assert_relative_eq;
use asymdl::cli::report::{read_fit_json, read_mc_report, read_table};

fn asymdl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_asymdl"))
        .args(args)
        .env("ASYMDL_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = asymdl(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn decompose_writes_cumulative_components() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "x.csv", "t,x\n1,0\n2,1\n3,-1\n4,2\n");
    ok(&["decompose", "--input", &input, "--out", s(dir.path())]);
    let t = read_table(&dir.path().join("decomposed.csv")).unwrap();
    assert_eq!(t.headers, ["t", "x", "x_pos", "x_neg"]);
    let val = |c| t.floats(c).unwrap().into_iter().map(Option::unwrap).collect::<Vec<_>>();
    assert_eq!(val("x_pos"), [0.0, 1.0, 1.0, 4.0]);
    assert_eq!(val("x_neg"), [0.0, 0.0, -2.0, -2.0]);
}

#[test]
fn fit_both_families_writes_comparison() {
    let dir = tempfile::tempdir().unwrap();
    let demo = common::demo_csv();
    ok(&["fit", "--input", s(&demo), "--transform", "log,standardize", "--out", s(dir.path())]);
    let models = read_fit_json(&dir.path().join("fit.json")).unwrap();
    assert_eq!(models.len(), 2);
    assert_eq!(models[0].family, "ardl");
    assert_eq!(models[1].family, "nsb");
    assert_eq!(models[0].n_effective, models[1].n_effective);
    assert_eq!(models[1].coefficients.len(), 1 + 1 + 3 * 4);
    for m in &models {
        let k = m.coefficients.len() as f64;
        assert_relative_eq!(m.aic, 2.0 * k - 2.0 * m.loglik, max_relative = 1e-10);
    }
    let cmp = read_table(&dir.path().join("comparison.csv")).unwrap();
    let terms = cmp.column("term").unwrap();
    assert!(terms.contains(&"aic") && terms.contains(&"loglik") && terms.contains(&"const"));
}

#[test]
fn selection_flag_picks_lags() {
    let dir = tempfile::tempdir().unwrap();
    let sim = dir.path().join("sim");
    ok(&["simulate", "--seed", "4", "--out", s(&sim)]);
    let input = sim.join("simulated.csv");
    ok(&["fit", "--input", s(&input), "--family", "nsb", "--select", "--criterion", "bic", "--out", s(dir.path())]);
    let models = read_fit_json(&dir.path().join("fit.json")).unwrap();
    assert_eq!(models.len(), 1);
    assert_eq!(models[0].n_effective, 97);
    assert!(!dir.path().join("comparison.csv").exists());
}

#[test]
fn exit_codes_classify_failures() {
    let dir = tempfile::tempdir().unwrap();
    let out = s(dir.path());
    let missing = dir.path().join("absent.csv");
    assert_eq!(asymdl(&["fit", "--input", s(&missing), "--out", out]).status.code(), Some(2));
    let bad = write(dir.path(), "bad.csv", "t,y,x\n1,1,abc\n2,2,3\n");
    assert_eq!(asymdl(&["fit", "--input", &bad, "--out", out]).status.code(), Some(2));
    let demo = common::demo_csv();
    assert_eq!(asymdl(&["fit", "--input", s(&demo), "--family", "garch", "--out", out]).status.code(), Some(3));
    assert_eq!(asymdl(&["fit", "--input", s(&demo), "--set", "nonsense=1", "--out", out]).status.code(), Some(3));
    let flat = write(dir.path(), "flat.csv", "t,y,x\n1,1,1\n2,2,1\n3,1,1\n4,3,1\n5,2,1\n6,4,1\n7,2,1\n");
    let r = asymdl(&["fit", "--input", &flat, "--family", "ardl", "--q", "0", "--out", out]);
    assert_eq!(r.status.code(), Some(4), "{}", String::from_utf8_lossy(&r.stderr));
}

#[test]
fn simulate_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, c) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("c"));
    ok(&["simulate", "--seed", "7", "--out", s(&a)]);
    ok(&["simulate", "--seed", "7", "--out", s(&b)]);
    ok(&["simulate", "--seed", "8", "--out", s(&c)]);
    let read = |d: &Path| std::fs::read(d.join("simulated.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_ne!(read(&a), read(&c));
    let t = read_table(&a.join("simulated.csv")).unwrap();
    assert_eq!(t.headers, ["t", "y", "x"]);
    assert_eq!(t.rows.len(), 100);
}

#[test]
fn rolling_evaluation_reports_every_window() {
    let dir = tempfile::tempdir().unwrap();
    let demo = common::demo_csv();
    ok(&["evaluate", "--input", s(&demo), "--transform", "log,standardize", "--mode", "rolling", "--window", "22", "--horizon", "5", "--out", s(dir.path())]);
    for family in ["ardl", "nsb"] {
        let t = read_table(&dir.path().join(format!("rolling_{family}.csv"))).unwrap();
        assert_eq!(t.rows.len(), 34 - 22 - 5 + 1);
        assert_eq!(t.column("train_start").unwrap()[0], "1988");
        assert_eq!(t.column("train_end").unwrap()[0], "2009");
    }
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("rolling.json")).unwrap()).unwrap();
    assert_eq!(json["models"].as_array().unwrap().len(), 2);
}

#[test]
fn forecast_with_future_regressors() {
    let dir = tempfile::tempdir().unwrap();
    let sim = dir.path().join("sim");
    ok(&["simulate", "--seed", "3", "--out", s(&sim)]);
    let text = std::fs::read_to_string(sim.join("simulated.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let history = write(dir.path(), "history.csv", &(lines[..91].join("\n") + "\n"));
    let future: Vec<String> = lines[91..]
        .iter()
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            format!("{},{}", f[0], f[2])
        })
        .collect();
    let future = write(dir.path(), "future.csv", &format!("t,x\n{}\n", future.join("\n")));
    ok(&["forecast", "--input", &history, "--future", &future, "--family", "nsb", "--out", s(dir.path())]);
    let fc = read_table(&dir.path().join("forecast.csv")).unwrap();
    assert_eq!(fc.rows.len(), 10);
    assert_eq!(fc.column("index").unwrap()[0], "91");
    assert!(fc.floats("prediction").unwrap().iter().all(|v| v.is_some_and(f64::is_finite)));
}

#[test]
fn holdout_forecast_error_is_prediction_minus_actual() {
    let dir = tempfile::tempdir().unwrap();
    let sim = dir.path().join("sim");
    ok(&["simulate", "--seed", "5", "--out", s(&sim)]);
    let input = sim.join("simulated.csv");
    ok(&["forecast", "--input", s(&input), "--train-n", "90", "--horizon", "10", "--out", s(dir.path())]);
    let t = read_table(&dir.path().join("forecast_nsb.csv")).unwrap();
    let pred = t.floats("prediction").unwrap();
    let act = t.floats("actual").unwrap();
    let err = t.floats("error").unwrap();
    for i in 0..10 {
        assert_relative_eq!(err[i].unwrap(), pred[i].unwrap() - act[i].unwrap(), max_relative = 1e-9, epsilon = 1e-10);
    }
}

#[test]
fn mc_reports_every_cell() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["mc", "--replications", "20", "--lags", "1,2", "--seed", "9", "--out", s(dir.path())]);
    let rows = read_mc_report(&dir.path().join("mc_report.csv")).unwrap();
    let cells: Vec<(String, usize)> = rows.iter().map(|r| (r.family.clone(), r.lag)).collect();
    assert_eq!(cells, [("ardl".into(), 1), ("nsb".into(), 1), ("ardl".into(), 2), ("nsb".into(), 2)]);
    assert!(rows.iter().all(|r| r.failures == 0 && r.mean_rmse > 0.0 && r.std_rmse >= 0.0));
    let raw = read_table(&dir.path().join("mc_raw.csv")).unwrap();
    assert_eq!(raw.rows.len(), 80);
}

#[test]
fn config_file_and_flags_combine() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.cfg", "# demo\nreplications = 10\nlags = 1\nseed = 1\n");
    ok(&["mc", "--config", &cfg, "--lags", "2", "--out", s(dir.path())]);
    let rows = read_mc_report(&dir.path().join("mc_report.csv")).unwrap();
    assert!(rows.iter().all(|r| r.lag == 2));
    assert_eq!(read_table(&dir.path().join("mc_raw.csv")).unwrap().rows.len(), 20);
}
