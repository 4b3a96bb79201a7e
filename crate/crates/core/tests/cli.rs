use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mvgarch-cpd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn simulate_detect_report_on_m1_6() {
    let dir = tempfile::tempdir().unwrap();
    let sim = dir.path().join("sim");
    let out = run(&[
        "simulate", "--model", "M1.6", "--n", "20", "--t", "1000", "--seed", "7", "--output", s(&sim),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let truth = json(&sim.join("truth.json"));
    assert_eq!(truth["truth"], serde_json::json!([500]));

    let result = dir.path().join("detect.json");
    let out = run(&[
        "detect",
        "--input",
        s(&sim.join("returns.csv")),
        "--boot-reps",
        "100",
        "--seed",
        "7",
        "--output",
        s(&result),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let det = json(&result);
    let cps = det["change_points"].as_array().unwrap();
    assert_eq!(cps.len(), 1);
    let index = cps[0]["index"].as_f64().unwrap();
    assert!((index - 500.0).abs() < 1000f64.ln().powi(2), "index {index}");
    assert_eq!(det["segments"].as_array().unwrap().len(), 2);
    assert_eq!(det["n_series"], 20);
    assert!(det["wall_time"].is_number());

    let out = run(&["report", "--input", s(&result)]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("1 change-point(s)"), "{text}");
}

fn write(path: &Path, text: &str) {
    fs::write(path, text).unwrap();
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    write(&bad, "a,b\n1,2\n3,x\n");
    let out = run(&["detect", "--input", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let out = run(&["simulate", "--model", "M9.1", "--output", s(dir.path())]);
    assert_eq!(out.status.code(), Some(4));

    let cfg = dir.path().join("cfg.json");
    write(&cfg, r#"{"alpha": 1.5}"#);
    let out = run(&["detect", "--config", s(&cfg), "--input", s(&bad)]);
    assert_eq!(out.status.code(), Some(4));

    let out = run(&["detect", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_values_are_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let sim = dir.path().join("sim");
    assert!(run(&["simulate", "--model", "M0.1", "--n", "3", "--t", "200", "--output", s(&sim)])
        .status
        .success());
    let cfg = dir.path().join("cfg.json");
    write(&cfg, r#"{"boot_reps": 25, "seed": 3, "min_seg": 40}"#);
    let result = dir.path().join("d.json");
    let out = run(&[
        "detect",
        "--config",
        s(&cfg),
        "--input",
        s(&sim.join("returns.csv")),
        "--seed",
        "4",
        "--output",
        s(&result),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let det = json(&result);
    assert_eq!(det["config"]["boot_reps"], 25);
    assert_eq!(det["config"]["min_seg"], 40);
    assert_eq!(det["config"]["seed"], 4);
}

#[test]
fn backtest_with_dates_rejects_overlap() {
    let dir = tempfile::tempdir().unwrap();
    let mut sample = String::from("date,a,b\n");
    let mut eval = String::from("date,a,b\n");
    let start = chrono::NaiveDate::from_ymd_opt(2020, 1, 1).unwrap();
    for i in 0..300 {
        let d = start + chrono::Days::new(i);
        let (x, y) = (((i * 37) % 11) as f64 - 5.0, ((i * 53) % 7) as f64 - 3.0);
        sample += &format!("{d},{},{}\n", x * 0.01, (x + y) * 0.01);
        let e = start + chrono::Days::new(i + 250);
        eval += &format!("{e},{},{}\n", y * 0.01, (x - y) * 0.01);
    }
    let sample_path = dir.path().join("sample.csv");
    let eval_path = dir.path().join("eval.csv");
    write(&sample_path, &sample);
    write(&eval_path, &eval);
    let out_dir = dir.path().join("bt");
    let det = dir.path().join("det.json");
    write(
        &det,
        &serde_json::json!({
            "change_points": [], "segments": [{"from": 0, "to": 150}, {"from": 150, "to": 300}],
            "n_series": 2, "n_obs": 300, "config": {}, "wall_time": 0.0
        })
        .to_string(),
    );
    let args = [
        "backtest",
        "--input",
        s(&sample_path),
        "--eval",
        s(&eval_path),
        "--detection",
        s(&det),
        "--window",
        "30",
        "--output",
        s(&out_dir),
    ];
    let out = run(&args);
    assert_eq!(out.status.code(), Some(4));

    let out = run(&[&args[..], &["--allow-overlap"]].concat());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out_dir.join("backtest.json"));
    assert_eq!(report["forecast_days"], 270);
    assert_eq!(report["results"].as_array().unwrap().len(), 4);
    let csv = fs::read_to_string(out_dir.join("svar_daily.csv")).unwrap();
    assert!(csv.starts_with("date,portfolio_return,svar_p1_0.95"), "{csv}");
    assert_eq!(csv.lines().count(), 271);
}
