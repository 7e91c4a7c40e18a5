//! End-to-end checks of the experiment runners and file outputs.

use qnn_cli::config::Config;
use qnn_cli::experiments;

fn base_cfg(dir: &std::path::Path, experiment: &str) -> Config {
    let mut cfg = Config::new();
    cfg.set("experiment", experiment);
    cfg.set("out", dir.to_str().unwrap());
    cfg.set("seed", "7");
    cfg
}

#[test]
fn single_training_trace_shape() {
    // 100 epochs with validation every 5 gives 100 C_T rows and 20 C_V/C_id entries
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = base_cfg(tmp.path(), "single-training");
    cfg.set("network.type", "qaoa");
    cfg.set("backend", "expectation");
    cfg.set("train.epochs", "100");
    cfg.set("train.validation_every", "5");
    experiments::run(&cfg).unwrap();

    let csv = std::fs::read_to_string(tmp.path().join("single-training.csv")).unwrap();
    let rows: Vec<&str> =
        csv.lines().filter(|l| !l.starts_with('#') && !l.starts_with("epoch")).collect();
    assert_eq!(rows.len(), 100);
    let with_cv = rows.iter().filter(|r| r.split(',').nth(2).is_some_and(|c| !c.is_empty())).count();
    let with_ci = rows.iter().filter(|r| r.split(',').nth(3).is_some_and(|c| !c.is_empty())).count();
    assert_eq!(with_cv, 20);
    assert_eq!(with_ci, 20);
    assert!(csv.starts_with("# "), "reproducibility header missing");
}

#[test]
fn zero_eta_gives_flat_cost_column() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = base_cfg(tmp.path(), "single-training");
    cfg.set("network.type", "dqnn");
    cfg.set("backend", "exact");
    cfg.set("train.eta", "0");
    cfg.set("train.epochs", "10");
    experiments::run(&cfg).unwrap();
    let csv = std::fs::read_to_string(tmp.path().join("single-training.csv")).unwrap();
    let costs: Vec<&str> = csv
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("epoch"))
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(costs.len(), 10);
    assert!(costs.iter().all(|c| *c == costs[0]), "C_T not flat under eta = 0: {costs:?}");
}

#[test]
fn sampled_backend_trace_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let run = || {
        let mut cfg = base_cfg(tmp.path(), "single-training");
        cfg.set("network.type", "qaoa");
        cfg.set("backend", "sampled");
        cfg.set("shots", "512");
        cfg.set("train.epochs", "3");
        experiments::run(&cfg).unwrap();
        std::fs::read_to_string(tmp.path().join("single-training.csv")).unwrap()
    };
    let a = run();
    let b = run();
    assert_eq!(a, b);
}

#[test]
fn generalization_rows_and_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = base_cfg(tmp.path(), "generalization");
    cfg.set("network.type", "both");
    cfg.set("sessions", "2");
    cfg.set("dataset.n_train_grid", "1,2");
    cfg.set("train.epochs", "4");
    experiments::run(&cfg).unwrap();
    let csv = std::fs::read_to_string(tmp.path().join("generalization.csv")).unwrap();
    let rows = csv.lines().filter(|l| !l.starts_with('#') && !l.starts_with("network")).count();
    assert_eq!(rows, 2 * 2 * 2);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("generalization.json")).unwrap())
            .unwrap();
    assert_eq!(json["summary"].as_array().unwrap().len(), 4);
    assert!(json["config"]["seed"].as_str() == Some("7"));
}

#[test]
fn noise_sweep_writes_per_k_rows() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = base_cfg(tmp.path(), "noise-sweep");
    cfg.set("network.type", "qaoa");
    cfg.set("sessions", "1");
    cfg.set("noise.k_grid", "0,1");
    cfg.set("train.epochs", "4");
    experiments::run(&cfg).unwrap();
    let csv = std::fs::read_to_string(tmp.path().join("noise-sweep.csv")).unwrap();
    let rows: Vec<&str> =
        csv.lines().filter(|l| !l.starts_with('#') && !l.starts_with("network")).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("qaoa,0"));
    assert!(rows[1].starts_with("qaoa,1"));
}

#[test]
fn transpile_report_counts_match_templates() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = base_cfg(tmp.path(), "transpile-report");
    cfg.set("network.type", "both");
    experiments::run(&cfg).unwrap();
    let json: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(tmp.path().join("transpile-report.json")).unwrap(),
    )
    .unwrap();
    let reports = json["summary"].as_array().unwrap();
    let dqnn = &reports[0];
    assert_eq!(dqnn["network"], "dqnn");
    // 2 (prep) + 12 (network: 4 can gates × 3) + 2 (swap test)
    assert_eq!(dqnn["total"]["cnot"], 16);
    assert_eq!(dqnn["state_prep"]["cnot"], 2);
    assert_eq!(dqnn["network_circuit"]["cnot"], 12);
    assert_eq!(dqnn["swap_test"]["cnot"], 2);
    assert_eq!(dqnn["swap_test"]["sx"], 2);
    let qaoa = &reports[1];
    // 2 + 48 (16 KAK cores × 3) + 2
    assert_eq!(qaoa["total"]["cnot"], 52);
    assert!(dqnn["reconstruction_residual"].as_f64().unwrap() <= 1e-8);
    assert!(qaoa["reconstruction_residual"].as_f64().unwrap() <= 1e-8);
    // the basis-circuit text form is emitted alongside
    let txt = std::fs::read_to_string(tmp.path().join("transpile-report.dqnn.txt")).unwrap();
    assert!(txt.lines().any(|l| l.starts_with("CNOT ")));
}

#[test]
fn unknown_experiment_is_an_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = base_cfg(tmp.path(), "nonsense");
    assert!(experiments::run(&cfg).is_err());
}

#[test]
fn invalid_network_type_is_an_error() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = base_cfg(tmp.path(), "single-training");
    cfg.set("network.type", "spin-glass");
    assert!(experiments::run(&cfg).is_err());
}
