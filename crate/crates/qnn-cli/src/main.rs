//! `qnn` — experiment runner for the network-training framework.
//!
//! Usage:
//!   qnn <command> [--config <path>] [--seed <u64>] [--out <dir>] [key=value ...]
//!
//! Commands: train, generalize, sweep-noise, identity-cost, transpile-report.
//! Dotted-key overrides use the same names as the config file
//! (for example `noise.k=2 train.epochs=200`).

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};

use qnn_cli::config::Config;
use qnn_cli::experiments;

fn parse_args(args: &[String]) -> Result<Config> {
    if args.is_empty() {
        bail!("missing command; expected one of train, generalize, sweep-noise, identity-cost, transpile-report");
    }
    let experiment = match args[0].as_str() {
        "train" => "single-training",
        "generalize" => "generalization",
        "sweep-noise" => "noise-sweep",
        "identity-cost" => "identity-cost",
        "transpile-report" => "transpile-report",
        other => bail!("unknown command {other:?}"),
    };
    let mut cfg = Config::new();
    let mut overrides: Vec<(String, String)> = Vec::new();
    let mut config_path: Option<PathBuf> = None;
    let mut i = 1;
    while i < args.len() {
        match args[i].as_str() {
            "--config" => {
                let v = args.get(i + 1).ok_or_else(|| anyhow::anyhow!("--config needs a path"))?;
                config_path = Some(PathBuf::from(v));
                i += 2;
            }
            "--seed" => {
                let v = args.get(i + 1).ok_or_else(|| anyhow::anyhow!("--seed needs a value"))?;
                overrides.push(("seed".into(), v.clone()));
                i += 2;
            }
            "--out" => {
                let v = args.get(i + 1).ok_or_else(|| anyhow::anyhow!("--out needs a path"))?;
                overrides.push(("out".into(), v.clone()));
                i += 2;
            }
            arg => {
                let Some((k, v)) = arg.split_once('=') else {
                    bail!("unrecognized argument {arg:?}; overrides use key=value");
                };
                overrides.push((k.trim().into(), v.trim().into()));
                i += 1;
            }
        }
    }
    if let Some(path) = config_path {
        cfg = Config::from_file(&path)?;
    }
    for (k, v) in overrides {
        cfg.set(&k, &v);
    }
    cfg.set("experiment", experiment);
    Ok(cfg)
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let result = parse_args(&args).and_then(|cfg| experiments::run(&cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", serde_json::json!({ "error": format!("{e:#}") }));
            ExitCode::FAILURE
        }
    }
}
