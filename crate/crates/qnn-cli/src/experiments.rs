//! Experiment runners reproducing the training, generalization, noise-sweep,
//! identity-cost and transpilation studies at desk scale.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, bail, Result};
use rayon::prelude::*;
use serde::Serialize;

use qnn_core::circuits::{identity_params, NetworkSpec};
use qnn_core::measure::{cost, full_circuit, full_circuit_layout, Backend};
use qnn_core::noise::NoiseModel;
use qnn_core::qcore::{sample_gue, SeededRng};
use qnn_core::train::{
    generate_dataset, identity_cost, train, Hyperparameters, StopRule, TrainBackend,
    TrainingTrace,
};
use qnn_core::transpile::transpile_circuit;

use crate::config::Config;
use crate::output::{fmt_f64, write_json, CsvWriter};

/// Architecture family; QAOA generators are drawn per session.
#[derive(Debug, Clone)]
pub enum NetworkKind {
    Dqnn { widths: Vec<usize> },
    Qaoa { m: usize, layers: usize },
}

impl NetworkKind {
    pub fn name(&self) -> &'static str {
        match self {
            NetworkKind::Dqnn { .. } => "dqnn",
            NetworkKind::Qaoa { .. } => "qaoa",
        }
    }

    pub fn register_width(&self) -> usize {
        match self {
            NetworkKind::Dqnn { widths } => widths[0],
            NetworkKind::Qaoa { m, .. } => *m,
        }
    }

    /// Instantiate the concrete network, drawing QAOA generators from `rng`.
    pub fn build(&self, rng: &mut SeededRng) -> Result<NetworkSpec> {
        Ok(match self {
            NetworkKind::Dqnn { widths } => NetworkSpec::dqnn(widths.clone())?,
            NetworkKind::Qaoa { m, layers } => {
                let d = 1usize << *m;
                let a = sample_gue(d, rng)?;
                let b = sample_gue(d, rng)?;
                NetworkSpec::qaoa(*m, *layers, a, b)?
            }
        })
    }

    /// The paper's tuned hyperparameters for this family.
    pub fn default_hyper(&self) -> (f64, f64) {
        match self {
            NetworkKind::Dqnn { .. } => (0.5, 0.25),
            NetworkKind::Qaoa { .. } => (0.075, 0.05),
        }
    }
}

/// Networks selected by `network.type` (`dqnn`, `qaoa`, or `both`).
pub fn networks_from_config(cfg: &Config) -> Result<Vec<NetworkKind>> {
    let widths = cfg.get_usize_list("network.widths", &[2, 2])?;
    let m = cfg.get_usize("network.m", 2)?;
    let d = 1usize << m;
    let layers = cfg.get_usize("network.layers", d * d / 2)?;
    let dqnn = NetworkKind::Dqnn { widths };
    let qaoa = NetworkKind::Qaoa { m, layers };
    Ok(match cfg.get_str("network.type", "dqnn").as_str() {
        "dqnn" => vec![dqnn],
        "qaoa" => vec![qaoa],
        "both" => vec![dqnn, qaoa],
        other => bail!("unknown network.type {other:?} (expected dqnn, qaoa, or both)"),
    })
}

pub fn noise_from_config(cfg: &Config) -> Result<NoiseModel> {
    let defaults = NoiseModel::nisq_defaults(1.0);
    Ok(NoiseModel {
        lambda0_cnot: cfg.get_f64("noise.lambda0.cnot", defaults.lambda0_cnot)?,
        lambda0_sx: cfg.get_f64("noise.lambda0.sx", defaults.lambda0_sx)?,
        lambda0_rz: cfg.get_f64("noise.lambda0.rz", defaults.lambda0_rz)?,
        k: cfg.get_f64("noise.k", 1.0)?,
    })
}

fn hyper_from_config(cfg: &Config, kind: &NetworkKind, seed: u64) -> Result<Hyperparameters> {
    let (eta_d, eps_d) = kind.default_hyper();
    Ok(Hyperparameters {
        eta: cfg.get_f64("train.eta", eta_d)?,
        epsilon: cfg.get_f64("train.epsilon", eps_d)?,
        epochs: cfg.get_usize("train.epochs", 1000)?,
        validation_every: cfg.get_usize("train.validation_every", 5)?,
        seed,
    })
}

fn backend_from_config(cfg: &Config, noise: &NoiseModel) -> Result<TrainBackend> {
    Ok(match cfg.get_str("backend", "expectation").as_str() {
        "exact" => TrainBackend::Exact,
        "expectation" => TrainBackend::Noisy(noise.clone()),
        "sampled" => {
            TrainBackend::Sampled { noise: noise.clone(), shots: cfg.get_u64("shots", 8192)? }
        }
        other => bail!("unknown backend {other:?} (expected exact, expectation, or sampled)"),
    })
}

fn out_dir(cfg: &Config) -> PathBuf {
    PathBuf::from(cfg.get_str("out", "runs"))
}

/// One training session, fully determined by its cell seed: dataset first,
/// then the network instance, then the initialization stream.
pub struct SessionResult {
    pub final_cost_train: f64,
    pub final_cost_validation: f64,
    pub identity_cost: f64,
    pub epochs_run: usize,
    pub trace: TrainingTrace,
}

#[allow(clippy::too_many_arguments)]
fn run_session(
    kind: &NetworkKind,
    cfg: &Config,
    noise: &NoiseModel,
    cell_seed: u64,
    n_train: usize,
    n_val: usize,
    stop: Option<StopRule>,
) -> Result<SessionResult> {
    let mut rng = SeededRng::new(cell_seed);
    let d = 1usize << kind.register_width();
    let dataset = generate_dataset(d, n_train, n_val, &mut rng)?;
    let spec = kind.build(&mut rng)?;
    let hp = hyper_from_config(cfg, kind, rng.next_u64())?;
    let backend = backend_from_config(cfg, noise)?;
    let started = Instant::now();
    let mut trace = train(&spec, &dataset, &hp, &backend, stop.as_ref())?;
    trace.wall_time_secs = Some(started.elapsed().as_secs_f64());

    let eval_backend = match &backend {
        TrainBackend::Exact => Backend::Exact,
        TrainBackend::Noisy(nm) => Backend::Noisy(nm),
        TrainBackend::Sampled { noise, shots } => {
            Backend::Sampled { noise, shots: *shots, seed: cell_seed ^ 0x5eed }
        }
    };
    let final_cost_validation = if dataset.validation.is_empty() {
        f64::NAN
    } else {
        cost(&spec, &trace.final_params, &dataset.validation, &eval_backend)?.value
    };
    let id_states: Vec<_> = dataset.training.iter().map(|(_, out)| out.clone()).collect();
    let identity = match identity_params(&spec) {
        Ok(_) => identity_cost(&spec, noise, &id_states)?,
        Err(_) => f64::NAN,
    };
    Ok(SessionResult {
        final_cost_train: trace.final_cost_train,
        final_cost_validation,
        identity_cost: identity,
        epochs_run: trace.epochs_run,
        trace,
    })
}

/// Derive one seed per cell in a fixed enumeration order, so the fan-out
/// over worker threads cannot affect results.
fn cell_seeds(master: u64, n: usize) -> Vec<u64> {
    let mut rng = SeededRng::new(master);
    (0..n).map(|_| rng.next_u64()).collect()
}

#[derive(Serialize)]
struct TrainingSummary {
    network: String,
    epochs_run: usize,
    final_cost_train: f64,
    final_cost_validation: f64,
    identity_cost: f64,
}

/// `train`: one session with a full per-epoch trace.
pub fn run_single_training(cfg: &Config) -> Result<()> {
    let kinds = networks_from_config(cfg)?;
    if kinds.len() != 1 {
        bail!("single-training runs one network; set network.type to dqnn or qaoa");
    }
    let kind = &kinds[0];
    let noise = noise_from_config(cfg)?;
    let seed = cfg.get_u64("seed", 42)?;
    let n_train = cfg.get_usize("dataset.n_train", 4)?;
    let n_val = cfg.get_usize("dataset.n_val", 4)?;
    let res = run_session(kind, cfg, &noise, seed, n_train, n_val, None)?;

    let mut csv = CsvWriter::new(cfg, &["epoch", "cost_train", "cost_validation", "cost_identity"]);
    let trace = &res.trace;
    let mut v_ix = 0usize;
    for (i, ct) in trace.cost_train.iter().enumerate() {
        let epoch = i + 1;
        let (cv, ci) = if v_ix < trace.validation_epochs.len() && trace.validation_epochs[v_ix] == epoch
        {
            let cv = fmt_f64(trace.cost_validation[v_ix]);
            let ci = trace.cost_identity.get(v_ix).map(|x| fmt_f64(*x)).unwrap_or_default();
            v_ix += 1;
            (cv, ci)
        } else {
            (String::new(), String::new())
        };
        csv.row(&[epoch.to_string(), fmt_f64(*ct), cv, ci]);
    }
    let dir = out_dir(cfg);
    csv.write(&dir.join("single-training.csv"))?;
    write_json(
        &dir.join("single-training.json"),
        cfg,
        &TrainingSummary {
            network: kind.name().to_string(),
            epochs_run: res.epochs_run,
            final_cost_train: res.final_cost_train,
            final_cost_validation: res.final_cost_validation,
            identity_cost: res.identity_cost,
        },
    )?;
    Ok(())
}

#[derive(Serialize)]
struct GridPointSummary {
    network: String,
    n_train: usize,
    sessions: usize,
    mean_cost_validation: f64,
    std_cost_validation: f64,
    mean_cost_train: f64,
    mean_identity_cost: f64,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, libm_sqrt(var))
}

fn libm_sqrt(x: f64) -> f64 {
    x.sqrt()
}

/// `generalize`: train with `N_T` from a grid, several sessions each, under
/// fixed noise; emit per-session rows and per-`N_T` aggregates.
pub fn run_generalization(cfg: &Config) -> Result<()> {
    let kinds = networks_from_config(cfg)?;
    let noise = noise_from_config(cfg)?;
    let grid = cfg.get_usize_list("dataset.n_train_grid", &[1, 2, 3, 4])?;
    let sessions = cfg.get_usize("sessions", 10)?;
    let n_val = cfg.get_usize("dataset.n_val", 4)?;
    let seed = cfg.get_u64("seed", 42)?;
    if grid.is_empty() || sessions == 0 {
        bail!("empty grid or zero sessions");
    }

    let mut cells: Vec<(usize, usize, usize)> = Vec::new(); // (kind_ix, n_train, session)
    for (ki, _) in kinds.iter().enumerate() {
        for &nt in &grid {
            for s in 0..sessions {
                cells.push((ki, nt, s));
            }
        }
    }
    let seeds = cell_seeds(seed, cells.len());
    let results: Vec<Result<SessionResult>> = cells
        .par_iter()
        .zip(seeds.par_iter())
        .map(|(&(ki, nt, _s), &cell_seed)| {
            run_session(&kinds[ki], cfg, &noise, cell_seed, nt, n_val, None)
        })
        .collect();

    let mut csv = CsvWriter::new(
        cfg,
        &[
            "network",
            "n_train",
            "session",
            "cell_seed",
            "final_cost_train",
            "final_cost_validation",
            "identity_cost",
            "epochs_run",
        ],
    );
    let mut summaries = Vec::new();
    for (ki, kind) in kinds.iter().enumerate() {
        for &nt in &grid {
            let mut cv = Vec::new();
            let mut ct = Vec::new();
            let mut ci = Vec::new();
            for ((cell, cell_seed), res) in cells.iter().zip(&seeds).zip(&results) {
                if cell.0 != ki || cell.1 != nt {
                    continue;
                }
                let r = res.as_ref().map_err(|e| anyhow!("session failed: {e}"))?;
                csv.row(&[
                    kind.name().to_string(),
                    nt.to_string(),
                    cell.2.to_string(),
                    cell_seed.to_string(),
                    fmt_f64(r.final_cost_train),
                    fmt_f64(r.final_cost_validation),
                    fmt_f64(r.identity_cost),
                    r.epochs_run.to_string(),
                ]);
                cv.push(r.final_cost_validation);
                ct.push(r.final_cost_train);
                ci.push(r.identity_cost);
            }
            let (mean_cv, std_cv) = mean_std(&cv);
            summaries.push(GridPointSummary {
                network: kind.name().to_string(),
                n_train: nt,
                sessions,
                mean_cost_validation: mean_cv,
                std_cost_validation: std_cv,
                mean_cost_train: mean_std(&ct).0,
                mean_identity_cost: mean_std(&ci).0,
            });
        }
    }
    let dir = out_dir(cfg);
    csv.write(&dir.join("generalization.csv"))?;
    write_json(&dir.join("generalization.json"), cfg, &summaries)?;
    Ok(())
}

#[derive(Serialize)]
struct SweepPointSummary {
    network: String,
    k: f64,
    sessions: usize,
    mean_cost_train: f64,
    mean_cost_validation: f64,
    mean_identity_cost: f64,
    mean_epochs_run: f64,
}

/// `sweep-noise`: train to validation-cost convergence for each noise scale
/// `k` in the grid.
pub fn run_noise_sweep(cfg: &Config) -> Result<()> {
    let kinds = networks_from_config(cfg)?;
    let base_noise = noise_from_config(cfg)?;
    let k_grid = cfg.get_f64_list("noise.k_grid", &[0.0, 0.25, 0.5, 1.0, 2.0, 4.0])?;
    let sessions = cfg.get_usize("sessions", 5)?;
    let n_train = cfg.get_usize("dataset.n_train", 4)?;
    let n_val = cfg.get_usize("dataset.n_val", 4)?;
    let seed = cfg.get_u64("seed", 42)?;
    let stop = StopRule {
        window: cfg.get_usize("train.convergence_window", 10)?,
        tol: cfg.get_f64("train.convergence_tol", 1e-3)?,
    };
    if k_grid.is_empty() || sessions == 0 {
        bail!("empty grid or zero sessions");
    }

    let mut cells: Vec<(usize, f64, usize)> = Vec::new();
    for (ki, _) in kinds.iter().enumerate() {
        for &k in &k_grid {
            for s in 0..sessions {
                cells.push((ki, k, s));
            }
        }
    }
    let seeds = cell_seeds(seed, cells.len());
    let results: Vec<Result<SessionResult>> = cells
        .par_iter()
        .zip(seeds.par_iter())
        .map(|(&(ki, k, _s), &cell_seed)| {
            let noise = NoiseModel { k, ..base_noise.clone() };
            run_session(&kinds[ki], cfg, &noise, cell_seed, n_train, n_val, Some(stop))
        })
        .collect();

    let mut csv = CsvWriter::new(
        cfg,
        &[
            "network",
            "k",
            "session",
            "cell_seed",
            "final_cost_train",
            "final_cost_validation",
            "identity_cost",
            "epochs_run",
        ],
    );
    let mut summaries = Vec::new();
    for (ki, kind) in kinds.iter().enumerate() {
        for &k in &k_grid {
            let mut ct = Vec::new();
            let mut cv = Vec::new();
            let mut ci = Vec::new();
            let mut ep = Vec::new();
            for ((cell, cell_seed), res) in cells.iter().zip(&seeds).zip(&results) {
                if cell.0 != ki || cell.1 != k {
                    continue;
                }
                let r = res.as_ref().map_err(|e| anyhow!("session failed: {e}"))?;
                csv.row(&[
                    kind.name().to_string(),
                    format!("{k}"),
                    cell.2.to_string(),
                    cell_seed.to_string(),
                    fmt_f64(r.final_cost_train),
                    fmt_f64(r.final_cost_validation),
                    fmt_f64(r.identity_cost),
                    r.epochs_run.to_string(),
                ]);
                ct.push(r.final_cost_train);
                cv.push(r.final_cost_validation);
                ci.push(r.identity_cost);
                ep.push(r.epochs_run as f64);
            }
            summaries.push(SweepPointSummary {
                network: kind.name().to_string(),
                k,
                sessions,
                mean_cost_train: mean_std(&ct).0,
                mean_cost_validation: mean_std(&cv).0,
                mean_identity_cost: mean_std(&ci).0,
                mean_epochs_run: mean_std(&ep).0,
            });
        }
    }
    let dir = out_dir(cfg);
    csv.write(&dir.join("noise-sweep.csv"))?;
    write_json(&dir.join("noise-sweep.json"), cfg, &summaries)?;
    Ok(())
}

#[derive(Serialize)]
struct IdentityCostSummary {
    network: String,
    k: f64,
    sessions: usize,
    mean_identity_cost: f64,
    std_identity_cost: f64,
}

/// `identity-cost`: the noise floor of an ideally trained network, per
/// noise scale, averaged over sessions with fresh Haar states.
pub fn run_identity_cost(cfg: &Config) -> Result<()> {
    let kinds = networks_from_config(cfg)?;
    let base_noise = noise_from_config(cfg)?;
    let k_grid = match cfg.get("noise.k_grid") {
        Some(_) => cfg.get_f64_list("noise.k_grid", &[])?,
        None => vec![cfg.get_f64("noise.k", 1.0)?],
    };
    let sessions = cfg.get_usize("sessions", 5)?;
    let n_states = cfg.get_usize("dataset.n_train", 4)?;
    let seed = cfg.get_u64("seed", 42)?;

    let mut cells: Vec<(usize, f64, usize)> = Vec::new();
    for (ki, _) in kinds.iter().enumerate() {
        for &k in &k_grid {
            for s in 0..sessions {
                cells.push((ki, k, s));
            }
        }
    }
    let seeds = cell_seeds(seed, cells.len());
    let results: Vec<Result<f64>> = cells
        .par_iter()
        .zip(seeds.par_iter())
        .map(|(&(ki, k, _s), &cell_seed)| {
            let mut rng = SeededRng::new(cell_seed);
            let kind = &kinds[ki];
            let m = kind.register_width();
            let states: Vec<_> = (0..n_states)
                .map(|_| qnn_core::qcore::sample_haar_state(m, &mut rng))
                .collect::<qnn_core::Result<_>>()?;
            let spec = kind.build(&mut rng)?;
            let noise = NoiseModel { k, ..base_noise.clone() };
            Ok(identity_cost(&spec, &noise, &states)?)
        })
        .collect();

    let mut csv = CsvWriter::new(cfg, &["network", "k", "session", "cell_seed", "identity_cost"]);
    let mut summaries = Vec::new();
    for (ki, kind) in kinds.iter().enumerate() {
        for &k in &k_grid {
            let mut ci = Vec::new();
            for ((cell, cell_seed), res) in cells.iter().zip(&seeds).zip(&results) {
                if cell.0 != ki || cell.1 != k {
                    continue;
                }
                let v = *res.as_ref().map_err(|e| anyhow!("session failed: {e}"))?;
                csv.row(&[
                    kind.name().to_string(),
                    format!("{k}"),
                    cell.2.to_string(),
                    cell_seed.to_string(),
                    fmt_f64(v),
                ]);
                ci.push(v);
            }
            let (mean, std) = mean_std(&ci);
            summaries.push(IdentityCostSummary {
                network: kind.name().to_string(),
                k,
                sessions,
                mean_identity_cost: mean,
                std_identity_cost: std,
            });
        }
    }
    let dir = out_dir(cfg);
    csv.write(&dir.join("identity-cost.csv"))?;
    write_json(&dir.join("identity-cost.json"), cfg, &summaries)?;
    Ok(())
}

#[derive(Serialize)]
struct CountsJson {
    cnot: usize,
    sx: usize,
    rz: usize,
}

#[derive(Serialize)]
struct TranspileReport {
    network: String,
    total: CountsJson,
    state_prep: CountsJson,
    network_circuit: CountsJson,
    swap_test: CountsJson,
    reconstruction_residual: f64,
    num_qubits: usize,
    num_params: usize,
}

/// `transpile-report`: basis-gate counts for the full evaluation circuit and
/// the exact reconstruction residual, plus the basis-circuit text form.
pub fn run_transpile_report(cfg: &Config) -> Result<()> {
    let kinds = networks_from_config(cfg)?;
    let seed = cfg.get_u64("seed", 42)?;
    let dir = out_dir(cfg);
    let mut reports = Vec::new();
    for kind in &kinds {
        let mut rng = SeededRng::new(seed);
        let d = 1usize << kind.register_width();
        let dataset = generate_dataset(d, 1, 0, &mut rng)?;
        let spec = kind.build(&mut rng)?;
        let params = qnn_core::train::initial_params(&spec, &mut rng);
        let (phi_in, phi_out) = &dataset.training[0];

        let full = full_circuit(&spec, &params, phi_in, phi_out)?;
        let basis = transpile_circuit(&full)?;
        let residual = basis.unitary()?.max_abs_diff(&full.unitary()?);

        // per-part tallies
        let layout = full_circuit_layout(&spec);
        let m = spec.register_width();
        let prep_a = qnn_core::circuits::state_prep_circuit(phi_out, &layout.reg_a)?;
        let in_reg: Vec<usize> = (m..2 * m).collect();
        let prep_b = qnn_core::circuits::state_prep_circuit(phi_in, &in_reg)?;
        let mut prep_counts = transpile_circuit(&prep_a)?.counts();
        let pb = transpile_circuit(&prep_b)?.counts();
        prep_counts.cnot += pb.cnot;
        prep_counts.sx += pb.sx;
        prep_counts.rz += pb.rz;
        let network = match &spec {
            NetworkSpec::Dqnn { layer_widths } => {
                qnn_core::circuits::build_dqnn(layer_widths, &params)?
            }
            NetworkSpec::Qaoa { .. } => qnn_core::circuits::build_qaoa(&spec, &params)?,
        };
        let net_counts = transpile_circuit(&network)?.counts();
        let st = qnn_core::measure::append_swap_test(
            qnn_core::circuits::Circuit::new(layout.total_qubits),
            &layout.reg_a,
            &layout.reg_b,
        )?;
        let st_counts = transpile_circuit(&st)?.counts();

        std::fs::create_dir_all(&dir)?;
        std::fs::write(
            dir.join(format!("transpile-report.{}.txt", kind.name())),
            basis.serialize(),
        )?;
        let total = basis.counts();
        reports.push(TranspileReport {
            network: kind.name().to_string(),
            total: CountsJson { cnot: total.cnot, sx: total.sx, rz: total.rz },
            state_prep: CountsJson {
                cnot: prep_counts.cnot,
                sx: prep_counts.sx,
                rz: prep_counts.rz,
            },
            network_circuit: CountsJson {
                cnot: net_counts.cnot,
                sx: net_counts.sx,
                rz: net_counts.rz,
            },
            swap_test: CountsJson { cnot: st_counts.cnot, sx: st_counts.sx, rz: st_counts.rz },
            reconstruction_residual: residual,
            num_qubits: layout.total_qubits,
            num_params: spec.num_params(),
        });
    }
    write_json(&dir.join("transpile-report.json"), cfg, &reports)?;
    Ok(())
}

/// Dispatch on the `experiment` key.
pub fn run(cfg: &Config) -> Result<()> {
    match cfg.get_str("experiment", "").as_str() {
        "single-training" => run_single_training(cfg),
        "generalization" => run_generalization(cfg),
        "noise-sweep" => run_noise_sweep(cfg),
        "identity-cost" => run_identity_cost(cfg),
        "transpile-report" => run_transpile_report(cfg),
        other => bail!("unknown experiment {other:?}"),
    }
}

