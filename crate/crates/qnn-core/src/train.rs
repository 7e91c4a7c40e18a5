//! Dataset generation, finite-difference gradient ascent, the training
//! loop, and the identity-cost baseline.

use alloc::vec::Vec;

use crate::circuits::{identity_params, NetworkSpec};
use crate::evaluator::NoisyEvaluator;
use crate::measure::{cost, Backend};
use crate::noise::NoiseModel;
use crate::qcore::{sample_haar_unitary, ComplexMatrix, PureState, SeededRng};
use crate::{Error, Result};

/// Training and validation pairs generated from a target unitary.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub target: ComplexMatrix,
    pub training: Vec<(PureState, PureState)>,
    pub validation: Vec<(PureState, PureState)>,
}

impl Dataset {
    /// Build a dataset for an injected target unitary. Input states are the
    /// columns of independently sampled Haar-random unitaries (so each input
    /// is marginally Haar and inputs within a batch of `d` are mutually
    /// orthogonal); outputs are `V·input`. Validation inputs are sampled
    /// independently of training inputs.
    pub fn from_target(
        target: ComplexMatrix,
        n_train: usize,
        n_val: usize,
        rng: &mut SeededRng,
    ) -> Result<Dataset> {
        let d = target.rows();
        if !target.is_square() || d < 2 || d & (d - 1) != 0 {
            return Err(Error::DimensionMismatch { expected: d.next_power_of_two(), got: d });
        }
        let num_qubits = d.trailing_zeros() as usize;
        let sample_inputs = |n: usize, rng: &mut SeededRng| -> Result<Vec<PureState>> {
            let mut states = Vec::with_capacity(n);
            while states.len() < n {
                let frame = sample_haar_unitary(d, rng)?;
                for col in 0..d.min(n - states.len()) {
                    let amps = (0..d).map(|r| frame.get(r, col)).collect();
                    states.push(PureState::raw_normalized(num_qubits, amps));
                }
            }
            Ok(states)
        };
        let make_pairs = |inputs: Vec<PureState>| -> Result<Vec<(PureState, PureState)>> {
            inputs
                .into_iter()
                .map(|s| {
                    let mut out = s.clone();
                    out.apply_full(&target)?;
                    Ok((s, out))
                })
                .collect()
        };
        let training = make_pairs(sample_inputs(n_train, rng)?)?;
        let validation = make_pairs(sample_inputs(n_val, rng)?)?;
        Ok(Dataset { target, training, validation })
    }
}

/// Haar-sampled target plus training/validation pairs.
pub fn generate_dataset(
    d: usize,
    n_train: usize,
    n_val: usize,
    rng: &mut SeededRng,
) -> Result<Dataset> {
    let target = sample_haar_unitary(d, rng)?;
    Dataset::from_target(target, n_train, n_val, rng)
}

/// Learning hyperparameters. `eta` is the ascent rate, `epsilon` the
/// finite-difference step.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperparameters {
    pub eta: f64,
    pub epsilon: f64,
    pub epochs: usize,
    pub validation_every: usize,
    pub seed: u64,
}

impl Hyperparameters {
    pub fn validate(&self) -> Result<()> {
        if self.eta <= 0.0 && self.eta != 0.0 {
            return Err(Error::InvalidProbability(self.eta));
        }
        if self.epsilon <= 0.0 {
            return Err(Error::InvalidProbability(self.epsilon));
        }
        if self.validation_every == 0 {
            return Err(Error::EmptyInput("validation_every"));
        }
        Ok(())
    }
}

/// Early-stop rule on the recorded validation costs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopRule {
    pub window: usize,
    pub tol: f64,
}

/// How the training loop evaluates costs.
#[derive(Debug, Clone)]
pub enum TrainBackend {
    Exact,
    Noisy(NoiseModel),
    Sampled { noise: NoiseModel, shots: u64 },
}

/// Per-epoch training record.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingTrace {
    /// `C_T` at the start of each epoch, one entry per epoch run.
    pub cost_train: Vec<f64>,
    /// Epochs (1-based) at which validation was recorded.
    pub validation_epochs: Vec<usize>,
    pub cost_validation: Vec<f64>,
    /// Identity cost per validation point; empty when identity parameters
    /// are undefined for the architecture.
    pub cost_identity: Vec<f64>,
    pub final_params: Vec<f64>,
    /// `C_T` at the final parameters.
    pub final_cost_train: f64,
    pub epochs_run: usize,
    /// Echo of the configuration that produced this trace.
    pub hyperparameters: Hyperparameters,
    /// Filled by callers that have a clock.
    pub wall_time_secs: Option<f64>,
}

/// Central-difference gradient: component `k` is
/// `[costfn(p + ε·e_k) − costfn(p − ε·e_k)] / (2ε)`; exactly `2·N_p` cost
/// evaluations.
pub fn fd_gradient<F: FnMut(&[f64]) -> f64>(mut costfn: F, p: &[f64], epsilon: f64) -> Vec<f64> {
    let mut grad = Vec::with_capacity(p.len());
    let mut work = p.to_vec();
    for k in 0..p.len() {
        let orig = work[k];
        work[k] = orig + epsilon;
        let plus = costfn(&work);
        work[k] = orig - epsilon;
        let minus = costfn(&work);
        work[k] = orig;
        grad.push((plus - minus) / (2.0 * epsilon));
    }
    grad
}

/// Draw initial parameters: uniform `[0, 2π)` for the DQNN, `[-1, 1]` for
/// QAOA.
pub fn initial_params(spec: &NetworkSpec, rng: &mut SeededRng) -> Vec<f64> {
    let np = spec.num_params();
    match spec {
        NetworkSpec::Dqnn { .. } => {
            (0..np).map(|_| rng.uniform(0.0, 2.0 * core::f64::consts::PI)).collect()
        }
        NetworkSpec::Qaoa { .. } => (0..np).map(|_| rng.uniform(-1.0, 1.0)).collect(),
    }
}

/// Sliding-window convergence test on recorded validation costs: true when
/// the last `window` values span at most `tol`.
pub fn convergence_stop(recorded_validation: &[f64], window: usize, tol: f64) -> bool {
    if window < 2 || recorded_validation.len() < window {
        return false;
    }
    let tail = &recorded_validation[recorded_validation.len() - window..];
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in tail {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    hi - lo <= tol
}

/// Identity cost: the cost of the network at its identity parameters on
/// pairs `(ψ, ψ)` under the noisy backend — a noise-floor estimate of the
/// best attainable cost.
pub fn identity_cost(spec: &NetworkSpec, noise: &NoiseModel, states: &[PureState]) -> Result<f64> {
    let p = identity_params(spec)?;
    let pairs: Vec<_> = states.iter().map(|s| (s.clone(), s.clone())).collect();
    Ok(cost(spec, &p, &pairs, &Backend::Noisy(noise))?.value)
}

/// Train by plain finite-difference gradient ascent:
/// `p ← p + η·∇C_T(p)` per epoch, recording `C_T` each epoch and `C_V`/`C_id`
/// every `validation_every` epochs. With a [`StopRule`], training ends early
/// once the recorded validation costs flatten.
pub fn train(
    spec: &NetworkSpec,
    dataset: &Dataset,
    hp: &Hyperparameters,
    backend: &TrainBackend,
    stop: Option<&StopRule>,
) -> Result<TrainingTrace> {
    hp.validate()?;
    if dataset.training.is_empty() {
        return Err(Error::EmptyInput("training pairs"));
    }
    let mut rng = SeededRng::new(hp.seed);
    let mut params = initial_params(spec, &mut rng);
    let id_params = identity_params(spec).ok();

    let mut trace = TrainingTrace {
        cost_train: Vec::with_capacity(hp.epochs),
        validation_epochs: Vec::new(),
        cost_validation: Vec::new(),
        cost_identity: Vec::new(),
        final_params: Vec::new(),
        final_cost_train: 0.0,
        epochs_run: 0,
        hyperparameters: hp.clone(),
        wall_time_secs: None,
    };

    match backend {
        TrainBackend::Noisy(nm) => {
            let eval = NoisyEvaluator::new(spec, nm)?;
            let train_plans = eval.pair_plans(&dataset.training)?;
            let val_plans = eval.pair_plans(&dataset.validation)?;
            let id_plans = match &id_params {
                Some(_) => {
                    let id_pairs: Vec<_> = dataset
                        .training
                        .iter()
                        .map(|(_, out)| (out.clone(), out.clone()))
                        .collect();
                    Some(eval.pair_plans(&id_pairs)?)
                }
                None => None,
            };
            let c_id = match (&id_params, &id_plans) {
                (Some(ip), Some(plans)) => Some(eval.cost(ip, plans)?),
                _ => None,
            };
            for epoch in 1..=hp.epochs {
                let (c_t, grad) = eval.cost_and_gradient(&params, &train_plans, hp.epsilon)?;
                trace.cost_train.push(c_t);
                ascend(&mut params, &grad, hp.eta);
                trace.epochs_run = epoch;
                if epoch % hp.validation_every == 0 {
                    let c_v = if dataset.validation.is_empty() {
                        0.0
                    } else {
                        eval.cost(&params, &val_plans)?
                    };
                    trace.validation_epochs.push(epoch);
                    trace.cost_validation.push(c_v);
                    if let Some(ci) = c_id {
                        trace.cost_identity.push(ci);
                    }
                    if let Some(rule) = stop {
                        if convergence_stop(&trace.cost_validation, rule.window, rule.tol) {
                            break;
                        }
                    }
                }
            }
            trace.final_cost_train = eval.cost(&params, &train_plans)?;
        }
        TrainBackend::Exact => {
            let c_id_value = match &id_params {
                Some(ip) => {
                    let id_pairs: Vec<_> = dataset
                        .training
                        .iter()
                        .map(|(_, out)| (out.clone(), out.clone()))
                        .collect();
                    Some(cost(spec, ip, &id_pairs, &Backend::Exact)?.value)
                }
                None => None,
            };
            for epoch in 1..=hp.epochs {
                let c_t = cost(spec, &params, &dataset.training, &Backend::Exact)?.value;
                trace.cost_train.push(c_t);
                let grad = fd_gradient(
                    |p| cost(spec, p, &dataset.training, &Backend::Exact).map(|r| r.value).unwrap_or(0.0),
                    &params,
                    hp.epsilon,
                );
                ascend(&mut params, &grad, hp.eta);
                trace.epochs_run = epoch;
                if epoch % hp.validation_every == 0 {
                    let c_v = if dataset.validation.is_empty() {
                        0.0
                    } else {
                        cost(spec, &params, &dataset.validation, &Backend::Exact)?.value
                    };
                    trace.validation_epochs.push(epoch);
                    trace.cost_validation.push(c_v);
                    if let Some(ci) = c_id_value {
                        trace.cost_identity.push(ci);
                    }
                    if let Some(rule) = stop {
                        if convergence_stop(&trace.cost_validation, rule.window, rule.tol) {
                            break;
                        }
                    }
                }
            }
            trace.final_cost_train = cost(spec, &params, &dataset.training, &Backend::Exact)?.value;
        }
        TrainBackend::Sampled { noise, shots } => {
            // device-mimicking mode: every cost evaluation consumes a fresh
            // shot-stream seed from the session rng
            let sampled_cost = |p: &[f64], rng: &mut SeededRng| -> f64 {
                let seed = rng.next_u64();
                cost(spec, p, &dataset.training, &Backend::Sampled { noise, shots: *shots, seed })
                    .map(|r| r.value)
                    .unwrap_or(0.0)
            };
            let id_pairs: Vec<_> = dataset
                .training
                .iter()
                .map(|(_, out)| (out.clone(), out.clone()))
                .collect();
            for epoch in 1..=hp.epochs {
                let c_t = sampled_cost(&params, &mut rng);
                trace.cost_train.push(c_t);
                let grad = fd_gradient(|p| sampled_cost(p, &mut rng), &params, hp.epsilon);
                ascend(&mut params, &grad, hp.eta);
                trace.epochs_run = epoch;
                if epoch % hp.validation_every == 0 {
                    let seed = rng.next_u64();
                    let c_v = if dataset.validation.is_empty() {
                        0.0
                    } else {
                        cost(
                            spec,
                            &params,
                            &dataset.validation,
                            &Backend::Sampled { noise, shots: *shots, seed },
                        )?
                        .value
                    };
                    trace.validation_epochs.push(epoch);
                    trace.cost_validation.push(c_v);
                    if let Some(ip) = &id_params {
                        let seed = rng.next_u64();
                        let ci = cost(
                            spec,
                            ip,
                            &id_pairs,
                            &Backend::Sampled { noise, shots: *shots, seed },
                        )?
                        .value;
                        trace.cost_identity.push(ci);
                    }
                    if let Some(rule) = stop {
                        if convergence_stop(&trace.cost_validation, rule.window, rule.tol) {
                            break;
                        }
                    }
                }
            }
            trace.final_cost_train = sampled_cost(&params, &mut rng);
        }
    }
    trace.final_params = params;
    Ok(trace)
}

fn ascend(params: &mut [f64], grad: &[f64], eta: f64) {
    for (p, g) in params.iter_mut().zip(grad) {
        *p += eta * g;
    }
}
