//! Fidelity measurement — exact, expectation-based, and shot-sampled via the
//! destructive swap test — and the training cost.
//!
//! The full evaluation circuit consists of three parts: preparation of the
//! target register in `|φ^out⟩` and the network input register in `|φ^in⟩`,
//! the network circuit itself, and the transversal CNOT+H swap test between
//! the target register and the network's output register, whose parity
//! statistics give the fidelity.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::circuits::{
    build_qaoa, dqnn_layers, state_prep_circuit, Circuit, Gate, GateKind, NetworkSpec,
};
use crate::noise::{execute_noisy, sample_counts, NoiseModel};
use crate::qcore::{fidelity, DensityMatrix, PureState, SeededRng};
use crate::transpile::transpile_circuit;
use crate::{Error, Result};

/// Evaluation mode of a [`CostReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostMode {
    Exact,
    Expectation,
    Sampled { shots: u64 },
}

/// How a cost is evaluated.
#[derive(Debug, Clone)]
pub enum Backend<'a> {
    /// Ideal simulation of the source circuit; state preparation and the
    /// swap test are bypassed and `⟨φ^out|ρ^out|φ^out⟩` is taken directly.
    Exact,
    /// Deterministic noisy expectation: the full circuit is transpiled,
    /// executed as a density matrix with per-gate depolarization, and the
    /// swap-test parity expectation is read off exactly.
    Noisy(&'a NoiseModel),
    /// As `Noisy`, but the parity is estimated from multinomial samples of
    /// the final state; `seed` fixes the shot stream.
    Sampled { noise: &'a NoiseModel, shots: u64, seed: u64 },
}

/// Cost value with its per-training-pair fidelities.
#[derive(Debug, Clone, PartialEq)]
pub struct CostReport {
    pub value: f64,
    pub mode: CostMode,
    pub per_pair: Vec<f64>,
}

impl CostReport {
    fn from_pairs(per_pair: Vec<f64>, mode: CostMode) -> Self {
        let value = per_pair.iter().sum::<f64>() / per_pair.len() as f64;
        Self { value, mode, per_pair }
    }
}

/// Append the destructive swap test: per register pair `i`, a
/// `CNOT(reg_a[i] → reg_b[i])` followed by `H(reg_a[i])`. Measurement is
/// deferred to sampling.
pub fn append_swap_test(mut c: Circuit, reg_a: &[usize], reg_b: &[usize]) -> Result<Circuit> {
    if reg_a.len() != reg_b.len() {
        return Err(Error::DimensionMismatch { expected: reg_a.len(), got: reg_b.len() });
    }
    for a in reg_a {
        if reg_b.contains(a) {
            return Err(Error::DuplicateQubit(*a));
        }
    }
    for i in 0..reg_a.len() {
        c.push(Gate::new(GateKind::Cnot, alloc::vec![reg_a[i], reg_b[i]])?)?;
        c.push(Gate::new(GateKind::H, alloc::vec![reg_a[i]])?)?;
    }
    Ok(c)
}

fn pair_parity(index: usize, n: usize, reg_a: &[usize], reg_b: &[usize]) -> f64 {
    let mut parity = 1.0;
    for i in 0..reg_a.len() {
        let xa = (index >> (n - 1 - reg_a[i])) & 1;
        let xb = (index >> (n - 1 - reg_b[i])) & 1;
        if xa & xb == 1 {
            parity = -parity;
        }
    }
    parity
}

/// Expectation of the swap-test parity observable
/// `E[Π_i (−1)^{x_i·y_i}]` over the computational-basis diagonal of
/// `rho_final` (whose history must already contain the swap-test gates).
/// Noise-free, this equals `Tr(ρ_a ρ_b)` of the pre-test marginals.
pub fn parity_fidelity_expectation(
    rho_final: &DensityMatrix,
    reg_a: &[usize],
    reg_b: &[usize],
) -> Result<f64> {
    if reg_a.len() != reg_b.len() {
        return Err(Error::DimensionMismatch { expected: reg_a.len(), got: reg_b.len() });
    }
    let n = rho_final.num_qubits();
    let mut acc = 0.0;
    for idx in 0..rho_final.dim() {
        acc += rho_final.matrix().get(idx, idx).re * pair_parity(idx, n, reg_a, reg_b);
    }
    Ok(acc)
}

/// Unbiased parity estimator from measured counts:
/// `(1/shots) Σ_outcomes count · Π_i (−1)^{x_i·y_i}`.
pub fn estimate_fidelity_from_counts(
    counts: &BTreeMap<String, u64>,
    reg_a: &[usize],
    reg_b: &[usize],
) -> Result<f64> {
    if counts.is_empty() {
        return Err(Error::EmptyInput("counts"));
    }
    let mut total = 0u64;
    let mut acc = 0.0;
    for (bits, &count) in counts {
        let n = bits.len();
        let mut parity = 1.0;
        let b = bits.as_bytes();
        for i in 0..reg_a.len() {
            if b[reg_a[i]] == b'1' && b[reg_b[i]] == b'1' {
                parity = -parity;
            }
        }
        let _ = n;
        acc += parity * count as f64;
        total += count;
    }
    Ok(acc / total as f64)
}

/// Register layout of the full evaluation circuit.
#[derive(Debug, Clone)]
pub struct FullCircuitLayout {
    pub total_qubits: usize,
    /// Target register holding `|φ^out⟩`.
    pub reg_a: Vec<usize>,
    /// Network output register.
    pub reg_b: Vec<usize>,
}

pub fn full_circuit_layout(spec: &NetworkSpec) -> FullCircuitLayout {
    let m = spec.register_width();
    let total = m + spec.num_network_qubits();
    FullCircuitLayout {
        total_qubits: total,
        reg_a: (0..m).collect(),
        reg_b: (total - m..total).collect(),
    }
}

/// Assemble the full evaluation circuit for one training pair: state
/// preparation for both registers, the network circuit, and the swap test.
pub fn full_circuit(
    spec: &NetworkSpec,
    params: &[f64],
    phi_in: &PureState,
    phi_out: &PureState,
) -> Result<Circuit> {
    spec.check_params(params)?;
    let m = spec.register_width();
    if phi_in.num_qubits() != m || phi_out.num_qubits() != m {
        return Err(Error::DimensionMismatch { expected: m, got: phi_in.num_qubits() });
    }
    let layout = full_circuit_layout(spec);
    let mut c = Circuit::new(layout.total_qubits);
    let prep_out = state_prep_circuit(phi_out, &layout.reg_a)?;
    c.append_shifted(&prep_out, 0)?;
    let in_reg: Vec<usize> = (m..2 * m).collect();
    let prep_in = state_prep_circuit(phi_in, &in_reg)?;
    c.append_shifted(&prep_in, 0)?;
    let network = match spec {
        NetworkSpec::Dqnn { layer_widths } => crate::circuits::build_dqnn(layer_widths, params)?,
        NetworkSpec::Qaoa { .. } => build_qaoa(spec, params)?,
    };
    c.append_shifted(&network, m)?;
    append_swap_test(c, &layout.reg_a, &layout.reg_b)
}

/// The network's ideal output state for a pure input: layered isometry
/// evolution with the spent qubits traced out for the DQNN, plain unitary
/// evolution for QAOA.
pub fn exact_rho_out(
    spec: &NetworkSpec,
    params: &[f64],
    phi_in: &PureState,
) -> Result<DensityMatrix> {
    spec.check_params(params)?;
    match spec {
        NetworkSpec::Qaoa { .. } => {
            let c = build_qaoa(spec, params)?;
            let mut st = phi_in.clone();
            c.apply_to_state(&mut st)?;
            Ok(DensityMatrix::from_pure(&st))
        }
        NetworkSpec::Dqnn { layer_widths } => {
            let (layers, final_u) = dqnn_layers(layer_widths, params)?;
            // stay on the pure-state path until the first partial trace
            let mut pure = Some(phi_in.clone());
            let mut rho: Option<DensityMatrix> = None;
            for layer in &layers {
                let discard: Vec<usize> = (0..layer.in_width).collect();
                if let Some(st) = pure.take() {
                    let mut ext = st.tensor(&PureState::zero_state(layer.out_width));
                    for (g, _) in &layer.gates {
                        ext.apply_unitary(&g.matrix(), &g.qubits)?;
                    }
                    rho = Some(DensityMatrix::from_pure(&ext).partial_trace(&discard)?);
                } else {
                    let mut ext = rho
                        .take()
                        .expect("state present")
                        .tensor(&DensityMatrix::zero_state(layer.out_width));
                    for (g, _) in &layer.gates {
                        ext.apply_unitary(&g.matrix(), &g.qubits)?;
                    }
                    rho = Some(ext.partial_trace(&discard)?);
                }
            }
            let mut out = rho.expect("at least one layer");
            for (g, _) in &final_u {
                out.apply_unitary(&g.matrix(), &g.qubits)?;
            }
            Ok(out)
        }
    }
}

/// Training/validation cost: the mean fidelity between the network's outputs
/// and the target outputs over the given pairs, evaluated per the backend.
pub fn cost(
    spec: &NetworkSpec,
    params: &[f64],
    pairs: &[(PureState, PureState)],
    backend: &Backend<'_>,
) -> Result<CostReport> {
    if pairs.is_empty() {
        return Err(Error::EmptyInput("training pairs"));
    }
    spec.check_params(params)?;
    match backend {
        Backend::Exact => {
            let mut per_pair = Vec::with_capacity(pairs.len());
            for (phi_in, phi_out) in pairs {
                let rho = exact_rho_out(spec, params, phi_in)?;
                per_pair.push(fidelity(phi_out, &rho)?);
            }
            Ok(CostReport::from_pairs(per_pair, CostMode::Exact))
        }
        Backend::Noisy(nm) => {
            let layout = full_circuit_layout(spec);
            let mut per_pair = Vec::with_capacity(pairs.len());
            for (phi_in, phi_out) in pairs {
                let circuit = full_circuit(spec, params, phi_in, phi_out)?;
                let basis = transpile_circuit(&circuit)?;
                let rho0 = DensityMatrix::zero_state(layout.total_qubits);
                let rho = execute_noisy(&basis, nm, &rho0)?;
                let f = parity_fidelity_expectation(&rho, &layout.reg_a, &layout.reg_b)?;
                per_pair.push(f.clamp(0.0, 1.0));
            }
            Ok(CostReport::from_pairs(per_pair, CostMode::Expectation))
        }
        Backend::Sampled { noise, shots, seed } => {
            if *shots == 0 {
                return Err(Error::EmptyInput("shots"));
            }
            let layout = full_circuit_layout(spec);
            let mut rng = SeededRng::new(*seed);
            let mut per_pair = Vec::with_capacity(pairs.len());
            for (phi_in, phi_out) in pairs {
                let circuit = full_circuit(spec, params, phi_in, phi_out)?;
                let basis = transpile_circuit(&circuit)?;
                let rho0 = DensityMatrix::zero_state(layout.total_qubits);
                let rho = execute_noisy(&basis, noise, &rho0)?;
                let counts = sample_counts(&rho, *shots, &mut rng)?;
                let f = estimate_fidelity_from_counts(&counts, &layout.reg_a, &layout.reg_b)?;
                per_pair.push(f.clamp(0.0, 1.0));
            }
            Ok(CostReport::from_pairs(per_pair, CostMode::Sampled { shots: *shots }))
        }
    }
}
