//! QAOA circuit builder: alternating exponentials of two fixed Hermitian
//! generators, all acting on the same `m` qubits.

use alloc::vec::Vec;

use crate::qcore::{expm_from_eigh, eigh};
use crate::{Error, Result};

use super::{Circuit, Gate, GateKind, NetworkSpec};

/// Build the QAOA circuit: for `l = 1..=N`, `e^{-iA t_l}` then `e^{-iB τ_l}`,
/// each as a FIXED gate on all `m` qubits. `params = [t1, τ1, ..., tN, τN]`.
pub fn build_qaoa(spec: &NetworkSpec, params: &[f64]) -> Result<Circuit> {
    let NetworkSpec::Qaoa { num_qubits, layer_pairs, generator_a, generator_b } = spec else {
        return Err(Error::Unsupported("build_qaoa requires a QAOA spec"));
    };
    if params.len() != 2 * layer_pairs {
        return Err(Error::WrongParamCount { expected: 2 * layer_pairs, got: params.len() });
    }
    let (wa, qa) = eigh(generator_a)?;
    let (wb, qb) = eigh(generator_b)?;
    let qubits: Vec<usize> = (0..*num_qubits).collect();
    let mut circuit = Circuit::new(*num_qubits);
    for l in 0..*layer_pairs {
        let ua = expm_from_eigh(&wa, &qa, params[2 * l]);
        let ub = expm_from_eigh(&wb, &qb, params[2 * l + 1]);
        circuit.push(Gate::new(GateKind::Fixed(ua), qubits.clone())?)?;
        circuit.push(Gate::new(GateKind::Fixed(ub), qubits.clone())?)?;
    }
    Ok(circuit)
}

/// All-zero times: every exponential is the identity.
pub fn qaoa_identity_params(layer_pairs: usize) -> Vec<f64> {
    alloc::vec![0.0; 2 * layer_pairs]
}
