//! DQNN circuit builder.
//!
//! Network qubits are numbered layer by layer: layer 0 occupies qubits
//! `0..m0`, layer 1 the next `m1`, and so on. Per layer, u gates act on the
//! incoming qubits first; then the perceptrons `U^l_j` run in the product
//! order `U^l = U^l_{m_l} ... U^l_1` (rightmost acts first), each perceptron
//! placing its canonical gates from input 1 to input `m_{l-1}`. Once a layer
//! has run, its input qubits are never touched again; discarding them
//! realizes the network's partial trace.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::{Error, Result};

use super::{Circuit, Gate, GateKind};

/// One DQNN layer in local coordinates: qubits `0..in_width` are the layer's
/// inputs, `in_width..in_width+out_width` its outputs. Each gate records the
/// index range it consumes from the parameter vector.
#[derive(Debug, Clone)]
pub struct DqnnLayer {
    pub in_width: usize,
    pub out_width: usize,
    /// `(gate, start_index_into_params)`
    pub gates: Vec<(Gate, usize)>,
}

/// The layered gate structure plus the final u gates on the output register
/// (local indices `0..m`, parameter start indices attached).
pub(crate) fn dqnn_layers(
    layer_widths: &[usize],
    params: &[f64],
) -> Result<(Vec<DqnnLayer>, Vec<(Gate, usize)>)> {
    let m = layer_widths[0];
    let expected = {
        let mut acc = 3 * m;
        for l in 1..layer_widths.len() {
            acc += 3 * layer_widths[l - 1] * (1 + layer_widths[l]);
        }
        acc
    };
    if params.len() != expected {
        return Err(Error::WrongParamCount { expected, got: params.len() });
    }
    let mut ix = 0usize;
    let mut take3 = |p: &[f64]| -> (f64, f64, f64, usize) {
        let at = ix;
        ix += 3;
        (p[at], p[at + 1], p[at + 2], at)
    };
    let mut layers = Vec::new();
    for l in 1..layer_widths.len() {
        let m_prev = layer_widths[l - 1];
        let m_l = layer_widths[l];
        let mut gates = Vec::new();
        for i in 0..m_prev {
            let (th, ph, lam, at) = take3(params);
            gates.push((Gate::new(GateKind::U1q(th, ph, lam), alloc::vec![i])?, at));
        }
        for j in 0..m_l {
            for i in 0..m_prev {
                let (a, b, c, at) = take3(params);
                gates.push((
                    Gate::new(GateKind::Can(a / PI, b / PI, c / PI), alloc::vec![i, m_prev + j])?,
                    at,
                ));
            }
        }
        layers.push(DqnnLayer { in_width: m_prev, out_width: m_l, gates });
    }
    let mut final_u = Vec::new();
    for q in 0..m {
        let (th, ph, lam, at) = take3(params);
        final_u.push((Gate::new(GateKind::U1q(th, ph, lam), alloc::vec![q])?, at));
    }
    debug_assert_eq!(ix, params.len());
    Ok((layers, final_u))
}

/// Build the DQNN network circuit for the given layer widths. `params` is
/// the radian-angle vector described on [`super::NetworkSpec::Dqnn`]; its
/// canonical-gate triples divide by π to give SWAP-unit gate arguments.
pub fn build_dqnn(layer_widths: &[usize], params: &[f64]) -> Result<Circuit> {
    let (layers, final_u) = dqnn_layers(layer_widths, params)?;
    let total: usize = layer_widths.iter().sum();
    let mut circuit = Circuit::new(total);
    let mut in_offset = 0usize;
    for layer in &layers {
        for (g, _) in &layer.gates {
            let qubits = g.qubits.iter().map(|q| q + in_offset).collect();
            circuit.push(Gate::new(g.kind.clone(), qubits)?)?;
        }
        in_offset += layer.in_width;
    }
    for (g, _) in &final_u {
        let qubits = g.qubits.iter().map(|q| q + in_offset).collect();
        circuit.push(Gate::new(g.kind.clone(), qubits)?)?;
    }
    Ok(circuit)
}

/// Identity parameters for a DQNN whose layer widths all equal the register
/// width `m`: u-angles zero; for each layer, perceptron `j`'s canonical gate
/// to input qubit `j` at the SWAP point `(π/2, π/2, π/2)` (SWAP units ½),
/// all other canonical gates zero. Each layer then swaps the register onto
/// the next layer's qubits, so the noise-free channel is the identity map.
pub fn dqnn_identity_params(layer_widths: &[usize]) -> Result<Vec<f64>> {
    let m = layer_widths[0];
    if layer_widths.iter().any(|&w| w != m) {
        return Err(Error::IdentityParamsUndefined);
    }
    let mut p = Vec::new();
    for _l in 1..layer_widths.len() {
        p.extend(core::iter::repeat(0.0).take(3 * m));
        for j in 0..m {
            for i in 0..m {
                if i == j {
                    p.extend_from_slice(&[FRAC_PI_2, FRAC_PI_2, FRAC_PI_2]);
                } else {
                    p.extend_from_slice(&[0.0, 0.0, 0.0]);
                }
            }
        }
    }
    p.extend(core::iter::repeat(0.0).take(3 * m));
    Ok(p)
}
