use alloc::vec::Vec;

use crate::qcore::ComplexMatrix;
use crate::{Error, Result};

use super::{dqnn_identity_params, qaoa_identity_params};

/// Network architecture: either a layered DQNN or a QAOA configuration.
/// Owns the parameter-vector layout (see [`NetworkSpec::num_params`]).
#[derive(Debug, Clone, PartialEq)]
pub enum NetworkSpec {
    /// Dissipative QNN with the given layer widths `[m0, ..., m_{L+1}]`.
    ///
    /// Parameter layout, all angles in radians: for each layer `l = 1..=L+1`,
    /// the u-gate triples of the `m_{l-1}` input qubits, then the
    /// canonical-gate triples of the perceptrons `U^l_1 ... U^l_{m_l}`, each
    /// perceptron listing its `m_{l-1}` gates in input order; after the last
    /// layer, the u-gate triples of the `m` output qubits. A canonical-gate
    /// triple `(θ1,θ2,θ3)` parameterizes `can(θ1/π, θ2/π, θ3/π)`, i.e. the
    /// rotation angles of the XX/YY/ZZ factors.
    Dqnn { layer_widths: Vec<usize> },
    /// QAOA ansatz on `num_qubits` qubits: `layer_pairs` alternating
    /// exponentials of the fixed Hermitian generators. Parameter layout:
    /// `[t1, τ1, ..., tN, τN]` (evolution times).
    Qaoa {
        num_qubits: usize,
        layer_pairs: usize,
        generator_a: ComplexMatrix,
        generator_b: ComplexMatrix,
    },
}

impl NetworkSpec {
    pub fn dqnn(layer_widths: Vec<usize>) -> Result<Self> {
        if layer_widths.len() < 2 {
            return Err(Error::Unsupported("a DQNN needs an input and an output layer"));
        }
        if layer_widths.iter().any(|&w| w == 0) {
            return Err(Error::Unsupported("layer widths must be >= 1"));
        }
        if layer_widths.first() != layer_widths.last() {
            return Err(Error::Unsupported(
                "input and output layers must have equal width (unitary targets only)",
            ));
        }
        Ok(NetworkSpec::Dqnn { layer_widths })
    }

    pub fn qaoa(
        num_qubits: usize,
        layer_pairs: usize,
        generator_a: ComplexMatrix,
        generator_b: ComplexMatrix,
    ) -> Result<Self> {
        let d = 1usize << num_qubits;
        for g in [&generator_a, &generator_b] {
            if g.rows() != d {
                return Err(Error::DimensionMismatch { expected: d, got: g.rows() });
            }
            g.require_hermitian(1e-12)?;
        }
        if layer_pairs == 0 {
            return Err(Error::Unsupported("QAOA needs at least one operator pair"));
        }
        Ok(NetworkSpec::Qaoa { num_qubits, layer_pairs, generator_a, generator_b })
    }

    /// Register width `m`: the qubit count of the states the network maps.
    pub fn register_width(&self) -> usize {
        match self {
            NetworkSpec::Dqnn { layer_widths } => layer_widths[0],
            NetworkSpec::Qaoa { num_qubits, .. } => *num_qubits,
        }
    }

    /// Hilbert-space dimension `d = 2^m` of the learned unitary.
    pub fn dimension(&self) -> usize {
        1 << self.register_width()
    }

    /// Total qubits of the network circuit:
    /// `M = Σ m_l` for the DQNN, `m` for QAOA.
    pub fn num_network_qubits(&self) -> usize {
        match self {
            NetworkSpec::Dqnn { layer_widths } => layer_widths.iter().sum(),
            NetworkSpec::Qaoa { num_qubits, .. } => *num_qubits,
        }
    }

    /// Trainable parameter count:
    /// `N_p = 3m + 3 Σ_{l=1}^{L+1} m_{l-1}(1+m_l)` for the DQNN, `2N` for QAOA.
    pub fn num_params(&self) -> usize {
        match self {
            NetworkSpec::Dqnn { layer_widths } => {
                let m = layer_widths[0];
                let mut acc = 3 * m;
                for l in 1..layer_widths.len() {
                    acc += 3 * layer_widths[l - 1] * (1 + layer_widths[l]);
                }
                acc
            }
            NetworkSpec::Qaoa { layer_pairs, .. } => 2 * layer_pairs,
        }
    }

    /// Check a parameter vector's length against `num_params`.
    pub fn check_params(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.num_params() {
            return Err(Error::WrongParamCount { expected: self.num_params(), got: params.len() });
        }
        Ok(())
    }
}

/// Parameters for which the network's noise-free channel is the identity
/// map: the all-zero vector for QAOA; for the DQNN, zero u-angles with the
/// perceptron-diagonal canonical gates at the SWAP point. Defined for the
/// DQNN only when every layer width equals the register width.
pub fn identity_params(spec: &NetworkSpec) -> Result<Vec<f64>> {
    match spec {
        NetworkSpec::Dqnn { layer_widths } => dqnn_identity_params(layer_widths),
        NetworkSpec::Qaoa { layer_pairs, .. } => Ok(qaoa_identity_params(*layer_pairs)),
    }
}
