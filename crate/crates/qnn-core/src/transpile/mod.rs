//! Decomposition of circuits into the hardware basis {CNOT, SX, RZ}, so
//! noise can attach per basis gate.

mod canonical;
mod euler;
mod kak;

pub use canonical::decompose_canonical;
pub use euler::decompose_one_qubit;
pub use kak::{kak_decompose, KakDecomposition};


use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;
use num_complex::Complex64;

use crate::circuits::{Circuit, GateKind};
use crate::qcore::{gateconsts, ComplexMatrix, PureState};
use crate::{Error, Result};

/// A gate drawn from the transpilation target basis.
#[derive(Debug, Clone, PartialEq)]
pub enum BasisGate {
    Cnot { control: usize, target: usize },
    Sx { qubit: usize },
    Rz { qubit: usize, angle: f64 },
}

impl BasisGate {
    /// The gate's unitary and the qubits it acts on (first = most
    /// significant index bit).
    pub fn matrix_and_qubits(&self) -> (ComplexMatrix, Vec<usize>) {
        match self {
            BasisGate::Cnot { control, target } => {
                (gateconsts::cnot_matrix(), alloc::vec![*control, *target])
            }
            BasisGate::Sx { qubit } => (gateconsts::sqrt_x(), alloc::vec![*qubit]),
            BasisGate::Rz { qubit, angle } => (gateconsts::rz_matrix(*angle), alloc::vec![*qubit]),
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match self {
            BasisGate::Cnot { control, target } => alloc::vec![*control, *target],
            BasisGate::Sx { qubit } | BasisGate::Rz { qubit, .. } => alloc::vec![*qubit],
        }
    }
}

/// Per-kind gate tallies of a [`BasisCircuit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GateCounts {
    pub cnot: usize,
    pub sx: usize,
    pub rz: usize,
}

/// A circuit restricted to {CNOT, SX, RZ} plus an explicit global phase, so
/// reconstruction tests can be exact rather than modulo phase.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisCircuit {
    num_qubits: usize,
    gates: Vec<BasisGate>,
    global_phase: f64,
}

impl BasisCircuit {
    pub fn new(num_qubits: usize) -> Self {
        Self { num_qubits, gates: Vec::new(), global_phase: 0.0 }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[BasisGate] {
        &self.gates
    }

    pub fn global_phase(&self) -> f64 {
        self.global_phase
    }

    pub fn set_global_phase(&mut self, phase: f64) {
        self.global_phase = phase;
    }

    pub fn add_global_phase(&mut self, phase: f64) {
        self.global_phase += phase;
    }

    pub fn push(&mut self, gate: BasisGate) {
        debug_assert!(gate.qubits().iter().all(|&q| q < self.num_qubits));
        self.gates.push(gate);
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = BasisGate>) {
        for g in gates {
            self.push(g);
        }
    }

    pub fn counts(&self) -> GateCounts {
        let mut c = GateCounts::default();
        for g in &self.gates {
            match g {
                BasisGate::Cnot { .. } => c.cnot += 1,
                BasisGate::Sx { .. } => c.sx += 1,
                BasisGate::Rz { .. } => c.rz += 1,
            }
        }
        c
    }

    /// Reconstructed unitary: the ordered product of basis-gate matrices
    /// times `e^{i·global_phase}`.
    pub fn unitary(&self) -> Result<ComplexMatrix> {
        let dim = 1usize << self.num_qubits;
        let mut u = ComplexMatrix::identity(dim);
        for g in &self.gates {
            let (m, qs) = g.matrix_and_qubits();
            for cidx in 0..dim {
                let col = (0..dim).map(|r| u.get(r, cidx)).collect();
                let mut st = PureState::raw(self.num_qubits, col);
                st.apply_unitary(&m, &qs)?;
                for r in 0..dim {
                    u.set(r, cidx, st.amplitudes()[r]);
                }
            }
        }
        let ph = Complex64::new(libm::cos(self.global_phase), libm::sin(self.global_phase));
        Ok(u.scale(ph))
    }

    /// Line-oriented text form, matching [`Circuit::serialize`]'s format.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for g in &self.gates {
            match g {
                BasisGate::Cnot { control, target } => {
                    let _ = writeln!(out, "CNOT {control},{target}");
                }
                BasisGate::Sx { qubit } => {
                    let _ = writeln!(out, "SX {qubit}");
                }
                BasisGate::Rz { qubit, angle } => {
                    let _ = writeln!(out, "RZ {qubit} {angle:.16e}");
                }
            }
        }
        out
    }

    /// Merge adjacent RZ gates on the same qubit (adjacent up to gates on
    /// other qubits) and drop RZ gates whose wrapped angle is zero. The
    /// angle wrap keeps the global phase exact.
    pub fn merge_rz(&mut self) {
        let mut out: Vec<BasisGate> = Vec::with_capacity(self.gates.len());
        let mut pending: Vec<Option<f64>> = alloc::vec![None; self.num_qubits];
        let mut phase = self.global_phase;
        let flush = |q: usize, pending: &mut Vec<Option<f64>>, out: &mut Vec<BasisGate>, phase: &mut f64| {
            if let Some(total) = pending[q].take() {
                let wrapped = euler::mod_2pi(total);
                // RZ(θ) = e^{-i(θ-θ')/2} RZ(θ') for θ' = θ wrapped by 2π steps
                *phase -= (total - wrapped) / 2.0;
                if wrapped.abs() > 1e-12 {
                    out.push(BasisGate::Rz { qubit: q, angle: wrapped });
                }
            }
        };
        for g in core::mem::take(&mut self.gates) {
            match g {
                BasisGate::Rz { qubit, angle } => {
                    *pending[qubit].get_or_insert(0.0) += angle;
                }
                other => {
                    for q in other.qubits() {
                        flush(q, &mut pending, &mut out, &mut phase);
                    }
                    out.push(other);
                }
            }
        }
        for q in 0..self.num_qubits {
            flush(q, &mut pending, &mut out, &mut phase);
        }
        self.gates = out;
        self.global_phase = phase;
    }
}

/// Transpile a source circuit into the {CNOT, SX, RZ} basis. CAN gates use
/// the fixed three-CNOT template; one-qubit gates use the ZSX Euler form;
/// two-qubit FIXED gates go through the KAK decomposition; CNOT/SX/RZ pass
/// through. Adjacent RZ gates are merged afterwards.
pub fn transpile_circuit(circuit: &Circuit) -> Result<BasisCircuit> {
    let mut out = BasisCircuit::new(circuit.num_qubits());
    for gate in circuit.gates() {
        transpile_gate(&mut out, &gate.kind, &gate.qubits)?;
    }
    out.merge_rz();
    Ok(out)
}

/// Append one source gate's basis expansion (no RZ merging).
pub(crate) fn transpile_gate(
    out: &mut BasisCircuit,
    kind: &GateKind,
    qubits: &[usize],
) -> Result<()> {
    match kind {
        GateKind::Cnot => {
            out.push(BasisGate::Cnot { control: qubits[0], target: qubits[1] });
        }
        GateKind::Sx => out.push(BasisGate::Sx { qubit: qubits[0] }),
        GateKind::Rz(a) => out.push(BasisGate::Rz { qubit: qubits[0], angle: *a }),
        GateKind::H => emit_one_qubit(out, &gateconsts::hadamard(), qubits[0])?,
        GateKind::U1q(th, ph, lam) => {
            emit_one_qubit(out, &crate::circuits::u_matrix(*th, *ph, *lam), qubits[0])?
        }
        GateKind::Can(t1, t2, t3) => {
            let (gates, phase) = decompose_canonical(*t1, *t2, *t3, qubits[0], qubits[1])?;
            out.extend(gates);
            out.add_global_phase(phase);
        }
        GateKind::Fixed(m) => match qubits.len() {
            1 => emit_one_qubit(out, m, qubits[0])?,
            2 => {
                let kak = kak_decompose(m)?;
                emit_one_qubit(out, &kak.pre_a, qubits[0])?;
                emit_one_qubit(out, &kak.pre_b, qubits[1])?;
                let (t1, t2, t3) = kak.core;
                let (gates, phase) = decompose_canonical(t1, t2, t3, qubits[0], qubits[1])?;
                out.extend(gates);
                out.add_global_phase(phase);
                emit_one_qubit(out, &kak.post_a, qubits[0])?;
                emit_one_qubit(out, &kak.post_b, qubits[1])?;
                out.add_global_phase(kak.global_phase);
            }
            _ => return Err(Error::Unsupported("FIXED gates on three or more qubits")),
        },
    }
    Ok(())
}

fn emit_one_qubit(out: &mut BasisCircuit, u: &ComplexMatrix, qubit: usize) -> Result<()> {
    let (gates, phase) = decompose_one_qubit(u, qubit)?;
    out.extend(gates);
    out.add_global_phase(phase);
    Ok(())
}
