//! Parameterized gate set and circuit builders for the DQNN and QAOA
//! networks, including identity-parameter construction and state
//! preparation.

mod dqnn;
mod gates;
mod prep;
mod qaoa;
mod spec;

pub use dqnn::{build_dqnn, dqnn_identity_params, DqnnLayer};
pub(crate) use dqnn::dqnn_layers;
pub use gates::{can_matrix, u_matrix};
pub use prep::state_prep_circuit;
pub use qaoa::{build_qaoa, qaoa_identity_params};
pub use spec::{identity_params, NetworkSpec};

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use crate::qcore::{gateconsts, ComplexMatrix, DensityMatrix, PureState};
use crate::{Error, Result};

/// A gate instance bound to qubit indices.
///
/// Canonical-gate parameters are in SWAP units (`can(½,½,½)` is SWAP up to
/// phase); `U1Q` and `RZ` angles are radians.
#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    /// Two-qubit canonical gate `can(t1,t2,t3)`.
    Can(f64, f64, f64),
    /// General single-qubit gate `u(θ, φ, λ)`.
    U1q(f64, f64, f64),
    Cnot,
    Sx,
    Rz(f64),
    H,
    /// An explicit unitary on `log2(dim)` qubits.
    Fixed(ComplexMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: Vec<usize>) -> Result<Self> {
        let arity = match &kind {
            GateKind::Can(..) | GateKind::Cnot => 2,
            GateKind::U1q(..) | GateKind::Sx | GateKind::Rz(_) | GateKind::H => 1,
            GateKind::Fixed(m) => {
                let d = m.rows();
                if !m.is_square() || d == 0 || d & (d - 1) != 0 {
                    return Err(Error::DimensionMismatch { expected: d.next_power_of_two(), got: m.cols() });
                }
                d.trailing_zeros() as usize
            }
        };
        if qubits.len() != arity {
            return Err(Error::DimensionMismatch { expected: arity, got: qubits.len() });
        }
        for (i, q) in qubits.iter().enumerate() {
            if qubits[..i].contains(q) {
                return Err(Error::DuplicateQubit(*q));
            }
        }
        Ok(Self { kind, qubits })
    }

    /// The gate's unitary on its own qubits (first listed qubit = most
    /// significant index bit).
    pub fn matrix(&self) -> ComplexMatrix {
        match &self.kind {
            GateKind::Can(t1, t2, t3) => can_matrix(*t1, *t2, *t3),
            GateKind::U1q(th, ph, lam) => u_matrix(*th, *ph, *lam),
            GateKind::Cnot => gateconsts::cnot_matrix(),
            GateKind::Sx => gateconsts::sqrt_x(),
            GateKind::Rz(a) => gateconsts::rz_matrix(*a),
            GateKind::H => gateconsts::hadamard(),
            GateKind::Fixed(m) => m.clone(),
        }
    }

    fn name(&self) -> &'static str {
        match self.kind {
            GateKind::Can(..) => "CAN",
            GateKind::U1q(..) => "U1Q",
            GateKind::Cnot => "CNOT",
            GateKind::Sx => "SX",
            GateKind::Rz(_) => "RZ",
            GateKind::H => "H",
            GateKind::Fixed(_) => "FIXED",
        }
    }

    fn params(&self) -> Vec<f64> {
        match &self.kind {
            GateKind::Can(a, b, c) | GateKind::U1q(a, b, c) => alloc::vec![*a, *b, *c],
            GateKind::Rz(a) => alloc::vec![*a],
            _ => Vec::new(),
        }
    }
}

/// An ordered gate list over a fixed qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self { num_qubits, gates: Vec::new() }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        for &q in &gate.qubits {
            if q >= self.num_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, num_qubits: self.num_qubits });
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Append another circuit's gates, shifting its qubit indices by `offset`.
    pub fn append_shifted(&mut self, other: &Circuit, offset: usize) -> Result<()> {
        for g in other.gates() {
            let qubits = g.qubits.iter().map(|q| q + offset).collect();
            self.push(Gate::new(g.kind.clone(), qubits)?)?;
        }
        Ok(())
    }

    /// Apply every gate in order to a pure state.
    pub fn apply_to_state(&self, state: &mut PureState) -> Result<()> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch { expected: self.num_qubits, got: state.num_qubits() });
        }
        for g in &self.gates {
            state.apply_unitary(&g.matrix(), &g.qubits)?;
        }
        Ok(())
    }

    /// Apply every gate in order to a density matrix.
    pub fn apply_to_density(&self, rho: &mut DensityMatrix) -> Result<()> {
        if rho.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch { expected: self.num_qubits, got: rho.num_qubits() });
        }
        for g in &self.gates {
            rho.apply_unitary(&g.matrix(), &g.qubits)?;
        }
        Ok(())
    }

    /// The circuit's full unitary, by applying gates to an identity matrix
    /// column by column. Intended for small registers.
    pub fn unitary(&self) -> Result<ComplexMatrix> {
        let dim = 1usize << self.num_qubits;
        let mut u = ComplexMatrix::identity(dim);
        for g in &self.gates {
            let m = g.matrix();
            for cidx in 0..dim {
                let col = (0..dim).map(|r| u.get(r, cidx)).collect();
                let mut st = PureState::raw(self.num_qubits, col);
                st.apply_unitary(&m, &g.qubits)?;
                for r in 0..dim {
                    u.set(r, cidx, st.amplitudes()[r]);
                }
            }
        }
        Ok(u)
    }

    /// Line-oriented text serialization: `GATE q0[,q1] p1,p2,p3` with
    /// 17-significant-digit decimals. `FIXED` gates are not representable.
    pub fn serialize(&self) -> Result<String> {
        let mut out = String::new();
        for g in &self.gates {
            if matches!(g.kind, GateKind::Fixed(_)) {
                return Err(Error::Unsupported("FIXED gates have no text form"));
            }
            let qs: Vec<String> = g.qubits.iter().map(|q| format!("{q}")).collect();
            let ps: Vec<String> = g.params().iter().map(|p| format!("{p:.16e}")).collect();
            let _ = write!(out, "{} {}", g.name(), qs.join(","));
            if !ps.is_empty() {
                let _ = write!(out, " {}", ps.join(","));
            }
            out.push('\n');
        }
        Ok(out)
    }

    /// Parse the text format produced by [`Circuit::serialize`].
    pub fn deserialize(num_qubits: usize, text: &str) -> Result<Circuit> {
        let mut c = Circuit::new(num_qubits);
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let name = fields.next().ok_or(Error::EmptyInput("gate line"))?;
            let qubits: Vec<usize> = fields
                .next()
                .ok_or(Error::EmptyInput("qubit list"))?
                .split(',')
                .map(|s| s.parse().map_err(|_| Error::Unsupported("bad qubit index")))
                .collect::<Result<_>>()?;
            let params: Vec<f64> = match fields.next() {
                Some(ps) => ps
                    .split(',')
                    .map(|s| s.parse().map_err(|_| Error::Unsupported("bad parameter")))
                    .collect::<Result<_>>()?,
                None => Vec::new(),
            };
            let kind = match (name, params.len()) {
                ("CAN", 3) => GateKind::Can(params[0], params[1], params[2]),
                ("U1Q", 3) => GateKind::U1q(params[0], params[1], params[2]),
                ("CNOT", 0) => GateKind::Cnot,
                ("SX", 0) => GateKind::Sx,
                ("RZ", 1) => GateKind::Rz(params[0]),
                ("H", 0) => GateKind::H,
                _ => return Err(Error::Unsupported("unknown gate line")),
            };
            c.push(Gate::new(kind, qubits)?)?;
        }
        Ok(c)
    }
}

