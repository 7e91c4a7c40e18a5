//! Three-CNOT synthesis of the canonical gate.
//!
//! The template realizes, for all real `(t1, t2, t3)`,
//!
//! ```text
//! can(t1,t2,t3) = e^{i3π/4} · (RZ(π) ⊗ RZ(π/2))
//!                 · CNOT(q1→q0) · (RZ(πt3 − π/2) ⊗ RY(πt1 + π/2))
//!                 · CNOT(q0→q1) · (I ⊗ RY(−πt2 − π/2))
//!                 · CNOT(q1→q0) · (RZ(π/2) ⊗ I)
//! ```
//!
//! (matrix order; the first tensor slot is q0). The single-qubit rotations
//! carrying the angles are emitted through the ZSX Euler decomposition, so
//! the only two-qubit gates are the three CNOTs.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::qcore::gateconsts::{ry_matrix, rz_matrix};
use crate::Result;

use super::euler::decompose_one_qubit;
use super::BasisGate;

/// Emit `can(t1,t2,t3)` on the qubit pair `(q0, q1)` as basis gates plus a
/// global phase. Exactly three CNOTs, for any angles.
pub fn decompose_canonical(
    t1: f64,
    t2: f64,
    t3: f64,
    q0: usize,
    q1: usize,
) -> Result<(Vec<BasisGate>, f64)> {
    let mut gates = Vec::new();
    let mut phase = 3.0 * PI / 4.0;
    let one_qubit = |gates: &mut Vec<BasisGate>, phase: &mut f64, m, q| -> Result<()> {
        let (gs, ph) = decompose_one_qubit(&m, q)?;
        gates.extend(gs);
        *phase += ph;
        Ok(())
    };

    one_qubit(&mut gates, &mut phase, rz_matrix(FRAC_PI_2), q0)?;
    gates.push(BasisGate::Cnot { control: q1, target: q0 });
    one_qubit(&mut gates, &mut phase, ry_matrix(-PI * t2 - FRAC_PI_2), q1)?;
    gates.push(BasisGate::Cnot { control: q0, target: q1 });
    one_qubit(&mut gates, &mut phase, rz_matrix(PI * t3 - FRAC_PI_2), q0)?;
    one_qubit(&mut gates, &mut phase, ry_matrix(PI * t1 + FRAC_PI_2), q1)?;
    gates.push(BasisGate::Cnot { control: q1, target: q0 });
    one_qubit(&mut gates, &mut phase, rz_matrix(PI), q0)?;
    one_qubit(&mut gates, &mut phase, rz_matrix(FRAC_PI_2), q1)?;
    Ok((gates, phase))
}
