//! State-preparation fragments: map `|0...0⟩` on the target qubits to a
//! given one- or two-qubit state, up to global phase.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::qcore::{ComplexMatrix, PureState};
use crate::{Error, Result};

use super::{Circuit, Gate, GateKind};

/// Angles `(θ, φ, λ, α)` with `m = e^{iα} u(θ, φ, λ)` for a 2×2 unitary.
fn u_angles_from_unitary(m: &ComplexMatrix) -> (f64, f64, f64, f64) {
    let m00 = m.get(0, 0);
    let m01 = m.get(0, 1);
    let m10 = m.get(1, 0);
    let m11 = m.get(1, 1);
    let theta = 2.0 * libm::atan2(m10.norm(), m00.norm());
    let alpha = if m00.norm() > 1e-10 { m00.arg() } else { m10.arg() };
    let phi = if m10.norm() > 1e-10 { m10.arg() - alpha } else { 0.0 };
    let lam = if m01.norm() > 1e-10 {
        (-m01).arg() - alpha
    } else if m11.norm() > 1e-10 {
        m11.arg() - alpha - phi
    } else {
        0.0
    };
    (theta, phi, lam, alpha)
}

/// Gate sequence preparing `psi` from `|0...0⟩` on `target_qubits`, exact up
/// to global phase. One qubit: a single u gate. Two qubits: a u gate
/// carrying the Schmidt angle, a CNOT, and one u gate per qubit rotating
/// into the Schmidt bases (all phases folded into the local unitaries'
/// dropped global phases).
pub fn state_prep_circuit(psi: &PureState, target_qubits: &[usize]) -> Result<Circuit> {
    let m = psi.num_qubits();
    if target_qubits.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: target_qubits.len() });
    }
    let width = target_qubits.iter().max().map_or(0, |q| q + 1);
    let mut c = Circuit::new(width);
    match m {
        1 => {
            let a = psi.amplitudes()[0];
            let b = psi.amplitudes()[1];
            let theta = 2.0 * libm::atan2(b.norm(), a.norm());
            let phi = if b.norm() > 1e-12 { b.arg() - a.arg() } else { 0.0 };
            c.push(Gate::new(GateKind::U1q(theta, phi, 0.0), alloc::vec![target_qubits[0]])?)?;
        }
        2 => {
            let (qa, qb) = (target_qubits[0], target_qubits[1]);
            // Schmidt decomposition via the 2×2 eigendecomposition of M†M,
            // where M is psi reshaped with qa as row index.
            let amp = psi.amplitudes();
            let mmat = ComplexMatrix::from_vec(2, 2, amp.to_vec())?;
            let gram = mmat.dagger().matmul(&mmat);
            let (w, v) = crate::qcore::eigh(&gram)?;
            // descending singular values
            let s0 = libm::sqrt(w[1].max(0.0));
            let s1 = libm::sqrt(w[0].max(0.0));
            let v0: Vec<Complex64> = alloc::vec![v.get(0, 1), v.get(1, 1)];
            let v1: Vec<Complex64> = alloc::vec![v.get(0, 0), v.get(1, 0)];
            let mv = |vk: &[Complex64]| -> Vec<Complex64> {
                alloc::vec![
                    mmat.get(0, 0) * vk[0] + mmat.get(0, 1) * vk[1],
                    mmat.get(1, 0) * vk[0] + mmat.get(1, 1) * vk[1],
                ]
            };
            let u0: Vec<Complex64> = {
                let t = mv(&v0);
                alloc::vec![t[0] / Complex64::new(s0, 0.0), t[1] / Complex64::new(s0, 0.0)]
            };
            let u1: Vec<Complex64> = if s1 > 1e-9 {
                let t = mv(&v1);
                alloc::vec![t[0] / Complex64::new(s1, 0.0), t[1] / Complex64::new(s1, 0.0)]
            } else {
                // orthonormal complement of u0
                alloc::vec![-u0[1].conj(), u0[0].conj()]
            };
            // psi = s0 · u0 ⊗ conj(v0) + s1 · u1 ⊗ conj(v1)
            let schmidt = 2.0 * libm::atan2(s1, s0);
            let left = ComplexMatrix::from_vec(2, 2, alloc::vec![u0[0], u1[0], u0[1], u1[1]])?;
            let right = ComplexMatrix::from_vec(
                2,
                2,
                alloc::vec![v0[0].conj(), v1[0].conj(), v0[1].conj(), v1[1].conj()],
            )?;
            c.push(Gate::new(GateKind::U1q(schmidt, 0.0, 0.0), alloc::vec![qa])?)?;
            c.push(Gate::new(GateKind::Cnot, alloc::vec![qa, qb])?)?;
            let (th, ph, lam, _) = u_angles_from_unitary(&left);
            c.push(Gate::new(GateKind::U1q(th, ph, lam), alloc::vec![qa])?)?;
            let (th, ph, lam, _) = u_angles_from_unitary(&right);
            c.push(Gate::new(GateKind::U1q(th, ph, lam), alloc::vec![qb])?)?;
        }
        _ => return Err(Error::Unsupported("circuit-form state prep supports at most 2 qubits")),
    }
    Ok(c)
}
