//! One-qubit synthesis over {RZ, SX}: ZYZ Euler-angle extraction followed by
//! the two-SX emission
//! `u = e^{iγ} · RZ(φ') · SX · RZ(θ') · SX · RZ(λ')`,
//! with zero- and single-SX short cuts when θ lands on a special value.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use crate::qcore::ComplexMatrix;
use crate::{Error, Result};

use super::BasisGate;
#[cfg(test)]
use super::BasisCircuit;

const ATOL: f64 = 1e-12;

/// Wrap an angle into `[-π, π)`.
pub(crate) fn mod_2pi(angle: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut w = (angle + PI) - libm::floor((angle + PI) / two_pi) * two_pi - PI;
    if (w - PI).abs() < ATOL {
        w = -PI;
    }
    w
}

fn det2(m: &ComplexMatrix) -> Complex64 {
    m.get(0, 0) * m.get(1, 1) - m.get(0, 1) * m.get(1, 0)
}

/// ZYZ angles `(θ, φ, λ, phase)` with `m = e^{i·phase} RZ(φ) RY(θ) RZ(λ)`.
fn params_zyz(m: &ComplexMatrix) -> (f64, f64, f64, f64) {
    let det_arg = det2(m).arg();
    let phase = 0.5 * det_arg;
    let theta = 2.0 * libm::atan2(m.get(1, 0).norm(), m.get(0, 0).norm());
    let ang1 = m.get(1, 1).arg();
    let ang2 = m.get(1, 0).arg();
    (theta, ang1 + ang2 - det_arg, ang1 - ang2, phase)
}

/// Decompose a single-qubit unitary into at most 2 SX and 3 RZ gates plus a
/// global phase. The emitted list is in circuit order; `qubit` is the index
/// stamped on the gates.
pub fn decompose_one_qubit(u: &ComplexMatrix, qubit: usize) -> Result<(Vec<BasisGate>, f64)> {
    u.require_unitary(1e-10)?;
    if u.rows() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: u.rows() });
    }
    let (theta, phi, lam, zyz_phase) = params_zyz(u);
    // reference the phase to the RZ·SX product convention
    let mut phase = zyz_phase - 0.5 * (theta + phi + lam);
    let mut gates = Vec::new();
    let push_rz = |gates: &mut Vec<BasisGate>, phase: &mut f64, angle: f64| {
        let a = mod_2pi(angle);
        if a.abs() > ATOL {
            gates.push(BasisGate::Rz { qubit, angle: a });
            *phase += a / 2.0;
        }
    };

    if theta.abs() < ATOL {
        push_rz(&mut gates, &mut phase, lam + phi);
        return Ok((gates, phase));
    }
    if (theta - PI / 2.0).abs() < ATOL {
        push_rz(&mut gates, &mut phase, lam - PI / 2.0);
        gates.push(BasisGate::Sx { qubit });
        push_rz(&mut gates, &mut phase, phi + PI / 2.0);
        return Ok((gates, phase));
    }
    let (mut theta, mut phi, mut lam) = (theta, phi, lam);
    if (theta - PI).abs() < ATOL {
        phase += lam;
        phi -= lam;
        lam = 0.0;
    }
    if mod_2pi(lam + PI).abs() < ATOL || mod_2pi(phi).abs() < ATOL {
        lam += PI;
        theta = -theta;
        phi += PI;
        phase -= theta;
    }
    theta += PI;
    phi += PI;
    phase -= PI / 2.0;
    push_rz(&mut gates, &mut phase, lam);
    gates.push(BasisGate::Sx { qubit });
    push_rz(&mut gates, &mut phase, theta);
    gates.push(BasisGate::Sx { qubit });
    push_rz(&mut gates, &mut phase, phi);
    Ok((gates, phase))
}
