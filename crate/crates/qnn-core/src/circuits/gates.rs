use core::f64::consts::PI;
use num_complex::Complex64;

use crate::qcore::ComplexMatrix;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Canonical two-qubit gate
/// `can(t1,t2,t3) = e^{-i(π/2)t1 X⊗X} e^{-i(π/2)t2 Y⊗Y} e^{-i(π/2)t3 Z⊗Z}`.
///
/// Angles are in SWAP units: `can(½,½,½)` equals SWAP up to a global phase
/// and each argument is 4-periodic up to phase. The three factors commute,
/// so the matrix is assembled directly from the joint eigenbasis (the Bell
/// states), which keeps it unitary to machine precision.
pub fn can_matrix(t1: f64, t2: f64, t3: f64) -> ComplexMatrix {
    // Eigenphases on |Φ+⟩, |Φ−⟩, |Ψ+⟩, |Ψ−⟩ of the commuting sum
    // (π/2)(t1 XX + t2 YY + t3 ZZ):
    let h_phip = PI / 2.0 * (t1 - t2 + t3);
    let h_phim = PI / 2.0 * (-t1 + t2 + t3);
    let h_psip = PI / 2.0 * (t1 + t2 - t3);
    let h_psim = PI / 2.0 * (-t1 - t2 - t3);
    let e = |h: f64| c(libm::cos(-h), libm::sin(-h));
    let (ep, em, qp, qm) = (e(h_phip), e(h_phim), e(h_psip), e(h_psim));
    // project back from the Bell basis: columns/rows ordered |00⟩,|01⟩,|10⟩,|11⟩
    let half = c(0.5, 0.0);
    let mut m = ComplexMatrix::zeros(4, 4);
    // Φ blocks act on span{|00⟩,|11⟩}; Ψ blocks on span{|01⟩,|10⟩}
    m.set(0, 0, (ep + em) * half);
    m.set(0, 3, (ep - em) * half);
    m.set(3, 0, (ep - em) * half);
    m.set(3, 3, (ep + em) * half);
    m.set(1, 1, (qp + qm) * half);
    m.set(1, 2, (qp - qm) * half);
    m.set(2, 1, (qp - qm) * half);
    m.set(2, 2, (qp + qm) * half);
    m
}

/// General single-qubit gate
/// `u(θ, φ, λ) = [[cos(θ/2), -e^{iλ} sin(θ/2)], [e^{iφ} sin(θ/2), e^{i(λ+φ)} cos(θ/2)]]`.
pub fn u_matrix(theta: f64, phi: f64, lam: f64) -> ComplexMatrix {
    let (ct, st) = (libm::cos(theta / 2.0), libm::sin(theta / 2.0));
    let el = c(libm::cos(lam), libm::sin(lam));
    let ef = c(libm::cos(phi), libm::sin(phi));
    let elf = c(libm::cos(lam + phi), libm::sin(lam + phi));
    let mut m = ComplexMatrix::zeros(2, 2);
    m.set(0, 0, c(ct, 0.0));
    m.set(0, 1, -el * st);
    m.set(1, 0, ef * st);
    m.set(1, 1, elf * ct);
    m
}
