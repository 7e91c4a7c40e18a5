//! Depolarizing noise model and the noisy density-matrix execution backend.
//!
//! Noise attaches per basis gate: after each ideal gate the state is mixed
//! with the maximally mixed state on the gate's support with probability
//! `λ^g = min(k·λ^g_0, 1)`. The equivalent uniform-Pauli form replaces
//! `λ` by `λ·4^n/(4^n−1)` applied over the non-identity Paulis; the
//! replace-with-mixed form below is the one used throughout.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::qcore::{ComplexMatrix, DensityMatrix, SeededRng};
use crate::transpile::{BasisCircuit, BasisGate};
use crate::{Error, Result};

/// Per-basis-gate depolarization probabilities `λ^g = k·λ^g_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    pub lambda0_cnot: f64,
    pub lambda0_sx: f64,
    pub lambda0_rz: f64,
    /// Scale factor `k ≥ 0`; `k = 1` matches current NISQ gate errors.
    pub k: f64,
}

impl NoiseModel {
    /// The default base-probability table:
    /// `λ^CNOT_0 = 3.14e-2, λ^SX_0 = 1.18e-3, λ^RZ_0 = 0`.
    pub fn nisq_defaults(k: f64) -> Self {
        Self { lambda0_cnot: 3.14e-2, lambda0_sx: 1.18e-3, lambda0_rz: 0.0, k }
    }

    /// A noise-free model.
    pub fn noiseless() -> Self {
        Self::nisq_defaults(0.0)
    }

    pub fn validate(&self) -> Result<()> {
        for &l in [&self.lambda0_cnot, &self.lambda0_sx, &self.lambda0_rz] {
            if !(0.0..=1.0).contains(&l) {
                return Err(Error::InvalidProbability(l));
            }
        }
        if self.k < 0.0 {
            return Err(Error::InvalidProbability(self.k));
        }
        Ok(())
    }

    /// Effective probability for a basis gate, clamped into [0, 1].
    pub fn effective(&self, gate: &BasisGate) -> f64 {
        let l0 = match gate {
            BasisGate::Cnot { .. } => self.lambda0_cnot,
            BasisGate::Sx { .. } => self.lambda0_sx,
            BasisGate::Rz { .. } => self.lambda0_rz,
        };
        (self.k * l0).min(1.0)
    }
}

/// Depolarize the listed qubits:
/// `ρ ← (1−λ)ρ + λ·(Tr_support ρ) ⊗ I/2^n` re-embedded on the support.
/// Trace and Hermiticity are preserved exactly.
pub fn depolarize(rho: &mut DensityMatrix, lambda: f64, qubits: &[usize]) -> Result<()> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidProbability(lambda));
    }
    if lambda == 0.0 {
        return Ok(());
    }
    let n = rho.num_qubits();
    for (i, &q) in qubits.iter().enumerate() {
        if q >= n {
            return Err(Error::QubitOutOfRange { qubit: q, num_qubits: n });
        }
        if qubits[..i].contains(&q) {
            return Err(Error::DuplicateQubit(q));
        }
    }
    // reduced state on the non-support qubits; a 1×1 trace when the support
    // covers the whole register
    let keep_rest = if qubits.len() == n {
        ComplexMatrix::from_vec(1, 1, alloc::vec![rho.trace()])?
    } else {
        rho.partial_trace(qubits)?.matrix().clone()
    };
    // positions (from LSB) of support and rest qubits
    let supp_pos: Vec<usize> = qubits.iter().map(|q| n - 1 - q).collect();
    let rest: Vec<usize> = (0..n).filter(|q| !qubits.contains(q)).collect();
    let rest_pos: Vec<usize> = rest.iter().map(|q| n - 1 - q).collect();
    let dim = rho.dim();
    let ns = qubits.len();
    let mixed_weight = lambda / (1usize << ns) as f64;
    let extract = |idx: usize, pos: &[usize]| -> usize {
        let mut out = 0usize;
        for (j, p) in pos.iter().enumerate() {
            out |= ((idx >> p) & 1) << (pos.len() - 1 - j);
        }
        out
    };
    let mat = rho.matrix_mut();
    for r in 0..dim {
        let rs = extract(r, &supp_pos);
        let rr = extract(r, &rest_pos);
        for c in 0..dim {
            let cs = extract(c, &supp_pos);
            let cr = extract(c, &rest_pos);
            let mut v = mat.get(r, c) * Complex64::new(1.0 - lambda, 0.0);
            if rs == cs {
                v += keep_rest.get(rr, cr) * Complex64::new(mixed_weight, 0.0);
            }
            mat.set(r, c, v);
        }
    }
    Ok(())
}

/// Execute a basis circuit on `rho0`: each gate applies its ideal unitary
/// followed by depolarization of its support with the gate's effective
/// probability. The circuit's global phase has no effect on the state.
pub fn execute_noisy(
    circuit: &BasisCircuit,
    noise: &NoiseModel,
    rho0: &DensityMatrix,
) -> Result<DensityMatrix> {
    noise.validate()?;
    if rho0.num_qubits() != circuit.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: circuit.num_qubits(),
            got: rho0.num_qubits(),
        });
    }
    let mut rho = rho0.clone();
    for gate in circuit.gates() {
        let (m, qs) = gate.matrix_and_qubits();
        rho.apply_unitary(&m, &qs)?;
        let lambda = noise.effective(gate);
        if lambda > 0.0 {
            depolarize(&mut rho, lambda, &qs)?;
        }
    }
    Ok(rho)
}

/// Multinomial sampling of computational-basis outcomes from the diagonal
/// of `rho`. Keys are bitstrings with qubit 0 leftmost; counts sum to
/// `shots`. Deterministic for a fixed rng state.
pub fn sample_counts(
    rho: &DensityMatrix,
    shots: u64,
    rng: &mut SeededRng,
) -> Result<BTreeMap<String, u64>> {
    if shots == 0 {
        return Err(Error::EmptyInput("shots must be >= 1"));
    }
    let dim = rho.dim();
    let n = rho.num_qubits();
    let mut probs: Vec<f64> = (0..dim).map(|i| rho.matrix().get(i, i).re.max(0.0)).collect();
    let total: f64 = probs.iter().sum();
    for p in probs.iter_mut() {
        *p /= total;
    }
    // cumulative inversion per shot keeps the draw order fixed
    let mut cdf = probs;
    for i in 1..dim {
        cdf[i] += cdf[i - 1];
    }
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for _ in 0..shots {
        let x = rng.uniform(0.0, 1.0);
        let idx = cdf.iter().position(|&c| x < c).unwrap_or(dim - 1);
        let mut key = String::with_capacity(n);
        for q in 0..n {
            key.push(if (idx >> (n - 1 - q)) & 1 == 1 { '1' } else { '0' });
        }
        *counts.entry(key).or_insert(0) += 1;
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{sample_haar_state, PureState};

    #[test]
    fn zero_lambda_is_identity_channel() {
        let mut rng = SeededRng::new(1);
        let psi = sample_haar_state(2, &mut rng).unwrap();
        let mut rho = DensityMatrix::from_pure(&psi);
        let before = rho.clone();
        depolarize(&mut rho, 0.0, &[0]).unwrap();
        assert_eq!(rho, before);
    }

    #[test]
    fn full_lambda_on_all_qubits_gives_maximally_mixed() {
        let mut rng = SeededRng::new(2);
        let psi = sample_haar_state(2, &mut rng).unwrap();
        let mut rho = DensityMatrix::from_pure(&psi);
        depolarize(&mut rho, 1.0, &[0, 1]).unwrap();
        assert!(rho.matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-12);
    }

    #[test]
    fn half_lambda_single_qubit_hand_value() {
        // λ=0.5 on |0><0| : diag(0.75, 0.25)
        let mut rho = DensityMatrix::zero_state(1);
        depolarize(&mut rho, 0.5, &[0]).unwrap();
        assert!((rho.matrix().get(0, 0).re - 0.75).abs() < 1e-15);
        assert!((rho.matrix().get(1, 1).re - 0.25).abs() < 1e-15);
    }

    #[test]
    fn depolarize_subset_of_entangled_state() {
        // trace/Hermiticity preserved when the support is entangled with the rest
        let mut rng = SeededRng::new(3);
        let psi = sample_haar_state(3, &mut rng).unwrap();
        let mut rho = DensityMatrix::from_pure(&psi);
        depolarize(&mut rho, 0.3, &[1]).unwrap();
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
        assert!(rho.matrix().hermiticity_deviation() < 1e-12);
        rho.validate().unwrap();
    }

    #[test]
    fn linearity() {
        let mut rng = SeededRng::new(6);
        let p1 = DensityMatrix::from_pure(&sample_haar_state(2, &mut rng).unwrap());
        let p2 = DensityMatrix::from_pure(&sample_haar_state(2, &mut rng).unwrap());
        let alpha = 0.3;
        let mix = DensityMatrix::from_matrix(
            p1.matrix()
                .scale(Complex64::new(alpha, 0.0))
                .add(&p2.matrix().scale(Complex64::new(1.0 - alpha, 0.0))),
        )
        .unwrap();
        let mut lhs = mix.clone();
        depolarize(&mut lhs, 0.4, &[0]).unwrap();
        let mut a = p1.clone();
        depolarize(&mut a, 0.4, &[0]).unwrap();
        let mut b = p2.clone();
        depolarize(&mut b, 0.4, &[0]).unwrap();
        let rhs = a
            .matrix()
            .scale(Complex64::new(alpha, 0.0))
            .add(&b.matrix().scale(Complex64::new(1.0 - alpha, 0.0)));
        assert!(lhs.matrix().max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn composition_law() {
        // depolarize(λa) then depolarize(λb) == depolarize(1-(1-λa)(1-λb))
        let mut rng = SeededRng::new(4);
        let psi = sample_haar_state(2, &mut rng).unwrap();
        let (la, lb) = (0.2, 0.35);
        let mut a = DensityMatrix::from_pure(&psi);
        depolarize(&mut a, la, &[0, 1]).unwrap();
        depolarize(&mut a, lb, &[0, 1]).unwrap();
        let mut b = DensityMatrix::from_pure(&psi);
        depolarize(&mut b, 1.0 - (1.0 - la) * (1.0 - lb), &[0, 1]).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12);
    }

    #[test]
    fn rejects_bad_lambda() {
        let mut rho = DensityMatrix::zero_state(1);
        assert!(depolarize(&mut rho, 1.5, &[0]).is_err());
        assert!(depolarize(&mut rho, -0.1, &[0]).is_err());
    }

    #[test]
    fn single_cnot_hand_computation() {
        // k=1 CNOT on |00><00|: (1-λ)|00><00| + λ I/4
        let mut c = BasisCircuit::new(2);
        c.push(BasisGate::Cnot { control: 0, target: 1 });
        let nm = NoiseModel::nisq_defaults(1.0);
        let out = execute_noisy(&c, &nm, &DensityMatrix::zero_state(2)).unwrap();
        let l = 3.14e-2;
        assert!((out.matrix().get(0, 0).re - (1.0 - l + l / 4.0)).abs() < 1e-12);
        assert!((out.matrix().get(3, 3).re - l / 4.0).abs() < 1e-12);
    }

    #[test]
    fn k_zero_matches_ideal_evolution() {
        let mut rng = SeededRng::new(5);
        let psi = sample_haar_state(2, &mut rng).unwrap();
        let mut c = BasisCircuit::new(2);
        c.push(BasisGate::Sx { qubit: 0 });
        c.push(BasisGate::Cnot { control: 0, target: 1 });
        c.push(BasisGate::Rz { qubit: 1, angle: 0.7 });
        let out =
            execute_noisy(&c, &NoiseModel::noiseless(), &DensityMatrix::from_pure(&psi)).unwrap();
        let mut ideal = psi.clone();
        for g in c.gates() {
            let (m, qs) = g.matrix_and_qubits();
            ideal.apply_unitary(&m, &qs).unwrap();
        }
        assert!(out.matrix().max_abs_diff(DensityMatrix::from_pure(&ideal).matrix()) < 1e-12);
    }

    #[test]
    fn noisy_execution_keeps_state_valid() {
        let mut rng = SeededRng::new(12);
        for _ in 0..50 {
            let psi = sample_haar_state(2, &mut rng).unwrap();
            let mut c = BasisCircuit::new(2);
            for _ in 0..10 {
                match (rng.uniform(0.0, 3.0)) as usize {
                    0 => c.push(BasisGate::Cnot { control: 0, target: 1 }),
                    1 => c.push(BasisGate::Sx { qubit: (rng.uniform(0.0, 2.0)) as usize }),
                    _ => c.push(BasisGate::Rz {
                        qubit: (rng.uniform(0.0, 2.0)) as usize,
                        angle: rng.uniform(-3.0, 3.0),
                    }),
                }
            }
            let out =
                execute_noisy(&c, &NoiseModel::nisq_defaults(1.0), &DensityMatrix::from_pure(&psi))
                    .unwrap();
            out.validate().unwrap();
        }
    }

    #[test]
    fn counts_deterministic_and_complete() {
        let rho = DensityMatrix::maximally_mixed(1);
        let a = sample_counts(&rho, 100_000, &mut SeededRng::new(10)).unwrap();
        let b = sample_counts(&rho, 100_000, &mut SeededRng::new(10)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.values().sum::<u64>(), 100_000);
        // binomial 3σ band: 50000 ± 3·158
        let zeros = *a.get("0").unwrap() as f64;
        assert!((zeros - 50_000.0).abs() < 3.0 * 158.0 + 1.0, "zeros {zeros}");
    }

    #[test]
    fn counts_concentrate_on_basis_state() {
        let rho = DensityMatrix::from_pure(&PureState::zero_state(3));
        let counts = sample_counts(&rho, 512, &mut SeededRng::new(11)).unwrap();
        assert_eq!(counts.len(), 1);
        assert_eq!(*counts.get("000").unwrap(), 512);
    }
}
