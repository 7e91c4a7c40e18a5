//! Property tests for the simulation and decomposition invariants.

use proptest::prelude::*;

use qnn_core::circuits::{can_matrix, u_matrix, Circuit, Gate, GateKind};
use qnn_core::noise::{depolarize, execute_noisy, NoiseModel};
use qnn_core::qcore::{
    expm_hermitian, fidelity, kron, sample_gue, sample_haar_state, sample_haar_unitary,
    ComplexMatrix, DensityMatrix, SeededRng,
};
use qnn_core::transpile::{kak_decompose, transpile_circuit, BasisGate};

fn max_amp_dev(a: &[num_complex::Complex64], b: &[num_complex::Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Tracing one factor of a product state returns the other.
    #[test]
    fn partial_trace_undoes_kron(seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed);
        let a = sample_haar_state(1, &mut rng).unwrap();
        let b = sample_haar_state(2, &mut rng).unwrap();
        let joint = DensityMatrix::from_pure(&a.tensor(&b));
        let ra = joint.partial_trace(&[1, 2]).unwrap();
        let rb = joint.partial_trace(&[0]).unwrap();
        prop_assert!(ra.matrix().max_abs_diff(DensityMatrix::from_pure(&a).matrix()) < 1e-12);
        prop_assert!(rb.matrix().max_abs_diff(DensityMatrix::from_pure(&b).matrix()) < 1e-12);
    }

    /// e^{-iht} e^{-ihs} = e^{-ih(t+s)}
    #[test]
    fn expm_group_law(seed in any::<u64>(), t in -2.0f64..2.0, s in -2.0f64..2.0) {
        let mut rng = SeededRng::new(seed);
        let h = sample_gue(4, &mut rng).unwrap();
        let prod = expm_hermitian(&h, t).unwrap().matmul(&expm_hermitian(&h, s).unwrap());
        let single = expm_hermitian(&h, t + s).unwrap();
        prop_assert!(prod.max_abs_diff(&single) < 1e-10);
    }

    /// Unitary application preserves the 2-norm of pure states and the
    /// trace/Hermiticity of density matrices.
    #[test]
    fn apply_unitary_preserves_structure(seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed);
        let u = sample_haar_unitary(4, &mut rng).unwrap();
        let mut psi = sample_haar_state(3, &mut rng).unwrap();
        psi.apply_unitary(&u, &[2, 0]).unwrap();
        prop_assert!((psi.norm() - 1.0).abs() < 1e-12);

        let mut rho = DensityMatrix::from_pure(&sample_haar_state(3, &mut rng).unwrap());
        rho.apply_unitary(&u, &[1, 2]).unwrap();
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(rho.matrix().hermiticity_deviation() < 1e-12);
    }

    /// fidelity(φ, UρU†) = fidelity(U†φ, ρ)
    #[test]
    fn fidelity_unitary_covariance(seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed);
        let u = sample_haar_unitary(4, &mut rng).unwrap();
        let phi = sample_haar_state(2, &mut rng).unwrap();
        let mut rho = DensityMatrix::from_pure(&sample_haar_state(2, &mut rng).unwrap());
        depolarize(&mut rho, 0.3, &[0]).unwrap();

        let mut rho_u = rho.clone();
        rho_u.apply_unitary(&u, &[0, 1]).unwrap();
        let lhs = fidelity(&phi, &rho_u).unwrap();

        let mut phi_u = phi.clone();
        phi_u.apply_full(&u.dagger()).unwrap();
        let rhs = fidelity(&phi_u, &rho).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    /// The three canonical-gate factors commute, so any factor ordering
    /// produces the same matrix.
    #[test]
    fn can_factor_order_irrelevant(t1 in -2.0f64..2.0, t2 in -2.0f64..2.0, t3 in -2.0f64..2.0) {
        let m = can_matrix(t1, t2, t3);
        let a = can_matrix(t1, 0.0, 0.0);
        let b = can_matrix(0.0, t2, 0.0);
        let c = can_matrix(0.0, 0.0, t3);
        prop_assert!(a.matmul(&b).matmul(&c).max_abs_diff(&m) < 1e-12);
        prop_assert!(c.matmul(&b).matmul(&a).max_abs_diff(&m) < 1e-12);
    }

    /// Depolarizing is linear in the state.
    #[test]
    fn depolarize_linearity(seed in any::<u64>(), lambda in 0.0f64..1.0, alpha in 0.0f64..1.0) {
        let mut rng = SeededRng::new(seed);
        let p1 = DensityMatrix::from_pure(&sample_haar_state(2, &mut rng).unwrap());
        let p2 = DensityMatrix::from_pure(&sample_haar_state(2, &mut rng).unwrap());
        let mix = DensityMatrix::from_matrix(
            p1.matrix().scale((alpha).into()).add(&p2.matrix().scale((1.0 - alpha).into())),
        ).unwrap();
        let mut lhs = mix;
        depolarize(&mut lhs, lambda, &[1]).unwrap();
        let mut a = p1;
        depolarize(&mut a, lambda, &[1]).unwrap();
        let mut b = p2;
        depolarize(&mut b, lambda, &[1]).unwrap();
        let rhs = a.matrix().scale((alpha).into()).add(&b.matrix().scale((1.0 - alpha).into()));
        prop_assert!(lhs.matrix().max_abs_diff(&rhs) < 1e-12);
    }

    /// KAK of a canonical gate reproduces it and lands in the Weyl chamber.
    #[test]
    fn kak_canonicalizes_random_can(t1 in -2.0f64..2.0, t2 in -2.0f64..2.0, t3 in -2.0f64..2.0) {
        let u = can_matrix(t1, t2, t3);
        let k = kak_decompose(&u).unwrap();
        let (c1, c2, c3) = k.core;
        prop_assert!(c1 >= c2 - 1e-12 && c2 >= c3.abs() - 1e-12 && c1 <= 0.5 + 1e-12);
        prop_assert!(k.reconstruct().max_abs_diff(&u) < 1e-9);
    }

    /// Transpiled random circuits reconstruct their unitaries exactly
    /// (including global phase), and re-transpiling a basis circuit is a
    /// fixed point up to the RZ merges already applied.
    #[test]
    fn transpile_round_trip_and_idempotence(seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed);
        let num_qubits = 2 + (rng.uniform(0.0, 3.0) as usize); // 2..4
        let mut c = Circuit::new(num_qubits);
        let n_gates = 5 + (rng.uniform(0.0, 15.0) as usize);
        for _ in 0..n_gates {
            let q0 = rng.uniform(0.0, num_qubits as f64) as usize;
            let mut q1 = rng.uniform(0.0, num_qubits as f64) as usize;
            while q1 == q0 {
                q1 = rng.uniform(0.0, num_qubits as f64) as usize;
            }
            let kind = match rng.uniform(0.0, 7.0) as usize {
                0 => GateKind::Can(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)),
                1 => GateKind::U1q(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)),
                2 => GateKind::Cnot,
                3 => GateKind::Sx,
                4 => GateKind::Rz(rng.uniform(-3.0, 3.0)),
                5 => GateKind::H,
                _ => GateKind::Fixed(sample_haar_unitary(4, &mut rng).unwrap()),
            };
            let qubits = match kind {
                GateKind::Can(..) | GateKind::Cnot | GateKind::Fixed(_) => vec![q0, q1],
                _ => vec![q0],
            };
            c.push(Gate::new(kind, qubits).unwrap()).unwrap();
        }
        let basis = transpile_circuit(&c).unwrap();
        let dev = basis.unitary().unwrap().max_abs_diff(&c.unitary().unwrap());
        prop_assert!(dev <= 1e-8, "round-trip residual {dev}");

        // idempotence: feed the basis gates back through as source gates
        let mut c2 = Circuit::new(num_qubits);
        for g in basis.gates() {
            match g {
                BasisGate::Cnot { control, target } => {
                    c2.push(Gate::new(GateKind::Cnot, vec![*control, *target]).unwrap()).unwrap()
                }
                BasisGate::Sx { qubit } => {
                    c2.push(Gate::new(GateKind::Sx, vec![*qubit]).unwrap()).unwrap()
                }
                BasisGate::Rz { qubit, angle } => {
                    c2.push(Gate::new(GateKind::Rz(*angle), vec![*qubit]).unwrap()).unwrap()
                }
            }
        }
        let basis2 = transpile_circuit(&c2).unwrap();
        prop_assert_eq!(basis.gates(), basis2.gates());
    }

    /// Noisy execution yields valid density matrices for random circuits.
    #[test]
    fn execute_noisy_keeps_states_physical(seed in any::<u64>(), k in 0.0f64..3.0) {
        let mut rng = SeededRng::new(seed);
        let mut c = Circuit::new(2);
        for _ in 0..8 {
            let q = rng.uniform(0.0, 2.0) as usize;
            match rng.uniform(0.0, 3.0) as usize {
                0 => c.push(Gate::new(GateKind::Cnot, vec![q, 1 - q]).unwrap()).unwrap(),
                1 => c.push(Gate::new(GateKind::Sx, vec![q]).unwrap()).unwrap(),
                _ => c.push(Gate::new(GateKind::U1q(
                    rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)),
                    vec![q]).unwrap()).unwrap(),
            }
        }
        let basis = transpile_circuit(&c).unwrap();
        let nm = NoiseModel::nisq_defaults(k);
        let rho0 = DensityMatrix::from_pure(&sample_haar_state(2, &mut rng).unwrap());
        let out = execute_noisy(&basis, &nm, &rho0).unwrap();
        prop_assert!((out.trace().re - 1.0).abs() < 1e-12);
        out.validate().unwrap();
    }

    /// u gates compose like their matrices.
    #[test]
    fn u_gate_matches_matrix_application(th in -3.0f64..3.0, ph in -3.0f64..3.0, lm in -3.0f64..3.0, seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed);
        let psi = sample_haar_state(1, &mut rng).unwrap();
        let mut a = psi.clone();
        a.apply_unitary(&u_matrix(th, ph, lm), &[0]).unwrap();
        let mut b = psi;
        b.apply_full(&u_matrix(th, ph, lm)).unwrap();
        prop_assert!(max_amp_dev(a.amplitudes(), b.amplitudes()) < 1e-13);
    }

    /// Kronecker product dimensions and the mixed-product identity.
    #[test]
    fn kron_mixed_product(seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed);
        let a = sample_haar_unitary(2, &mut rng).unwrap();
        let b = sample_haar_unitary(2, &mut rng).unwrap();
        let c = sample_haar_unitary(2, &mut rng).unwrap();
        let d = sample_haar_unitary(2, &mut rng).unwrap();
        let lhs = kron(&a, &b).matmul(&kron(&c, &d));
        let rhs = kron(&a.matmul(&c), &b.matmul(&d));
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        prop_assert_eq!(kron(&a, &b).rows(), 4);
    }
}

#[test]
fn complexmatrix_scale_from_f64() {
    // the `.into()` conversions above rely on this
    let m = ComplexMatrix::identity(2).scale(num_complex::Complex64::new(2.0, 0.0));
    assert_eq!(m.get(0, 0).re, 2.0);
}
