//! Staged noisy cost evaluator used by the training loop.
//!
//! The full evaluation circuit factorizes: the target register stays
//! unentangled with the network registers until the swap test, and a DQNN
//! layer's input qubits are never touched after the layer. Exploiting both,
//! the circuit is executed as a sequence of small stages (prepare, extend,
//! gate segment, trace), which keeps the density matrices at `2^{m_{l-1}+m_l}`
//! instead of the full-register dimension. Results agree with the monolithic
//! [`crate::measure::cost`] path exactly (up to rounding) under the default
//! noise table; with a nonzero RZ probability they can differ marginally,
//! because the monolithic transpiler merges RZ gates across source-gate
//! boundaries while segments merge only internally.
//!
//! For finite-difference gradients, each source gate is one segment:
//! a forward sweep caches the state entering every segment, a backward sweep
//! (adjoint channel; the depolarizing channel is self-adjoint) caches the
//! observable leaving it, and each parameter shift then re-executes just its
//! own segment.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::circuits::{
    dqnn_layers, state_prep_circuit, Circuit, GateKind, NetworkSpec,
};
use crate::measure::append_swap_test;
use crate::noise::{depolarize, execute_noisy, NoiseModel};
use crate::qcore::{eigh, expm_from_eigh, kron, ComplexMatrix, DensityMatrix, PureState};
use crate::transpile::{transpile_gate, BasisCircuit, BasisGate};
use crate::Result;

/// Rebuild rule for a parameterized segment.
#[derive(Debug, Clone)]
enum SegSource {
    /// u(θ,φ,λ) on one qubit; 3 parameters.
    U1q { qubit: usize },
    /// can(θ1/π, θ2/π, θ3/π) on a qubit pair; 3 radian parameters.
    Can { q0: usize, q1: usize },
    /// `e^{-iA t}` or `e^{-iB τ}` on the whole register; 1 parameter.
    Expm { which_b: bool },
}

#[derive(Debug, Clone)]
struct SegMeta {
    source: SegSource,
    param_start: usize,
    param_count: usize,
    /// active register width (qubits) at this stage
    width: usize,
}

#[derive(Debug, Clone, Copy)]
enum StageOp {
    /// Tensor `|0..0⟩⟨0..0|` of `k` qubits onto the least significant side.
    Extend(usize),
    /// Trace out the first `k` qubits.
    Trace(usize),
    /// Run segment `i`.
    Seg(usize),
}

/// Per-pair cached data: the noisily prepared input state and the
/// target-contracted, back-evolved parity observable on the output register.
pub(crate) struct PairPlan {
    rho_in: DensityMatrix,
    net_obs: ComplexMatrix,
}

pub(crate) struct NoisyEvaluator {
    noise: NoiseModel,
    stages: Vec<StageOp>,
    segs: Vec<SegMeta>,
    widths: Option<Vec<usize>>,
    qaoa_eig: Option<(Vec<f64>, ComplexMatrix, Vec<f64>, ComplexMatrix)>,
    /// transpiled swap-test block on 2m qubits
    swap_test: BasisCircuit,
    m: usize,
}

impl NoisyEvaluator {
    pub fn new(spec: &NetworkSpec, noise: &NoiseModel) -> Result<Self> {
        noise.validate()?;
        let m = spec.register_width();
        let mut segs = Vec::new();
        let mut stages = Vec::new();
        let mut widths = None;
        let mut qaoa_eig = None;
        match spec {
            NetworkSpec::Dqnn { layer_widths } => {
                let zero = alloc::vec![0.0; spec.num_params()];
                let (layers, final_u) = dqnn_layers(layer_widths, &zero)?;
                for layer in &layers {
                    stages.push(StageOp::Extend(layer.out_width));
                    let w = layer.in_width + layer.out_width;
                    for (g, at) in &layer.gates {
                        let source = match &g.kind {
                            GateKind::U1q(..) => SegSource::U1q { qubit: g.qubits[0] },
                            GateKind::Can(..) => {
                                SegSource::Can { q0: g.qubits[0], q1: g.qubits[1] }
                            }
                            _ => unreachable!("dqnn layers contain only u and can gates"),
                        };
                        stages.push(StageOp::Seg(segs.len()));
                        segs.push(SegMeta { source, param_start: *at, param_count: 3, width: w });
                    }
                    stages.push(StageOp::Trace(layer.in_width));
                }
                for (g, at) in &final_u {
                    stages.push(StageOp::Seg(segs.len()));
                    segs.push(SegMeta {
                        source: SegSource::U1q { qubit: g.qubits[0] },
                        param_start: *at,
                        param_count: 3,
                        width: m,
                    });
                }
                widths = Some(layer_widths.clone());
            }
            NetworkSpec::Qaoa { layer_pairs, generator_a, generator_b, .. } => {
                let (wa, qa) = eigh(generator_a)?;
                let (wb, qb) = eigh(generator_b)?;
                qaoa_eig = Some((wa, qa, wb, qb));
                for l in 0..*layer_pairs {
                    stages.push(StageOp::Seg(segs.len()));
                    segs.push(SegMeta {
                        source: SegSource::Expm { which_b: false },
                        param_start: 2 * l,
                        param_count: 1,
                        width: m,
                    });
                    stages.push(StageOp::Seg(segs.len()));
                    segs.push(SegMeta {
                        source: SegSource::Expm { which_b: true },
                        param_start: 2 * l + 1,
                        param_count: 1,
                        width: m,
                    });
                }
            }
        }
        let reg_a: Vec<usize> = (0..m).collect();
        let reg_b: Vec<usize> = (m..2 * m).collect();
        let st = append_swap_test(Circuit::new(2 * m), &reg_a, &reg_b)?;
        let swap_test = crate::transpile::transpile_circuit(&st)?;
        Ok(Self { noise: noise.clone(), stages, segs, widths, qaoa_eig, swap_test, m })
    }

    fn build_seg(&self, seg: &SegMeta, params: &[f64]) -> Result<Vec<BasisGate>> {
        let mut out = BasisCircuit::new(seg.width);
        let p = &params[seg.param_start..seg.param_start + seg.param_count];
        match &seg.source {
            SegSource::U1q { qubit } => {
                transpile_gate(&mut out, &GateKind::U1q(p[0], p[1], p[2]), &[*qubit])?;
            }
            SegSource::Can { q0, q1 } => {
                let pi = core::f64::consts::PI;
                transpile_gate(&mut out, &GateKind::Can(p[0] / pi, p[1] / pi, p[2] / pi), &[*q0, *q1])?;
            }
            SegSource::Expm { which_b } => {
                let (wa, qa, wb, qb) = self.qaoa_eig.as_ref().expect("qaoa eigendecompositions");
                let u = if *which_b {
                    expm_from_eigh(wb, qb, p[0])
                } else {
                    expm_from_eigh(wa, qa, p[0])
                };
                let qubits: Vec<usize> = (0..seg.width).collect();
                transpile_gate(&mut out, &GateKind::Fixed(u), &qubits)?;
            }
        }
        out.merge_rz();
        Ok(out.gates().to_vec())
    }

    fn apply_seg(&self, gates: &[BasisGate], rho: &mut DensityMatrix) -> Result<()> {
        for g in gates {
            let (mat, qs) = g.matrix_and_qubits();
            rho.apply_unitary(&mat, &qs)?;
            let lambda = self.noise.effective(g);
            if lambda > 0.0 {
                depolarize(rho, lambda, &qs)?;
            }
        }
        Ok(())
    }

    /// Adjoint channel of a segment applied to an observable. The
    /// depolarizing channel is self-adjoint, so only the gate conjugation
    /// flips and the order reverses.
    fn apply_seg_adjoint(&self, gates: &[BasisGate], obs: &mut DensityMatrix) -> Result<()> {
        for g in gates.iter().rev() {
            let (mat, qs) = g.matrix_and_qubits();
            let lambda = self.noise.effective(g);
            if lambda > 0.0 {
                depolarize(obs, lambda, &qs)?;
            }
            obs.apply_unitary(&mat.dagger(), &qs)?;
        }
        Ok(())
    }

    /// Prepare the per-pair inputs: noisy `φ_in` preparation on the input
    /// register and the parity observable pulled back through the noisy
    /// swap test and contracted with the noisy `φ_out` target state.
    pub fn pair_plan(&self, phi_in: &PureState, phi_out: &PureState) -> Result<PairPlan> {
        let m = self.m;
        let in_width = self.widths.as_ref().map_or(m, |w| w[0]);
        debug_assert_eq!(in_width, m);
        let reg: Vec<usize> = (0..m).collect();
        let prep_in = crate::transpile::transpile_circuit(&state_prep_circuit(phi_in, &reg)?)?;
        let rho_in = execute_noisy(&prep_in, &self.noise, &DensityMatrix::zero_state(m))?;
        let prep_out = crate::transpile::transpile_circuit(&state_prep_circuit(phi_out, &reg)?)?;
        let rho_t = execute_noisy(&prep_out, &self.noise, &DensityMatrix::zero_state(m))?;

        // parity observable on the 2m swap-test qubits, pulled back
        let dim2 = 1usize << (2 * m);
        let mut parity = ComplexMatrix::zeros(dim2, dim2);
        for idx in 0..dim2 {
            let mut sign = 1.0;
            for i in 0..m {
                let xa = (idx >> (2 * m - 1 - i)) & 1;
                let xb = (idx >> (m - 1 - i)) & 1;
                if xa & xb == 1 {
                    sign = -sign;
                }
            }
            parity.set(idx, idx, Complex64::new(sign, 0.0));
        }
        let mut obs = DensityMatrix::from_matrix(parity)?;
        self.apply_seg_adjoint(self.swap_test.gates(), &mut obs)?;
        // contract the target register: N[o'][o] = Σ_{t,t'} ρ_t[t][t'] O[(t',o')][(t,o)]
        let dm = 1usize << m;
        let mut net_obs = ComplexMatrix::zeros(dm, dm);
        for op in 0..dm {
            for o in 0..dm {
                let mut acc = Complex64::ZERO;
                for t in 0..dm {
                    for tp in 0..dm {
                        acc += rho_t.matrix().get(t, tp)
                            * obs.matrix().get(tp * dm + op, t * dm + o);
                    }
                }
                net_obs.set(op, o, acc);
            }
        }
        Ok(PairPlan { rho_in, net_obs })
    }

    /// Build plans for a whole pair list.
    pub fn pair_plans(&self, pairs: &[(PureState, PureState)]) -> Result<Vec<PairPlan>> {
        pairs.iter().map(|(i, o)| self.pair_plan(i, o)).collect()
    }

    fn trace_with_obs(obs: &ComplexMatrix, rho: &DensityMatrix) -> f64 {
        let d = obs.rows();
        let mut acc = Complex64::ZERO;
        for r in 0..d {
            for c in 0..d {
                acc += rho.matrix().get(r, c) * obs.get(c, r);
            }
        }
        acc.re
    }

    /// Cost of one pair (forward only).
    fn pair_cost(&self, params: &[f64], plan: &PairPlan) -> Result<f64> {
        let mut rho = plan.rho_in.clone();
        for op in &self.stages {
            match op {
                StageOp::Extend(k) => rho = rho.tensor(&DensityMatrix::zero_state(*k)),
                StageOp::Trace(k) => {
                    let discard: Vec<usize> = (0..*k).collect();
                    rho = rho.partial_trace(&discard)?;
                }
                StageOp::Seg(i) => {
                    let gates = self.build_seg(&self.segs[*i], params)?;
                    self.apply_seg(&gates, &mut rho)?;
                }
            }
        }
        Ok(Self::trace_with_obs(&plan.net_obs, &rho))
    }

    /// Mean cost over pairs, each pair clamped into [0, 1].
    pub fn cost(&self, params: &[f64], plans: &[PairPlan]) -> Result<f64> {
        let mut acc = 0.0;
        for plan in plans {
            acc += self.pair_cost(params, plan)?.clamp(0.0, 1.0);
        }
        Ok(acc / plans.len() as f64)
    }

    /// Mean cost and its central-difference gradient, using per-segment
    /// checkpoints so each parameter shift re-executes only its own segment.
    pub fn cost_and_gradient(
        &self,
        params: &[f64],
        plans: &[PairPlan],
        epsilon: f64,
    ) -> Result<(f64, Vec<f64>)> {
        let np = params.len();
        let mut grad = alloc::vec![0.0; np];
        let mut value = 0.0;
        let mut shifted = params.to_vec();
        for plan in plans {
            // forward with checkpoints
            let mut checkpoints: Vec<Option<DensityMatrix>> = alloc::vec![None; self.segs.len()];
            let mut rho = plan.rho_in.clone();
            let mut base_gates: Vec<Vec<BasisGate>> = alloc::vec![Vec::new(); self.segs.len()];
            for op in &self.stages {
                match op {
                    StageOp::Extend(k) => rho = rho.tensor(&DensityMatrix::zero_state(*k)),
                    StageOp::Trace(k) => {
                        let discard: Vec<usize> = (0..*k).collect();
                        rho = rho.partial_trace(&discard)?;
                    }
                    StageOp::Seg(i) => {
                        checkpoints[*i] = Some(rho.clone());
                        let gates = self.build_seg(&self.segs[*i], params)?;
                        self.apply_seg(&gates, &mut rho)?;
                        base_gates[*i] = gates;
                    }
                }
            }
            value += Self::trace_with_obs(&plan.net_obs, &rho).clamp(0.0, 1.0);

            // backward with observable checkpoints
            let mut obs_after: Vec<Option<DensityMatrix>> = alloc::vec![None; self.segs.len()];
            let mut obs = DensityMatrix::from_matrix(plan.net_obs.clone())?;
            for op in self.stages.iter().rev() {
                match op {
                    StageOp::Extend(k) => {
                        // adjoint of extension: select the zero block of the
                        // k least significant qubits
                        let old = obs.matrix();
                        let dnew = old.rows() >> k;
                        let mut m2 = ComplexMatrix::zeros(dnew, dnew);
                        for r in 0..dnew {
                            for c in 0..dnew {
                                m2.set(r, c, old.get(r << k, c << k));
                            }
                        }
                        obs = DensityMatrix::from_matrix(m2)?;
                    }
                    StageOp::Trace(k) => {
                        // adjoint of trace-out-first: tensor an identity in front
                        let ident = ComplexMatrix::identity(1 << k);
                        obs = DensityMatrix::from_matrix(kron(&ident, obs.matrix()))?;
                    }
                    StageOp::Seg(i) => {
                        obs_after[*i] = Some(obs.clone());
                        self.apply_seg_adjoint(&base_gates[*i], &mut obs)?;
                    }
                }
            }

            // parameter shifts: re-run only the owning segment
            for (i, seg) in self.segs.iter().enumerate() {
                let rho_b = checkpoints[i].as_ref().expect("forward checkpoint");
                let obs_a = obs_after[i].as_ref().expect("backward checkpoint");
                for j in 0..seg.param_count {
                    let k = seg.param_start + j;
                    let orig = shifted[k];
                    shifted[k] = orig + epsilon;
                    let gates = self.build_seg(seg, &shifted)?;
                    let mut r = rho_b.clone();
                    self.apply_seg(&gates, &mut r)?;
                    let plus = Self::trace_with_obs(obs_a.matrix(), &r).clamp(0.0, 1.0);
                    shifted[k] = orig - epsilon;
                    let gates = self.build_seg(seg, &shifted)?;
                    let mut r = rho_b.clone();
                    self.apply_seg(&gates, &mut r)?;
                    let minus = Self::trace_with_obs(obs_a.matrix(), &r).clamp(0.0, 1.0);
                    shifted[k] = orig;
                    grad[k] += (plus - minus) / (2.0 * epsilon);
                }
            }
        }
        let n = plans.len() as f64;
        for g in grad.iter_mut() {
            *g /= n;
        }
        Ok((value / n, grad))
    }
}
