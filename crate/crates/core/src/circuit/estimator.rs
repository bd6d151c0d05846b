//! Shot-based estimation of Pauli-sum expectations.
//!
//! Terms are grouped greedily into qubit-wise commuting sets; each group is
//! measured with its own basis change and the full shot budget. With a noise
//! model, every shot follows a Pauli trajectory: after each gate (including
//! the basis change) an error fires when a uniform draw falls below the
//! gate's depolarizing probability. Gate noise, measurement and readout use
//! separate random streams, so zero noise reproduces the noiseless samples
//! exactly and raising a probability only adds errors to a trajectory.

use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::noise::NoiseModel;
use super::statevector::{bind_ops, BoundOp, StateVector};
use super::{Circuit, Gate, GateKind};
use crate::error::{QveError, Result};
use crate::pauli::{expectation_exact, PauliSum, PauliTerm};
use crate::rng::{stream, Purpose};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorResult {
    pub mean: f64,
    pub std_error: f64,
    pub shots: usize,
    pub seed: u64,
}

/// Greedy first-fit partition into qubit-wise commuting groups, in canonical
/// term order.
pub fn group_commuting_terms(h: &PauliSum) -> Vec<Vec<PauliTerm>> {
    let mut groups: Vec<Vec<PauliTerm>> = Vec::new();
    for t in h.iter() {
        match groups
            .iter_mut()
            .find(|g| g.iter().all(|o| o.qubitwise_commutes_with(&t)))
        {
            Some(g) => g.push(t),
            None => groups.push(vec![t]),
        }
    }
    groups
}

/// Gates rotating each qubit's measured letter onto Z: H for X, RX(pi/2) for Y.
pub fn measurement_basis_change(n_qubits: usize, group: &[PauliTerm]) -> Circuit {
    let mut c = Circuit::new(n_qubits);
    let x = group.iter().fold(0u64, |acc, t| acc | t.x);
    let z = group.iter().fold(0u64, |acc, t| acc | t.z);
    for q in 0..n_qubits {
        let (xb, zb) = ((x >> q) & 1 == 1, (z >> q) & 1 == 1);
        match (xb, zb) {
            (true, false) => {
                c.h(q);
            }
            (true, true) => {
                c.push(Gate::rotation(GateKind::RX, q, FRAC_PI_2.into()))
                    .expect("valid qubit");
            }
            _ => {}
        }
    }
    c
}

/// Per-outcome value of a group's observable after its basis change.
fn outcome_values(n_qubits: usize, group: &[PauliTerm]) -> Vec<f64> {
    (0..1u64 << n_qubits)
        .map(|b| {
            group
                .iter()
                .map(|t| {
                    let sign = if (t.support() & b).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                    t.coeff.re * sign
                })
                .sum()
        })
        .collect()
}

fn cdf(state: &StateVector) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out: Vec<f64> = state
        .amplitudes()
        .iter()
        .map(|a| {
            acc += a.norm_sqr();
            acc
        })
        .collect();
    for v in out.iter_mut() {
        *v /= acc;
    }
    out
}

fn sample(cdf: &[f64], u: f64) -> usize {
    cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
}

/// Uniform in [0, 1) from the high half, Pauli choice from the low half.
#[inline]
fn split_draw(r: u64, choices: u32) -> (f64, u8) {
    let u = (r >> 32) as f64 * (1.0 / 4_294_967_296.0);
    (u, ((r as u32) % choices + 1) as u8)
}

struct GroupRun<'a> {
    ops: Vec<BoundOp>,
    noiseless_cdf: Vec<f64>,
    values: Vec<f64>,
    n_qubits: usize,
    noise: Option<&'a NoiseModel>,
}

impl GroupRun<'_> {
    /// Returns (sum, sum of squares) of per-shot values.
    fn run(&self, shots: usize, seed: u64, group_index: u64) -> (f64, f64) {
        let mut meas = stream(seed, Purpose::Measurement, group_index, 0);
        let gate_noise = self.noise.filter(|m| m.has_gate_noise());
        let readout = self.noise.filter(|m| m.has_readout_noise());
        let mut gate_rng = stream(seed, Purpose::GateNoise, group_index, 0);
        let mut readout_rng = stream(seed, Purpose::Readout, group_index, 0);
        let mut cache: HashMap<Vec<(u32, u8)>, Vec<f64>> = HashMap::new();
        let mut pattern: Vec<(u32, u8)> = Vec::new();
        let (mut sum, mut sum_sq) = (0.0, 0.0);

        for _ in 0..shots {
            let mut outcome;
            match gate_noise {
                Some(m) => {
                    pattern.clear();
                    for (k, op) in self.ops.iter().enumerate() {
                        let (p, choices) = match op.qubits().1 {
                            None => (m.p1, 3),
                            Some(_) => (m.p2, 15),
                        };
                        let (u, pauli) = split_draw(gate_rng.next_u64(), choices);
                        if u < p {
                            pattern.push((k as u32, pauli));
                        }
                    }
                    let u: f64 = meas.random();
                    outcome = if pattern.is_empty() {
                        sample(&self.noiseless_cdf, u)
                    } else {
                        let dist = cache
                            .entry(pattern.clone())
                            .or_insert_with(|| cdf(&self.trajectory(&pattern)));
                        sample(dist, u)
                    };
                }
                None => {
                    let u: f64 = meas.random();
                    outcome = sample(&self.noiseless_cdf, u);
                }
            }
            if let Some(m) = readout {
                for q in 0..self.n_qubits {
                    let u: f64 = readout_rng.random();
                    let bit = (outcome >> q) & 1;
                    let flip = if bit == 0 { u < m.readout01 } else { u < m.readout10 };
                    if flip {
                        outcome ^= 1 << q;
                    }
                }
            }
            let v = self.values[outcome];
            sum += v;
            sum_sq += v * v;
        }
        (sum, sum_sq)
    }

    fn trajectory(&self, pattern: &[(u32, u8)]) -> StateVector {
        let mut s = StateVector::zero_state(self.n_qubits).expect("checked size");
        let mut next = pattern.iter().peekable();
        for (k, op) in self.ops.iter().enumerate() {
            s.apply_op(op);
            while let Some(&&(g, pauli)) = next.peek() {
                if g as usize != k {
                    break;
                }
                let (a, b) = op.qubits();
                s.apply_pauli_letter(a, pauli & 3);
                if let Some(b) = b {
                    s.apply_pauli_letter(b, pauli >> 2);
                }
                next.next();
            }
        }
        s
    }
}

/// Estimates `<psi(theta)|H|psi(theta)>`. `shots = 0` selects exact mode,
/// which cannot be combined with noise.
pub fn estimate(
    c: &Circuit,
    theta: &[f64],
    h: &PauliSum,
    shots: usize,
    seed: u64,
    noise: Option<&NoiseModel>,
) -> Result<EstimatorResult> {
    if h.n_qubits() != c.n_qubits() {
        return Err(QveError::invalid(format!(
            "{}-qubit observable on a {}-qubit circuit",
            h.n_qubits(),
            c.n_qubits()
        )));
    }
    if !h.is_hermitian(1e-10) {
        return Err(QveError::invalid("estimation needs a Hermitian observable"));
    }
    if let Some(m) = noise {
        m.validate()?;
        if shots == 0 {
            return Err(QveError::InvalidCombination(
                "exact (zero-shot) estimation cannot include noise".into(),
            ));
        }
    }
    let n = c.n_qubits();
    let circuit_ops = bind_ops(c, theta)?;
    let mut state = StateVector::zero_state(n)?;
    for op in &circuit_ops {
        state.apply_op(op);
    }
    if shots == 0 {
        let mean = expectation_exact(h, state.amplitudes())?;
        return Ok(EstimatorResult {
            mean,
            std_error: 0.0,
            shots: 0,
            seed,
        });
    }

    let mut mean = 0.0;
    let mut var_sum = 0.0;
    for (gi, group) in group_commuting_terms(h).iter().enumerate() {
        let basis = measurement_basis_change(n, group);
        let basis_ops = bind_ops(&basis, &[])?;
        let mut final_state = state.clone();
        for op in &basis_ops {
            final_state.apply_op(op);
        }
        let mut ops = circuit_ops.clone();
        ops.extend(basis_ops);
        let run = GroupRun {
            ops,
            noiseless_cdf: cdf(&final_state),
            values: outcome_values(n, group),
            n_qubits: n,
            noise,
        };
        let (sum, sum_sq) = run.run(shots, seed, gi as u64);
        let m = sum / shots as f64;
        let var = if shots > 1 {
            ((sum_sq - shots as f64 * m * m) / (shots - 1) as f64).max(0.0)
        } else {
            0.0
        };
        mean += m;
        var_sum += var;
    }
    Ok(EstimatorResult {
        mean,
        std_error: (var_sum / shots as f64).sqrt(),
        shots,
        seed,
    })
}
