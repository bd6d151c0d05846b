//! Dense state-vector simulation. Qubit `q` is bit `q` of the basis index.

use num_complex::Complex64;

use super::{Circuit, GateKind};
use crate::error::{QveError, Result};

pub const MAX_SIM_QUBITS: usize = 26;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

/// A gate with its angle already resolved.
#[derive(Debug, Clone, Copy)]
pub(crate) enum BoundOp {
    One(usize, [[Complex64; 2]; 2]),
    Cx(usize, usize),
    Cz(usize, usize),
    Swap(usize, usize),
}

impl BoundOp {
    pub(crate) fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            BoundOp::One(q, _) => (q, None),
            BoundOp::Cx(a, b) | BoundOp::Cz(a, b) | BoundOp::Swap(a, b) => (a, Some(b)),
        }
    }
}

pub(crate) fn bind_ops(c: &Circuit, theta: &[f64]) -> Result<Vec<BoundOp>> {
    c.check_bindings(theta)?;
    c.gates()
        .iter()
        .map(|g| {
            Ok(match g.kind {
                GateKind::CX => BoundOp::Cx(g.qubits[0], g.qubits[1]),
                GateKind::CZ => BoundOp::Cz(g.qubits[0], g.qubits[1]),
                GateKind::SWAP => BoundOp::Swap(g.qubits[0], g.qubits[1]),
                _ => BoundOp::One(g.qubits[0], g.matrix_1q(theta)?),
            })
        })
        .collect()
}

impl StateVector {
    pub fn zero_state(n_qubits: usize) -> Result<Self> {
        Self::basis_state(n_qubits, 0)
    }

    pub fn basis_state(n_qubits: usize, index: u64) -> Result<Self> {
        if n_qubits > MAX_SIM_QUBITS {
            return Err(QveError::ResourceLimit(format!(
                "{n_qubits} qubits exceed the simulator cap of {MAX_SIM_QUBITS}"
            )));
        }
        let dim = 1usize << n_qubits;
        if index as usize >= dim {
            return Err(QveError::invalid(format!("basis index {index} outside {n_qubits} qubits")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index as usize] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if !dim.is_power_of_two() {
            return Err(QveError::invalid(format!("{dim} amplitudes is not a power of two")));
        }
        Ok(StateVector {
            n_qubits: dim.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        let ov: Complex64 = self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum();
        ov.norm_sqr()
    }

    pub fn apply_1q(&mut self, q: usize, m: &[[Complex64; 2]; 2]) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    pub fn apply_cx(&mut self, control: usize, target: usize) {
        let (cb, tb) = (1usize << control, 1usize << target);
        for i in 0..self.amps.len() {
            if i & cb != 0 && i & tb == 0 {
                self.amps.swap(i, i | tb);
            }
        }
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) {
        let mask = (1usize << a) | (1usize << b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *amp = -*amp;
            }
        }
    }

    pub fn apply_swap(&mut self, a: usize, b: usize) {
        let (ab, bb) = (1usize << a, 1usize << b);
        for i in 0..self.amps.len() {
            if i & ab != 0 && i & bb == 0 {
                self.amps.swap(i, i ^ ab ^ bb);
            }
        }
    }

    /// Applies the Pauli letter `p` (1 = X, 2 = Y, 3 = Z) on qubit `q`.
    pub fn apply_pauli_letter(&mut self, q: usize, p: u8) {
        let bit = 1usize << q;
        let i_unit = Complex64::new(0.0, 1.0);
        for i in 0..self.amps.len() {
            match p {
                1 if i & bit == 0 => self.amps.swap(i, i | bit),
                2 if i & bit == 0 => {
                    let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                    self.amps[i] = -i_unit * a1;
                    self.amps[i | bit] = i_unit * a0;
                }
                3 if i & bit != 0 => self.amps[i] = -self.amps[i],
                _ => {}
            }
        }
    }

    pub(crate) fn apply_op(&mut self, op: &BoundOp) {
        match *op {
            BoundOp::One(q, ref m) => self.apply_1q(q, m),
            BoundOp::Cx(a, b) => self.apply_cx(a, b),
            BoundOp::Cz(a, b) => self.apply_cz(a, b),
            BoundOp::Swap(a, b) => self.apply_swap(a, b),
        }
    }

    pub fn apply_circuit(&mut self, c: &Circuit, theta: &[f64]) -> Result<()> {
        if c.n_qubits() != self.n_qubits {
            return Err(QveError::invalid(format!(
                "{}-qubit circuit on a {}-qubit state",
                c.n_qubits(),
                self.n_qubits
            )));
        }
        for op in bind_ops(c, theta)? {
            self.apply_op(&op);
        }
        Ok(())
    }
}

/// Runs `c` on `|0...0>`.
pub fn run_circuit(c: &Circuit, theta: &[f64]) -> Result<StateVector> {
    let mut s = StateVector::zero_state(c.n_qubits())?;
    s.apply_circuit(c, theta)?;
    Ok(s)
}

pub fn run_circuit_from(c: &Circuit, theta: &[f64], initial: StateVector) -> Result<StateVector> {
    let mut s = initial;
    s.apply_circuit(c, theta)?;
    Ok(s)
}
