//! Parameterized gate circuits, state-vector execution, shot-based
//! estimation with optional trajectory noise, and transpilation.

pub mod estimator;
pub mod noise;
pub mod statevector;
pub mod transpile;

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{QveError, Result};

pub use estimator::{estimate, group_commuting_terms, EstimatorResult};
pub use noise::NoiseModel;
pub use statevector::{run_circuit, run_circuit_from, StateVector};
pub use transpile::{transpile, TranspileResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GateKind {
    X,
    H,
    SqrtX,
    SqrtXdg,
    RX,
    RY,
    RZ,
    CX,
    CZ,
    SWAP,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::CX | GateKind::CZ | GateKind::SWAP => 2,
            _ => 1,
        }
    }

    pub fn is_rotation(self) -> bool {
        matches!(self, GateKind::RX | GateKind::RY | GateKind::RZ)
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::H => "h",
            GateKind::SqrtX => "sx",
            GateKind::SqrtXdg => "sxdg",
            GateKind::RX => "rx",
            GateKind::RY => "ry",
            GateKind::RZ => "rz",
            GateKind::CX => "cx",
            GateKind::CZ => "cz",
            GateKind::SWAP => "swap",
        }
    }
}

/// Rotation angle: a literal, or `scale * theta[index] + offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Angle {
    Fixed(f64),
    Param { index: usize, scale: f64, offset: f64 },
}

impl Angle {
    pub fn param(index: usize) -> Self {
        Angle::Param {
            index,
            scale: 1.0,
            offset: 0.0,
        }
    }

    pub fn scaled(index: usize, scale: f64) -> Self {
        Angle::Param {
            index,
            scale,
            offset: 0.0,
        }
    }

    pub fn resolve(&self, theta: &[f64]) -> Result<f64> {
        match *self {
            Angle::Fixed(v) => Ok(v),
            Angle::Param {
                index,
                scale,
                offset,
            } => theta
                .get(index)
                .map(|t| scale * t + offset)
                .ok_or(QveError::UnboundParameter(index)),
        }
    }

    pub fn negated(&self) -> Angle {
        match *self {
            Angle::Fixed(v) => Angle::Fixed(-v),
            Angle::Param {
                index,
                scale,
                offset,
            } => Angle::Param {
                index,
                scale: -scale,
                offset: -offset,
            },
        }
    }

    pub fn shifted(&self, delta: f64) -> Angle {
        match *self {
            Angle::Fixed(v) => Angle::Fixed(v + delta),
            Angle::Param {
                index,
                scale,
                offset,
            } => Angle::Param {
                index,
                scale,
                offset: offset + delta,
            },
        }
    }
}

impl From<f64> for Angle {
    fn from(v: f64) -> Self {
        Angle::Fixed(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: [usize; 2],
    pub angle: Option<Angle>,
}

impl Gate {
    pub fn one(kind: GateKind, q: usize) -> Self {
        debug_assert!(kind.arity() == 1 && !kind.is_rotation());
        Gate {
            kind,
            qubits: [q, q],
            angle: None,
        }
    }

    pub fn rotation(kind: GateKind, q: usize, angle: Angle) -> Self {
        debug_assert!(kind.is_rotation());
        Gate {
            kind,
            qubits: [q, q],
            angle: Some(angle),
        }
    }

    pub fn two(kind: GateKind, a: usize, b: usize) -> Self {
        debug_assert!(kind.arity() == 2);
        Gate {
            kind,
            qubits: [a, b],
            angle: None,
        }
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits[..self.kind.arity()]
    }

    pub fn inverse(&self) -> Gate {
        let mut g = *self;
        match self.kind {
            GateKind::SqrtX => g.kind = GateKind::SqrtXdg,
            GateKind::SqrtXdg => g.kind = GateKind::SqrtX,
            GateKind::RX | GateKind::RY | GateKind::RZ => {
                g.angle = self.angle.map(|a| a.negated());
            }
            _ => {}
        }
        g
    }

    /// 2x2 unitary of a one-qubit gate, row-major.
    pub fn matrix_1q(&self, theta: &[f64]) -> Result<[[Complex64; 2]; 2]> {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let h = FRAC_1_SQRT_2;
        Ok(match self.kind {
            GateKind::X => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
            GateKind::H => [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]],
            GateKind::SqrtX => [[c(0.5, 0.5), c(0.5, -0.5)], [c(0.5, -0.5), c(0.5, 0.5)]],
            GateKind::SqrtXdg => [[c(0.5, -0.5), c(0.5, 0.5)], [c(0.5, 0.5), c(0.5, -0.5)]],
            GateKind::RX | GateKind::RY | GateKind::RZ => {
                let t = self
                    .angle
                    .ok_or_else(|| QveError::invalid("rotation without an angle"))?
                    .resolve(theta)?;
                let (s, co) = (0.5 * t).sin_cos();
                match self.kind {
                    GateKind::RX => [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]],
                    GateKind::RY => [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]],
                    _ => [[c(co, -s), c(0.0, 0.0)], [c(0.0, 0.0), c(co, s)]],
                }
            }
            k => return Err(QveError::invalid(format!("{} is not a one-qubit gate", k.name()))),
        })
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.name())?;
        match self.angle {
            Some(Angle::Fixed(v)) => write!(f, "({v})")?,
            Some(Angle::Param {
                index,
                scale,
                offset,
            }) => write!(f, "({scale}*t{index}{offset:+})")?,
            None => {}
        }
        let qs: Vec<String> = self.qubits().iter().map(|q| format!("q{q}")).collect();
        write!(f, " {}", qs.join(","))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    parameter_names: Vec<String>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            gates: Vec::new(),
            parameter_names: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn parameter_names(&self) -> &[String] {
        &self.parameter_names
    }

    pub fn n_parameters(&self) -> usize {
        self.parameter_names.len()
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn add_parameter(&mut self, name: impl Into<String>) -> usize {
        self.parameter_names.push(name.into());
        self.parameter_names.len() - 1
    }

    /// Appends a gate after checking qubit indices and parameter references.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let qs = gate.qubits();
        if let Some(&q) = qs.iter().find(|&&q| q >= self.n_qubits) {
            return Err(QveError::invalid(format!(
                "qubit {q} outside {}-qubit circuit",
                self.n_qubits
            )));
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(QveError::invalid(format!(
                "{} needs two distinct qubits",
                gate.kind.name()
            )));
        }
        if gate.kind.is_rotation() != gate.angle.is_some() {
            return Err(QveError::invalid(format!(
                "{} angle mismatch",
                gate.kind.name()
            )));
        }
        if let Some(Angle::Param { index, .. }) = gate.angle {
            if index >= self.parameter_names.len() {
                return Err(QveError::UnboundParameter(index));
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    fn push_ok(&mut self, gate: Gate) -> &mut Self {
        if let Err(e) = self.push(gate) {
            panic!("invalid gate {gate}: {e}");
        }
        self
    }

    pub fn x(&mut self, q: usize) -> &mut Self {
        self.push_ok(Gate::one(GateKind::X, q))
    }

    pub fn h(&mut self, q: usize) -> &mut Self {
        self.push_ok(Gate::one(GateKind::H, q))
    }

    pub fn sx(&mut self, q: usize) -> &mut Self {
        self.push_ok(Gate::one(GateKind::SqrtX, q))
    }

    pub fn sxdg(&mut self, q: usize) -> &mut Self {
        self.push_ok(Gate::one(GateKind::SqrtXdg, q))
    }

    pub fn rx(&mut self, q: usize, a: impl Into<Angle>) -> &mut Self {
        self.push_ok(Gate::rotation(GateKind::RX, q, a.into()))
    }

    pub fn ry(&mut self, q: usize, a: impl Into<Angle>) -> &mut Self {
        self.push_ok(Gate::rotation(GateKind::RY, q, a.into()))
    }

    pub fn rz(&mut self, q: usize, a: impl Into<Angle>) -> &mut Self {
        self.push_ok(Gate::rotation(GateKind::RZ, q, a.into()))
    }

    pub fn cx(&mut self, control: usize, target: usize) -> &mut Self {
        self.push_ok(Gate::two(GateKind::CX, control, target))
    }

    pub fn cz(&mut self, a: usize, b: usize) -> &mut Self {
        self.push_ok(Gate::two(GateKind::CZ, a, b))
    }

    pub fn swap(&mut self, a: usize, b: usize) -> &mut Self {
        self.push_ok(Gate::two(GateKind::SWAP, a, b))
    }

    /// Appends another circuit on the same register; its parameter indices
    /// must already refer to this circuit's parameters.
    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(QveError::invalid(format!(
                "cannot append a {}-qubit circuit to a {}-qubit one",
                other.n_qubits, self.n_qubits
            )));
        }
        for g in &other.gates {
            self.push(*g)?;
        }
        Ok(())
    }

    /// Gate-reversed adjoint; parameters are shared with `self`.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            parameter_names: self.parameter_names.clone(),
        }
    }

    /// Same gates with every parameterized angle replaced by its value.
    pub fn bind(&self, theta: &[f64]) -> Result<Circuit> {
        self.check_bindings(theta)?;
        let mut out = Circuit::new(self.n_qubits);
        for g in &self.gates {
            let mut b = *g;
            if let Some(a) = g.angle {
                b.angle = Some(Angle::Fixed(a.resolve(theta)?));
            }
            out.gates.push(b);
        }
        Ok(out)
    }

    pub fn check_bindings(&self, theta: &[f64]) -> Result<()> {
        if theta.len() < self.parameter_names.len() {
            return Err(QveError::UnboundParameter(theta.len()));
        }
        Ok(())
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "circuit {} qubits, {} parameters", self.n_qubits, self.n_parameters())?;
        for g in &self.gates {
            writeln!(f, "  {g}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircuitStats {
    pub depth: usize,
    pub counts: BTreeMap<GateKind, usize>,
    pub n_parameters: usize,
    pub two_qubit_count: usize,
}

/// Longest chain of gates sharing qubits.
pub fn circuit_depth(c: &Circuit) -> usize {
    let mut level = vec![0usize; c.n_qubits()];
    for g in c.gates() {
        let d = g.qubits().iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
        for &q in g.qubits() {
            level[q] = d;
        }
    }
    level.into_iter().max().unwrap_or(0)
}

pub fn circuit_stats(c: &Circuit) -> CircuitStats {
    let mut counts = BTreeMap::new();
    for g in c.gates() {
        *counts.entry(g.kind).or_insert(0) += 1;
    }
    CircuitStats {
        depth: circuit_depth(c),
        two_qubit_count: c.gates().iter().filter(|g| g.kind.arity() == 2).count(),
        counts,
        n_parameters: c.n_parameters(),
    }
}
