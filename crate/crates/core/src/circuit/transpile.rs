//! Lowering to the {SqrtX, RZ, CZ} basis with SWAP routing on a coupling map.

use std::collections::VecDeque;
use std::f64::consts::{FRAC_PI_2, PI};

use super::{circuit_depth, Angle, Circuit, Gate, GateKind};
use crate::error::{QveError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TranspileResult {
    pub circuit: Circuit,
    pub depth: usize,
    pub two_qubit_count: usize,
    /// `final_layout[logical] = physical` after routing.
    pub final_layout: Vec<usize>,
}

/// Linear nearest-neighbour coupling `0-1-2-...`.
pub fn linear_coupling(n: usize) -> Vec<(usize, usize)> {
    (1..n).map(|q| (q - 1, q)).collect()
}

struct Lowering {
    out: Circuit,
}

impl Lowering {
    fn rz(&mut self, q: usize, a: Angle) {
        self.out.push(Gate::rotation(GateKind::RZ, q, a)).expect("routed qubit");
    }

    fn sx(&mut self, q: usize) {
        self.out.push(Gate::one(GateKind::SqrtX, q)).expect("routed qubit");
    }

    fn h(&mut self, q: usize) {
        self.rz(q, Angle::Fixed(FRAC_PI_2));
        self.sx(q);
        self.rz(q, Angle::Fixed(FRAC_PI_2));
    }

    fn cz(&mut self, a: usize, b: usize) {
        self.out.push(Gate::two(GateKind::CZ, a, b)).expect("routed qubits");
    }

    fn cx(&mut self, c: usize, t: usize) {
        self.h(t);
        self.cz(c, t);
        self.h(t);
    }

    /// Emits `g` on physical qubits; equal up to global phase.
    fn gate(&mut self, g: &Gate, a: usize, b: usize) {
        match g.kind {
            GateKind::X => {
                self.sx(a);
                self.sx(a);
            }
            GateKind::H => self.h(a),
            GateKind::SqrtX => self.sx(a),
            GateKind::SqrtXdg => {
                self.rz(a, Angle::Fixed(PI));
                self.sx(a);
                self.rz(a, Angle::Fixed(PI));
            }
            GateKind::RZ => self.rz(a, g.angle.expect("rotation angle")),
            GateKind::RX => {
                // H RZ(t) H
                let t = g.angle.expect("rotation angle");
                self.rz(a, Angle::Fixed(FRAC_PI_2));
                self.sx(a);
                self.rz(a, t.shifted(PI));
                self.sx(a);
                self.rz(a, Angle::Fixed(FRAC_PI_2));
            }
            GateKind::RY => {
                // S RX(t) S^dagger
                let t = g.angle.expect("rotation angle");
                self.sx(a);
                self.rz(a, t.shifted(PI));
                self.sx(a);
                self.rz(a, Angle::Fixed(PI));
            }
            GateKind::CX => self.cx(a, b),
            GateKind::CZ => self.cz(a, b),
            GateKind::SWAP => {
                self.cx(a, b);
                self.cx(b, a);
                self.cx(a, b);
            }
        }
    }
}

fn adjacency(coupling: &[(usize, usize)], n_physical: usize) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n_physical];
    for &(a, b) in coupling {
        if a != b {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    for v in adj.iter_mut() {
        v.sort_unstable();
        v.dedup();
    }
    adj
}

/// Shortest path with lowest-index tie-breaking.
fn shortest_path(adj: &[Vec<usize>], from: usize, to: usize) -> Option<Vec<usize>> {
    let mut parent = vec![usize::MAX; adj.len()];
    parent[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = parent[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for &w in &adj[v] {
            if parent[w] == usize::MAX {
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    None
}

/// Rewrites `c` into {SqrtX, RZ, CZ} on the coupling graph, inserting SWAPs
/// along shortest paths for non-adjacent pairs. Logical qubit `q` starts on
/// physical qubit `q`.
pub fn transpile(c: &Circuit, coupling: &[(usize, usize)]) -> Result<TranspileResult> {
    let n_physical = coupling
        .iter()
        .map(|&(a, b)| a.max(b) + 1)
        .max()
        .unwrap_or(0)
        .max(c.n_qubits());
    let adj = adjacency(coupling, n_physical);
    for q in 1..n_physical {
        if shortest_path(&adj, 0, q).is_none() {
            return Err(QveError::DisconnectedCoupling(0, q));
        }
    }

    let mut out = Circuit::new(n_physical);
    for name in c.parameter_names() {
        out.add_parameter(name.clone());
    }
    let mut low = Lowering { out };
    let mut layout: Vec<usize> = (0..n_physical).collect();
    let mut owner: Vec<usize> = (0..n_physical).collect();

    for g in c.gates() {
        if g.kind.arity() == 1 {
            low.gate(g, layout[g.qubits[0]], 0);
            continue;
        }
        let (la, lb) = (g.qubits[0], g.qubits[1]);
        let path = shortest_path(&adj, layout[la], layout[lb]).expect("connected coupling");
        for w in path.windows(2).take(path.len().saturating_sub(2)) {
            let (p, q) = (w[0], w[1]);
            low.gate(&Gate::two(GateKind::SWAP, p, q), p, q);
            let (lp, lq) = (owner[p], owner[q]);
            owner.swap(p, q);
            layout[lp] = q;
            layout[lq] = p;
        }
        low.gate(g, layout[la], layout[lb]);
    }

    let circuit = low.out;
    let two_qubit_count = circuit.gates().iter().filter(|g| g.kind.arity() == 2).count();
    layout.truncate(c.n_qubits());
    Ok(TranspileResult {
        depth: circuit_depth(&circuit),
        two_qubit_count,
        final_layout: layout,
        circuit,
    })
}
