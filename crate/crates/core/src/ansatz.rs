//! Hartree-Fock state preparation, single-step Trotterized UCCSD and the
//! RY/RZ hardware-efficient ansatz.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use num_complex::Complex64;

use crate::circuit::{Angle, Circuit, Gate, GateKind};
use crate::error::{QveError, Result};
use crate::fermion::{hartree_fock_occupation, FermionOperator, FockState, LadderOp, LadderTerm};
use crate::mapping::{encoded_basis_index, map_hamiltonian, Mapper};
use crate::pauli::{PauliSum, PauliTerm};

/// Spin-orbital excitations from the blocked HF reference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExcitationList {
    /// (occupied, virtual)
    pub singles: Vec<(usize, usize)>,
    /// (occupied i, occupied j, virtual a, virtual b), i < j, a < b
    pub doubles: Vec<(usize, usize, usize, usize)>,
}

impl ExcitationList {
    pub fn len(&self) -> usize {
        self.singles.len() + self.doubles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Singles (alpha, then beta) followed by doubles (alpha-alpha, beta-beta,
/// alpha-beta), each lexicographic.
pub fn excitations(n_alpha: usize, n_beta: usize, n_spatial: usize) -> Result<ExcitationList> {
    if n_alpha > n_spatial || n_beta > n_spatial {
        return Err(QveError::invalid(format!(
            "({n_alpha}, {n_beta}) electrons do not fit in {n_spatial} spatial orbitals"
        )));
    }
    let n = n_spatial;
    let occ_a: Vec<usize> = (0..n_alpha).collect();
    let vir_a: Vec<usize> = (n_alpha..n).collect();
    let occ_b: Vec<usize> = (n..n + n_beta).collect();
    let vir_b: Vec<usize> = (n + n_beta..2 * n).collect();

    let mut singles = Vec::new();
    for (occ, vir) in [(&occ_a, &vir_a), (&occ_b, &vir_b)] {
        for &i in occ {
            for &a in vir {
                singles.push((i, a));
            }
        }
    }
    let mut doubles = Vec::new();
    for (occ, vir) in [(&occ_a, &vir_a), (&occ_b, &vir_b)] {
        for (x, &i) in occ.iter().enumerate() {
            for &j in &occ[x + 1..] {
                for (y, &a) in vir.iter().enumerate() {
                    for &b in &vir[y + 1..] {
                        doubles.push((i, j, a, b));
                    }
                }
            }
        }
    }
    for &i in &occ_a {
        for &j in &occ_b {
            for &a in &vir_a {
                for &b in &vir_b {
                    doubles.push((i, j, a, b));
                }
            }
        }
    }
    Ok(ExcitationList { singles, doubles })
}

/// `T - T†` for each excitation, in list order.
pub fn excitation_generators(list: &ExcitationList, n_modes: usize) -> Result<Vec<FermionOperator>> {
    let mut out = Vec::with_capacity(list.len());
    let one = Complex64::new(1.0, 0.0);
    for &(i, a) in &list.singles {
        let t = FermionOperator::from_terms(
            n_modes,
            &[LadderTerm::new(vec![LadderOp::create(a), LadderOp::annihilate(i)], one)],
        )?;
        out.push(t.add(&t.adjoint().scale(-1.0))?);
    }
    for &(i, j, a, b) in &list.doubles {
        let t = FermionOperator::from_terms(
            n_modes,
            &[LadderTerm::new(
                vec![
                    LadderOp::create(a),
                    LadderOp::create(b),
                    LadderOp::annihilate(j),
                    LadderOp::annihilate(i),
                ],
                one,
            )],
        )?;
        out.push(t.add(&t.adjoint().scale(-1.0))?);
    }
    Ok(out)
}

/// Appends `exp(i lambda theta P)` for a term `i lambda P`, with `theta`
/// given by `angle`: basis change onto Z, CX ladder to the last active qubit,
/// RZ(-2 lambda theta), and the mirror image.
pub fn append_pauli_evolution(c: &mut Circuit, term: &PauliTerm, angle: Angle) -> Result<()> {
    if term.coeff.re.abs() > 1e-12 {
        return Err(QveError::InvalidGenerator(format!("{}", term.coeff)));
    }
    let lambda = term.coeff.im;
    let support: Vec<usize> = (0..c.n_qubits()).filter(|&q| (term.support() >> q) & 1 == 1).collect();
    let Some(&last) = support.last() else {
        // Identity: global phase only.
        return Ok(());
    };
    let rz_angle = match angle {
        Angle::Fixed(v) => Angle::Fixed(-2.0 * lambda * v),
        Angle::Param {
            index,
            scale,
            offset,
        } => Angle::Param {
            index,
            scale: -2.0 * lambda * scale,
            offset: -2.0 * lambda * offset,
        },
    };
    let to_z = |c: &mut Circuit, inverse: bool| -> Result<()> {
        for &q in &support {
            match term.letter(q) {
                1 => c.push(Gate::one(GateKind::H, q))?,
                2 => {
                    let a = if inverse { -FRAC_PI_2 } else { FRAC_PI_2 };
                    c.push(Gate::rotation(GateKind::RX, q, Angle::Fixed(a)))?
                }
                _ => {}
            }
        }
        Ok(())
    };
    to_z(c, false)?;
    for w in support.windows(2) {
        c.push(Gate::two(GateKind::CX, w[0], w[1]))?;
    }
    c.push(Gate::rotation(GateKind::RZ, last, rz_angle))?;
    for w in support.windows(2).rev() {
        c.push(Gate::two(GateKind::CX, w[0], w[1]))?;
    }
    to_z(c, true)?;
    Ok(())
}

/// Stand-alone `exp(i lambda theta P)` with `theta` as parameter 0.
pub fn pauli_evolution(n_qubits: usize, term: &PauliTerm) -> Result<Circuit> {
    let mut c = Circuit::new(n_qubits);
    let t = c.add_parameter("theta");
    append_pauli_evolution(&mut c, term, Angle::param(t))?;
    Ok(c)
}

/// X gates preparing the mapped occupation.
pub fn hf_state_circuit(occupation: FockState, mapper: Mapper, taper: bool) -> Result<Circuit> {
    let bits = encoded_basis_index(mapper, occupation, taper)?;
    let n = if taper {
        occupation.n_modes - 2
    } else {
        occupation.n_modes
    };
    let mut c = Circuit::new(n);
    for q in 0..n {
        if (bits >> q) & 1 == 1 {
            c.push(Gate::one(GateKind::X, q))?;
        }
    }
    Ok(c)
}

/// HF preparation followed by one Trotter step of `prod_e exp(theta_e (T_e - T_e†))`.
pub fn build_uccsd(
    n_alpha: usize,
    n_beta: usize,
    n_spatial: usize,
    mapper: Mapper,
    taper: bool,
) -> Result<Circuit> {
    let n_modes = 2 * n_spatial;
    let occ = hartree_fock_occupation(n_alpha, n_beta, n_spatial)?;
    let mut c = hf_state_circuit(occ, mapper, taper)?;
    let list = excitations(n_alpha, n_beta, n_spatial)?;
    let generators = excitation_generators(&list, n_modes)?;
    let names = list
        .singles
        .iter()
        .map(|(i, a)| format!("t_{i}_{a}"))
        .chain(
            list.doubles
                .iter()
                .map(|(i, j, a, b)| format!("t_{i}_{j}_{a}_{b}")),
        );
    for (g, name) in generators.iter().zip(names) {
        let idx = c.add_parameter(name);
        let mapped: PauliSum = map_hamiltonian(g, mapper, taper, n_alpha, n_beta)?;
        for term in mapped.iter() {
            append_pauli_evolution(&mut c, &term, Angle::param(idx))?;
        }
    }
    Ok(c)
}

/// `reps + 1` layers of RY then RZ on every qubit, separated by linear CX
/// chains `q -> q + 1`. Parameters are ordered layer by layer.
pub fn build_hea(n_qubits: usize, reps: usize) -> Circuit {
    let mut c = Circuit::new(n_qubits);
    for layer in 0..=reps {
        for kind in [GateKind::RY, GateKind::RZ] {
            for q in 0..n_qubits {
                let idx = c.add_parameter(format!("{}_{layer}_{q}", kind.name()));
                c.push(Gate::rotation(kind, q, Angle::param(idx)))
                    .expect("qubit in range");
            }
        }
        if layer < reps {
            for q in 1..n_qubits {
                c.cx(q - 1, q);
            }
        }
    }
    c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnsatzKind {
    Uccsd,
    Hea { reps: usize },
}

impl fmt::Display for AnsatzKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnsatzKind::Uccsd => f.write_str("uccsd"),
            AnsatzKind::Hea { reps } => write!(f, "hea(reps={reps})"),
        }
    }
}
