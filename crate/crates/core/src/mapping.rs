//! Fermion to qubit mappings (Jordan-Wigner, parity, Bravyi-Kitaev), parity
//! two-qubit tapering and term statistics.
//!
//! Every mapping is a linear binary encoding: qubit bits `b = B n (mod 2)` for
//! occupations `n`. With `U(p)` the qubits flipped by mode `p` (column `p` of
//! `B`), `P(p)` the qubits holding the parity of modes below `p`, and `O(p)`
//! the qubits holding `n_p` itself,
//!
//! ```text
//! c_p  = X_U(p) Z_P(p)
//! a_p  = c_p (1 - Z_O(p)) / 2
//! a†_p = c_p (1 + Z_O(p)) / 2
//! ```
//!
//! which reproduces the Fock-space signs of the fermion module exactly.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QveError, Result};
use crate::fermion::{FermionOperator, FockState};
use crate::pauli::{lowest_eigenpair, multiply_terms, PauliSum, PauliTerm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mapper {
    #[serde(rename = "jw")]
    JordanWigner,
    Parity,
    #[serde(rename = "bk")]
    BravyiKitaev,
}

impl Mapper {
    pub fn name(self) -> &'static str {
        match self {
            Mapper::JordanWigner => "jw",
            Mapper::Parity => "parity",
            Mapper::BravyiKitaev => "bk",
        }
    }
}

impl fmt::Display for Mapper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mapper {
    type Err = QveError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jw" => Ok(Mapper::JordanWigner),
            "parity" => Ok(Mapper::Parity),
            "bk" => Ok(Mapper::BravyiKitaev),
            _ => Err(QveError::invalid(format!(
                "unknown mapper `{s}` (expected jw, parity or bk)"
            ))),
        }
    }
}

/// Binary encoding matrix and its inverse, stored as row bitmasks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoding {
    n: usize,
    rows: Vec<u64>,
    inv_rows: Vec<u64>,
}

impl Encoding {
    pub fn new(mapper: Mapper, n_modes: usize) -> Result<Self> {
        if n_modes > 64 {
            return Err(QveError::ResourceLimit(format!("{n_modes} modes exceed 64 qubits")));
        }
        let mut rows = vec![0u64; n_modes];
        match mapper {
            Mapper::JordanWigner => {
                for (q, r) in rows.iter_mut().enumerate() {
                    *r = 1 << q;
                }
            }
            Mapper::Parity => {
                for (q, r) in rows.iter_mut().enumerate() {
                    *r = low_mask(q + 1);
                }
            }
            Mapper::BravyiKitaev => {
                // Fenwick tree: 1-based index j covers (j - lowbit(j), j].
                for p in 0..n_modes {
                    let mut j = p + 1;
                    while j <= n_modes {
                        rows[j - 1] |= 1 << p;
                        j += j & j.wrapping_neg();
                    }
                }
            }
        }
        let inv_rows = gf2_inverse(&rows)?;
        Ok(Encoding {
            n: n_modes,
            rows,
            inv_rows,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n
    }

    pub fn encode(&self, occupations: u64) -> u64 {
        apply_rows(&self.rows, occupations)
    }

    pub fn decode(&self, bits: u64) -> u64 {
        apply_rows(&self.inv_rows, bits)
    }

    fn update_set(&self, p: usize) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| (*r >> p) & 1 == 1)
            .fold(0, |acc, (q, _)| acc | 1 << q)
    }

    fn parity_set(&self, p: usize) -> u64 {
        self.inv_rows[..p].iter().fold(0, |acc, r| acc ^ r)
    }

    fn occupation_set(&self, p: usize) -> u64 {
        self.inv_rows[p]
    }

    /// Images of `a_p` and `a†_p`.
    pub fn ladder_images(&self, p: usize) -> (PauliSum, PauliSum) {
        let u = self.update_set(p);
        let par = self.parity_set(p);
        let occ = self.occupation_set(p);
        // Stored coefficients multiply Pauli strings with Y letters; X^u Z^par
        // carries i^{-|u & par|} relative to that string.
        let c = PauliTerm::new(u, par, i_pow_neg((u & par).count_ones()));
        let z = PauliTerm::new(0, occ, Complex64::new(1.0, 0.0));
        let cz = multiply_terms(&c, &z);
        let half = Complex64::new(0.5, 0.0);
        let ann = PauliSum::from_terms(
            self.n,
            [
                PauliTerm::new(c.x, c.z, c.coeff * half),
                PauliTerm::new(cz.x, cz.z, -cz.coeff * half),
            ],
        );
        let cre = PauliSum::from_terms(
            self.n,
            [
                PauliTerm::new(c.x, c.z, c.coeff * half),
                PauliTerm::new(cz.x, cz.z, cz.coeff * half),
            ],
        );
        (ann, cre)
    }
}

fn i_pow_neg(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

fn low_mask(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

fn apply_rows(rows: &[u64], v: u64) -> u64 {
    rows.iter()
        .enumerate()
        .fold(0, |acc, (q, r)| acc | (u64::from((r & v).count_ones() % 2 == 1) << q))
}

/// Inverse of a square binary matrix given as row bitmasks.
pub fn gf2_inverse(rows: &[u64]) -> Result<Vec<u64>> {
    let n = rows.len();
    let mut a = rows.to_vec();
    let mut inv: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| (a[r] >> col) & 1 == 1)
            .ok_or_else(|| QveError::invalid("encoding matrix is singular over GF(2)"))?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        for r in 0..n {
            if r != col && (a[r] >> col) & 1 == 1 {
                a[r] ^= a[col];
                inv[r] ^= inv[col];
            }
        }
    }
    Ok(inv)
}

/// Maps a fermion operator term by term.
pub fn map_operator(op: &FermionOperator, mapper: Mapper) -> Result<PauliSum> {
    let n = op.n_modes();
    let enc = Encoding::new(mapper, n)?;
    let images: Vec<(PauliSum, PauliSum)> = (0..n).map(|p| enc.ladder_images(p)).collect();
    let mut out = PauliSum::zero(n);
    for (cre, ann, coeff) in op.iter() {
        let mut prod = PauliSum::identity(n, coeff);
        for &p in cre {
            prod = prod.mul(&images[p].1)?;
        }
        for &p in ann {
            prod = prod.mul(&images[p].0)?;
        }
        out = out.add(&prod)?;
    }
    Ok(out)
}

pub fn jordan_wigner(op: &FermionOperator) -> Result<PauliSum> {
    map_operator(op, Mapper::JordanWigner)
}

pub fn parity_map(op: &FermionOperator) -> Result<PauliSum> {
    map_operator(op, Mapper::Parity)
}

pub fn bravyi_kitaev(op: &FermionOperator) -> Result<PauliSum> {
    map_operator(op, Mapper::BravyiKitaev)
}

/// Qubit string (qubit 0 first) for a Fock state under a mapping.
pub fn encode_state(mapper: Mapper, state: FockState) -> Result<u64> {
    Ok(Encoding::new(mapper, state.n_modes)?.encode(state.bits))
}

/// Computational-basis index of a Fock state under a mapping, after
/// optionally deleting the two parity qubits.
pub fn encoded_basis_index(mapper: Mapper, state: FockState, taper: bool) -> Result<u64> {
    let bits = encode_state(mapper, state)?;
    if !taper {
        return Ok(bits);
    }
    check_taper(mapper, state.n_modes)?;
    let n = state.n_modes / 2;
    Ok(delete_bits(bits, &[n - 1, 2 * n - 1]))
}

fn check_taper(mapper: Mapper, n_modes: usize) -> Result<()> {
    if mapper != Mapper::Parity {
        return Err(QveError::InvalidCombination(format!(
            "two-qubit tapering needs the parity mapping, got {mapper}"
        )));
    }
    if n_modes < 2 || !n_modes.is_multiple_of(2) {
        return Err(QveError::invalid(format!(
            "tapering needs an even number of spin orbitals, got {n_modes}"
        )));
    }
    Ok(())
}

/// Removes bit positions (ascending) and closes the gaps.
fn delete_bits(v: u64, positions: &[usize]) -> u64 {
    let mut out = 0u64;
    let mut dst = 0;
    for src in 0..64 {
        if positions.contains(&src) {
            continue;
        }
        out |= ((v >> src) & 1) << dst;
        dst += 1;
    }
    out
}

/// Replaces the alpha-parity qubit `n-1` and total-parity qubit `2n-1` of a
/// blocked parity-mapped operator by their eigenvalues and deletes them.
pub fn taper_two_qubits(h: &PauliSum, n_alpha: usize, n_beta: usize) -> Result<PauliSum> {
    let m = h.n_qubits();
    check_taper(Mapper::Parity, m)?;
    let n = m / 2;
    let (qa, qt) = (n - 1, 2 * n - 1);
    let sign_a = if n_alpha.is_multiple_of(2) { 1.0 } else { -1.0 };
    let sign_t = if (n_alpha + n_beta).is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut out = PauliSum::zero(m - 2);
    for t in h.iter() {
        for q in [qa, qt] {
            if (t.x >> q) & 1 == 1 {
                return Err(QveError::SymmetryViolation { qubit: q });
            }
        }
        let mut c = t.coeff;
        if (t.z >> qa) & 1 == 1 {
            c *= sign_a;
        }
        if (t.z >> qt) & 1 == 1 {
            c *= sign_t;
        }
        out.add_term(PauliTerm::new(
            delete_bits(t.x, &[qa, qt]),
            delete_bits(t.z, &[qa, qt]),
            c,
        ));
    }
    Ok(out)
}

/// Maps and, for the parity mapping, optionally tapers.
pub fn map_hamiltonian(
    op: &FermionOperator,
    mapper: Mapper,
    taper: bool,
    n_alpha: usize,
    n_beta: usize,
) -> Result<PauliSum> {
    if taper {
        check_taper(mapper, op.n_modes())?;
    }
    let mapped = map_operator(op, mapper)?;
    if taper {
        taper_two_qubits(&mapped, n_alpha, n_beta)
    } else {
        Ok(mapped)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MappingStats {
    pub n_qubits: usize,
    pub n_pauli_terms: usize,
    pub avg_weight: f64,
}

/// Term count and mean weight both include the identity term (weight 0).
pub fn mapping_stats(h: &PauliSum) -> MappingStats {
    let n_terms = h.len();
    let total: u32 = h.iter().map(|t| t.weight()).sum();
    let avg_weight = if n_terms == 0 {
        0.0
    } else {
        f64::from(total) / n_terms as f64
    };
    MappingStats {
        n_qubits: h.n_qubits(),
        n_pauli_terms: n_terms,
        avg_weight,
    }
}

/// Lowest eigenvalue of a mapped operator restricted to the encoded states
/// with `n_alpha` alpha and `n_beta` beta electrons (blocked spin order).
pub fn sector_ground_energy(
    h: &PauliSum,
    mapper: Mapper,
    taper: bool,
    n_alpha: usize,
    n_beta: usize,
) -> Result<f64> {
    let n_modes = if taper { h.n_qubits() + 2 } else { h.n_qubits() };
    let n = n_modes / 2;
    let alpha_mask = low_mask(n);
    let basis: Vec<usize> = (0..1u64 << n_modes)
        .filter(|occ| {
            (occ & alpha_mask).count_ones() as usize == n_alpha
                && (occ >> n).count_ones() as usize == n_beta
        })
        .map(|occ| encoded_basis_index(mapper, FockState::new(n_modes, occ), taper).map(|b| b as usize))
        .collect::<Result<_>>()?;
    if basis.is_empty() {
        return Err(QveError::invalid(format!(
            "no states with ({n_alpha}, {n_beta}) electrons in {n} spatial orbitals"
        )));
    }
    // assemble the sector block directly from the Pauli action
    let position: HashMap<usize, usize> = basis.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    let mut sub = nalgebra::DMatrix::<Complex64>::zeros(basis.len(), basis.len());
    for (j, &b) in basis.iter().enumerate() {
        for t in h.iter() {
            let (out, amp) = t.apply_to_basis(b as u64);
            if let Some(&i) = position.get(&(out as usize)) {
                sub[(i, j)] += amp;
            }
        }
    }
    Ok(lowest_eigenpair(&sub).0)
}
