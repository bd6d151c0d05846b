//! Sparse Pauli sums in symplectic form.
//!
//! A term is a pair of bit masks `(x, z)`: qubit `q` carries `X` if only bit
//! `q` of `x` is set, `Z` if only bit `q` of `z` is set, and `Y` if both are.
//! The stored coefficient multiplies the Pauli *string* (with `Y` written as
//! `Y`); the `Y = i X Z` phase is applied only inside multiplication and
//! matrix assembly, so `"XYZI"`-style labels round-trip exactly and a
//! Hermitian sum has real coefficients.
//!
//! Basis-state indices are little endian: qubit `q` is bit `q` of the index.
//! Labels are written qubit 0 first.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{QveError, Result};

/// Coefficients with modulus below this are dropped.
pub const PRUNE_TOL: f64 = 1e-12;
/// Largest register handled by dense routines unless a larger cap is passed.
pub const DEFAULT_QUBIT_CAP: usize = 14;
/// Widest register representable by the 64-bit masks.
pub const MAX_QUBITS: usize = 64;

const I_POW: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

#[inline]
fn i_pow(k: u32) -> Complex64 {
    I_POW[(k & 3) as usize]
}

#[inline]
fn y_count(x: u64, z: u64) -> u32 {
    (x & z).count_ones()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliTerm {
    pub x: u64,
    pub z: u64,
    pub coeff: Complex64,
}

impl PauliTerm {
    pub fn new(x: u64, z: u64, coeff: Complex64) -> Self {
        PauliTerm { x, z, coeff }
    }

    pub fn identity(coeff: Complex64) -> Self {
        PauliTerm { x: 0, z: 0, coeff }
    }

    /// Parses a label such as `"XIZY"` (qubit 0 first).
    pub fn from_label(label: &str, coeff: Complex64) -> Result<Self> {
        if label.len() > MAX_QUBITS {
            return Err(QveError::ResourceLimit(format!(
                "Pauli label longer than {MAX_QUBITS} qubits"
            )));
        }
        let (mut x, mut z) = (0u64, 0u64);
        for (q, ch) in label.chars().enumerate() {
            match ch {
                'I' => {}
                'X' => x |= 1 << q,
                'Z' => z |= 1 << q,
                'Y' => {
                    x |= 1 << q;
                    z |= 1 << q;
                }
                other => return Err(QveError::invalid(format!("bad Pauli letter `{other}`"))),
            }
        }
        Ok(PauliTerm { x, z, coeff })
    }

    pub fn label(&self, n_qubits: usize) -> String {
        (0..n_qubits)
            .map(|q| match ((self.x >> q) & 1, (self.z >> q) & 1) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (0, 1) => 'Z',
                _ => 'Y',
            })
            .collect()
    }

    /// Number of non-identity factors.
    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Support mask: qubits with a non-identity factor.
    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    /// Local letter on qubit `q`: 0 = I, 1 = X, 2 = Y, 3 = Z.
    pub fn letter(&self, q: usize) -> u8 {
        match ((self.x >> q) & 1, (self.z >> q) & 1) {
            (0, 0) => 0,
            (1, 0) => 1,
            (1, 1) => 2,
            _ => 3,
        }
    }

    pub fn commutes_with(&self, other: &PauliTerm) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    /// Same letters on every qubit where both are non-identity.
    pub fn qubitwise_commutes_with(&self, other: &PauliTerm) -> bool {
        let both = self.support() & other.support();
        (self.x ^ other.x) & both == 0 && (self.z ^ other.z) & both == 0
    }

    /// Action on a computational basis state: `P|b> = phase |b ^ x>`.
    #[inline]
    pub fn apply_to_basis(&self, b: u64) -> (u64, Complex64) {
        let sign = (self.z & b).count_ones() * 2;
        (b ^ self.x, self.coeff * i_pow(y_count(self.x, self.z) + sign))
    }
}

/// Exact product of two terms; masks XOR and the phase is an integer power of `i`.
pub fn multiply_terms(a: &PauliTerm, b: &PauliTerm) -> PauliTerm {
    let x = a.x ^ b.x;
    let z = a.z ^ b.z;
    // a = i^ya X^xa Z^za; Z^za X^xb = (-1)^{|za & xb|} X^xb Z^za
    let k = y_count(a.x, a.z) + y_count(b.x, b.z) + 2 * (a.z & b.x).count_ones() + 4
        - (y_count(x, z) & 3);
    PauliTerm {
        x,
        z,
        coeff: a.coeff * b.coeff * i_pow(k),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: BTreeMap<(u64, u64), Complex64>,
}

impl PauliSum {
    pub fn zero(n_qubits: usize) -> Self {
        assert!(n_qubits <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        PauliSum {
            n_qubits,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n_qubits: usize, coeff: impl Into<Complex64>) -> Self {
        let mut s = Self::zero(n_qubits);
        s.add_term(PauliTerm::identity(coeff.into()));
        s
    }

    pub fn from_terms(n_qubits: usize, terms: impl IntoIterator<Item = PauliTerm>) -> Self {
        let mut s = Self::zero(n_qubits);
        for t in terms {
            s.add_term(t);
        }
        s
    }

    /// Builds a sum from `(label, coefficient)` pairs; all labels must have
    /// the same length.
    pub fn from_labels<C: Into<Complex64> + Copy>(labels: &[(&str, C)]) -> Result<Self> {
        let n = labels.first().map_or(0, |(l, _)| l.len());
        let mut s = Self::zero(n);
        for (l, c) in labels {
            if l.len() != n {
                return Err(QveError::invalid("Pauli labels of different lengths"));
            }
            s.add_term(PauliTerm::from_label(l, (*c).into())?);
        }
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, t: PauliTerm) {
        debug_assert!(
            self.n_qubits == MAX_QUBITS || (t.x | t.z) >> self.n_qubits == 0,
            "term outside register"
        );
        let slot = self.terms.entry((t.x, t.z)).or_insert(Complex64::new(0.0, 0.0));
        *slot += t.coeff;
        if slot.norm() < PRUNE_TOL {
            self.terms.remove(&(t.x, t.z));
        }
    }

    /// Terms in canonical `(x, z)` order.
    pub fn iter(&self) -> impl Iterator<Item = PauliTerm> + '_ {
        self.terms.iter().map(|(&(x, z), &coeff)| PauliTerm { x, z, coeff })
    }

    pub fn coefficient(&self, x: u64, z: u64) -> Complex64 {
        self.terms.get(&(x, z)).copied().unwrap_or_default()
    }

    pub fn identity_coefficient(&self) -> Complex64 {
        self.coefficient(0, 0)
    }

    fn check_size(&self, other: &PauliSum) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(QveError::invalid(format!(
                "qubit count mismatch: {} vs {}",
                self.n_qubits, other.n_qubits
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        self.check_size(other)?;
        let mut out = self.clone();
        for t in other.iter() {
            out.add_term(t);
        }
        Ok(out)
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> PauliSum {
        let c = c.into();
        PauliSum::from_terms(
            self.n_qubits,
            self.iter().map(|t| PauliTerm { coeff: t.coeff * c, ..t }),
        )
    }

    pub fn mul(&self, other: &PauliSum) -> Result<PauliSum> {
        self.check_size(other)?;
        let mut out = PauliSum::zero(self.n_qubits);
        for a in self.iter() {
            for b in other.iter() {
                out.add_term(multiply_terms(&a, &b));
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> PauliSum {
        PauliSum::from_terms(
            self.n_qubits,
            self.iter().map(|t| PauliTerm { coeff: t.coeff.conj(), ..t }),
        )
    }

    /// Every coefficient real to within `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.im.abs() <= tol)
    }

    /// Every coefficient purely imaginary to within `tol`.
    pub fn is_anti_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.re.abs() <= tol)
    }

    /// Drops the imaginary parts (for sums known to be Hermitian up to rounding).
    pub fn real_part(&self) -> PauliSum {
        PauliSum::from_terms(
            self.n_qubits,
            self.iter().map(|t| PauliTerm::new(t.x, t.z, Complex64::new(t.coeff.re, 0.0))),
        )
    }

    /// Re-expresses the sum on a larger or equal register.
    pub fn widen(&self, n_qubits: usize) -> PauliSum {
        assert!(n_qubits >= self.n_qubits);
        PauliSum {
            n_qubits,
            terms: self.terms.clone(),
        }
    }

    /// `H|psi>` for a state vector of length `2^n`.
    pub fn apply(&self, state: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); state.len()];
        for t in self.iter() {
            for (b, amp) in state.iter().enumerate() {
                if amp.norm_sqr() == 0.0 {
                    continue;
                }
                let (nb, ph) = t.apply_to_basis(b as u64);
                out[nb as usize] += ph * amp;
            }
        }
        out
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in self.iter() {
            writeln!(f, "{:+.12e}{:+.12e}i {}", t.coeff.re, t.coeff.im, t.label(self.n_qubits))?;
        }
        Ok(())
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(QveError::ResourceLimit(format!(
            "{n} qubits exceeds the dense-matrix cap of {cap}"
        )));
    }
    Ok(())
}

pub fn to_matrix(h: &PauliSum) -> Result<DMatrix<Complex64>> {
    to_matrix_capped(h, DEFAULT_QUBIT_CAP)
}

/// Dense `2^n x 2^n` matrix, column `b` holding `H|b>`.
pub fn to_matrix_capped(h: &PauliSum, cap: usize) -> Result<DMatrix<Complex64>> {
    check_cap(h.n_qubits(), cap)?;
    let dim = 1usize << h.n_qubits();
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for t in h.iter() {
        for b in 0..dim {
            let (row, ph) = t.apply_to_basis(b as u64);
            m[(row as usize, b)] += ph;
        }
    }
    Ok(m)
}

/// Lowest eigenpair of a dense Hermitian matrix.
pub fn lowest_eigenpair(m: &DMatrix<Complex64>) -> (f64, Vec<Complex64>) {
    let dim = m.nrows();
    let real = m.iter().all(|c| c.im == 0.0);
    if real {
        let rm = DMatrix::<f64>::from_fn(dim, dim, |i, j| 0.5 * (m[(i, j)].re + m[(j, i)].re));
        let eig = rm.symmetric_eigen();
        let k = eig.eigenvalues.imin();
        let v = eig.eigenvectors.column(k).map(|x| Complex64::new(x, 0.0));
        (eig.eigenvalues[k], v.iter().copied().collect())
    } else {
        let hm = DMatrix::<Complex64>::from_fn(dim, dim, |i, j| 0.5 * (m[(i, j)] + m[(j, i)].conj()));
        let eig = hm.symmetric_eigen();
        let k = eig.eigenvalues.imin();
        (eig.eigenvalues[k], eig.eigenvectors.column(k).iter().copied().collect())
    }
}

pub fn exact_ground_energy(h: &PauliSum) -> Result<(f64, Vec<Complex64>)> {
    exact_ground_energy_capped(h, DEFAULT_QUBIT_CAP)
}

pub fn exact_ground_energy_capped(h: &PauliSum, cap: usize) -> Result<(f64, Vec<Complex64>)> {
    if !h.is_hermitian(1e-10) {
        return Err(QveError::invalid("exact diagonalization needs a Hermitian Pauli sum"));
    }
    let m = to_matrix_capped(&h.real_part(), cap)?;
    Ok(lowest_eigenpair(&m))
}

/// All eigenvalues of a Hermitian sum, ascending.
pub fn spectrum(h: &PauliSum) -> Result<Vec<f64>> {
    if !h.is_hermitian(1e-10) {
        return Err(QveError::invalid("spectrum needs a Hermitian Pauli sum"));
    }
    let m = to_matrix(&h.real_part())?;
    let mut ev: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// `<psi|H|psi>` for a unit-norm state; returns the real part.
pub fn expectation_exact(h: &PauliSum, state: &[Complex64]) -> Result<f64> {
    if state.len() != 1usize << h.n_qubits() {
        return Err(QveError::invalid(format!(
            "state has {} amplitudes, expected {}",
            state.len(),
            1usize << h.n_qubits()
        )));
    }
    let norm: f64 = state.iter().map(|a| a.norm_sqr()).sum();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(QveError::invalid(format!("state is not normalized (|psi|^2 = {norm})")));
    }
    let hpsi = h.apply(state);
    let e: Complex64 = state.iter().zip(&hpsi).map(|(a, b)| a.conj() * b).sum();
    if h.is_hermitian(1e-10) && e.im.abs() > 1e-10 {
        return Err(QveError::invalid(format!("expectation has imaginary part {}", e.im)));
    }
    Ok(e.re)
}

/// Residual `|Hv - Ev|` for checking eigenpairs.
pub fn eigen_residual(h: &PauliSum, energy: f64, v: &[Complex64]) -> f64 {
    let hv = h.apply(v);
    DVector::from_iterator(
        v.len(),
        hv.iter().zip(v).map(|(a, b)| a - b * energy),
    )
    .norm()
}
