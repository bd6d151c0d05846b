//! Fermionic ladder-operator algebra.
//!
//! Operators are kept in canonical normal order: all creations left of all
//! annihilations, strictly increasing mode index within each kind. Equality of
//! operators is then equality of term maps.
//!
//! Fock-state signs follow mode-index order: `a†_p` and `a_p` pick up
//! `(-1)^(n_0 + ... + n_{p-1})`. The Jordan-Wigner image of an operator has
//! exactly the same matrix in the little-endian computational basis.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{QveError, Result};
use crate::tensor::Tensor4;

pub const PRUNE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LadderKind {
    Creation,
    Annihilation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LadderOp {
    pub mode: usize,
    pub kind: LadderKind,
}

impl LadderOp {
    pub fn create(mode: usize) -> Self {
        LadderOp {
            mode,
            kind: LadderKind::Creation,
        }
    }

    pub fn annihilate(mode: usize) -> Self {
        LadderOp {
            mode,
            kind: LadderKind::Annihilation,
        }
    }

    pub fn dagger(self) -> Self {
        LadderOp {
            mode: self.mode,
            kind: match self.kind {
                LadderKind::Creation => LadderKind::Annihilation,
                LadderKind::Annihilation => LadderKind::Creation,
            },
        }
    }
}

/// A coefficient times an ordered product of ladder operators (leftmost
/// factor acts last).
#[derive(Debug, Clone, PartialEq)]
pub struct LadderTerm {
    pub factors: Vec<LadderOp>,
    pub coeff: Complex64,
}

impl LadderTerm {
    pub fn new(factors: Vec<LadderOp>, coeff: impl Into<Complex64>) -> Self {
        LadderTerm {
            factors,
            coeff: coeff.into(),
        }
    }
}

/// Normal-ordered key: (creation modes ascending, annihilation modes ascending).
type Key = (Vec<usize>, Vec<usize>);

#[derive(Debug, Clone, PartialEq)]
pub struct FermionOperator {
    n_modes: usize,
    terms: BTreeMap<Key, Complex64>,
}

/// Occupation bit string; bit `p` is the occupation of mode `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockState {
    pub n_modes: usize,
    pub bits: u64,
}

impl FockState {
    pub fn new(n_modes: usize, bits: u64) -> Self {
        FockState { n_modes, bits }
    }

    /// Parses `"1011"`; character `p` is mode `p`.
    pub fn from_occupations(s: &str) -> Result<Self> {
        let mut bits = 0u64;
        for (p, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << p,
                _ => return Err(QveError::invalid(format!("bad occupation `{ch}`"))),
            }
        }
        Ok(FockState {
            n_modes: s.len(),
            bits,
        })
    }

    pub fn occupied(&self, p: usize) -> bool {
        (self.bits >> p) & 1 == 1
    }

    pub fn count(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn occupations(&self) -> Vec<bool> {
        (0..self.n_modes).map(|p| self.occupied(p)).collect()
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in 0..self.n_modes {
            write!(f, "{}", if self.occupied(p) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Applies one ladder operator to a basis state, returning the new bits and sign.
#[inline]
pub fn apply_ladder(op: LadderOp, bits: u64) -> Option<(u64, f64)> {
    let occupied = (bits >> op.mode) & 1 == 1;
    let below = bits & ((1u64 << op.mode) - 1);
    let sign = if below.count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
    match (op.kind, occupied) {
        (LadderKind::Creation, false) | (LadderKind::Annihilation, true) => {
            Some((bits ^ (1 << op.mode), sign))
        }
        _ => None,
    }
}

impl FermionOperator {
    pub fn zero(n_modes: usize) -> Self {
        FermionOperator {
            n_modes,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n_modes: usize, coeff: impl Into<Complex64>) -> Self {
        let mut op = Self::zero(n_modes);
        op.add_term(&LadderTerm::new(vec![], coeff));
        op
    }

    pub fn from_terms(n_modes: usize, terms: &[LadderTerm]) -> Result<Self> {
        let mut op = Self::zero(n_modes);
        for t in terms {
            if let Some(f) = t.factors.iter().find(|f| f.mode >= n_modes) {
                return Err(QveError::invalid(format!(
                    "mode {} outside {n_modes}-mode register",
                    f.mode
                )));
            }
            op.add_term(t);
        }
        Ok(op)
    }

    /// Single product term, e.g. `a†_1 a_0` as `[create(1), annihilate(0)]`.
    pub fn term(n_modes: usize, factors: &[LadderOp], coeff: impl Into<Complex64>) -> Result<Self> {
        Self::from_terms(n_modes, &[LadderTerm::new(factors.to_vec(), coeff)])
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Canonical terms as (creation modes, annihilation modes, coefficient).
    pub fn iter(&self) -> impl Iterator<Item = (&[usize], &[usize], Complex64)> + '_ {
        self.terms
            .iter()
            .map(|((c, a), &v)| (c.as_slice(), a.as_slice(), v))
    }

    /// The same terms as explicit ladder products.
    pub fn ladder_terms(&self) -> Vec<LadderTerm> {
        self.iter()
            .map(|(c, a, v)| {
                let factors = c
                    .iter()
                    .map(|&m| LadderOp::create(m))
                    .chain(a.iter().map(|&m| LadderOp::annihilate(m)))
                    .collect();
                LadderTerm { factors, coeff: v }
            })
            .collect()
    }

    fn accumulate(&mut self, key: Key, coeff: Complex64) {
        let slot = self.terms.entry(key.clone()).or_insert(Complex64::new(0.0, 0.0));
        *slot += coeff;
        if slot.norm() < PRUNE_TOL {
            self.terms.remove(&key);
        }
    }

    /// Normal-orders a product and adds it.
    pub fn add_term(&mut self, term: &LadderTerm) {
        let mut stack = vec![(term.factors.clone(), term.coeff)];
        'outer: while let Some((mut f, mut c)) = stack.pop() {
            for i in 1..f.len() {
                let mut j = i;
                while j > 0 {
                    let (l, r) = (f[j - 1], f[j]);
                    match (l.kind, r.kind) {
                        (LadderKind::Annihilation, LadderKind::Creation) => {
                            if l.mode == r.mode {
                                // a_p a†_p = 1 - a†_p a_p
                                let mut contracted = f.clone();
                                contracted.drain(j - 1..=j);
                                stack.push((contracted, c));
                            }
                            f.swap(j - 1, j);
                            c = -c;
                        }
                        (LadderKind::Creation, LadderKind::Annihilation) => break,
                        _ => {
                            if l.mode == r.mode {
                                continue 'outer;
                            }
                            if l.mode < r.mode {
                                break;
                            }
                            f.swap(j - 1, j);
                            c = -c;
                        }
                    }
                    j -= 1;
                }
            }
            let split = f.iter().position(|o| o.kind == LadderKind::Annihilation).unwrap_or(f.len());
            let key = (
                f[..split].iter().map(|o| o.mode).collect(),
                f[split..].iter().map(|o| o.mode).collect(),
            );
            self.accumulate(key, c);
        }
    }

    /// Re-normalizes and prunes; a no-op on operators built through this API.
    pub fn simplify(&self) -> FermionOperator {
        let mut out = FermionOperator::zero(self.n_modes);
        for t in self.ladder_terms() {
            out.add_term(&t);
        }
        out
    }

    fn check_modes(&self, other: &FermionOperator) -> Result<()> {
        if self.n_modes != other.n_modes {
            return Err(QveError::invalid(format!(
                "mode count mismatch: {} vs {}",
                self.n_modes, other.n_modes
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &FermionOperator) -> Result<FermionOperator> {
        self.check_modes(other)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.accumulate(k.clone(), *v);
        }
        Ok(out)
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> FermionOperator {
        let c = c.into();
        let mut out = FermionOperator::zero(self.n_modes);
        for (k, v) in &self.terms {
            out.accumulate(k.clone(), v * c);
        }
        out
    }

    pub fn multiply(&self, other: &FermionOperator) -> Result<FermionOperator> {
        self.check_modes(other)?;
        let mut out = FermionOperator::zero(self.n_modes);
        for a in self.ladder_terms() {
            for b in other.ladder_terms() {
                let mut factors = a.factors.clone();
                factors.extend_from_slice(&b.factors);
                out.add_term(&LadderTerm {
                    factors,
                    coeff: a.coeff * b.coeff,
                });
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> FermionOperator {
        let mut out = FermionOperator::zero(self.n_modes);
        for t in self.ladder_terms() {
            out.add_term(&LadderTerm {
                factors: t.factors.iter().rev().map(|f| f.dagger()).collect(),
                coeff: t.coeff.conj(),
            });
        }
        out
    }

    /// `H == H†` within `tol` per coefficient.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        let adj = self.adjoint();
        let keys: std::collections::BTreeSet<&Key> =
            self.terms.keys().chain(adj.terms.keys()).collect();
        let ok = keys.into_iter().all(|k| {
            let a = self.terms.get(k).copied().unwrap_or_default();
            let b = adj.terms.get(k).copied().unwrap_or_default();
            (a - b).norm() <= tol
        });
        ok
    }

    /// Expansion of `op|state>`.
    pub fn apply_to_fock(&self, state: FockState) -> Vec<(FockState, Complex64)> {
        let mut acc: BTreeMap<u64, Complex64> = BTreeMap::new();
        for (cre, ann, coeff) in self.iter() {
            let mut bits = state.bits;
            let mut sign = 1.0;
            let ops = cre
                .iter()
                .map(|&m| LadderOp::create(m))
                .chain(ann.iter().map(|&m| LadderOp::annihilate(m)));
            let mut alive = true;
            for op in ops.collect::<Vec<_>>().into_iter().rev() {
                match apply_ladder(op, bits) {
                    Some((nb, s)) => {
                        bits = nb;
                        sign *= s;
                    }
                    None => {
                        alive = false;
                        break;
                    }
                }
            }
            if alive {
                *acc.entry(bits).or_default() += coeff * sign;
            }
        }
        acc.into_iter()
            .filter(|(_, c)| c.norm() >= PRUNE_TOL)
            .map(|(bits, c)| (FockState::new(state.n_modes, bits), c))
            .collect()
    }

    /// Dense matrix over all `2^n` occupation states, column `b` = `op|b>`.
    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        if self.n_modes > crate::pauli::DEFAULT_QUBIT_CAP {
            return Err(QveError::ResourceLimit(format!(
                "{} modes exceeds the dense-matrix cap",
                self.n_modes
            )));
        }
        let dim = 1usize << self.n_modes;
        let mut m = DMatrix::zeros(dim, dim);
        for b in 0..dim {
            for (s, c) in self.apply_to_fock(FockState::new(self.n_modes, b as u64)) {
                m[(s.bits as usize, b)] += c;
            }
        }
        Ok(m)
    }
}

impl fmt::Display for FermionOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, a, v) in self.iter() {
            write!(f, "({:+.10e}{:+.10e}i)", v.re, v.im)?;
            for m in c {
                write!(f, " +_{m}")?;
            }
            for m in a {
                write!(f, " -_{m}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// `sum_p a†_p a_p` over the given modes.
pub fn number_operator(n_modes: usize, modes: impl IntoIterator<Item = usize>) -> FermionOperator {
    let mut op = FermionOperator::zero(n_modes);
    for p in modes {
        op.add_term(&LadderTerm::new(
            vec![LadderOp::create(p), LadderOp::annihilate(p)],
            1.0,
        ));
    }
    op
}

/// `H = e_offset + sum h_pq a†_p a_q + 1/2 sum <pq|rs> a†_p a†_q a_s a_r`
/// over spin orbitals, physicist-notation `g`.
pub fn build_hamiltonian(h: &DMatrix<f64>, g: &Tensor4, e_offset: f64) -> Result<FermionOperator> {
    let n = h.nrows();
    if h.ncols() != n || g.dim() != n {
        return Err(QveError::invalid(format!(
            "one-body {}x{} and two-body dimension {} disagree",
            h.nrows(),
            h.ncols(),
            g.dim()
        )));
    }
    let mut op = FermionOperator::identity(n, e_offset);
    for p in 0..n {
        for q in 0..n {
            let v = h[(p, q)];
            if v != 0.0 {
                op.add_term(&LadderTerm::new(
                    vec![LadderOp::create(p), LadderOp::annihilate(q)],
                    v,
                ));
            }
        }
    }
    for p in 0..n {
        for q in 0..n {
            if p == q {
                continue;
            }
            for r in 0..n {
                for s in 0..n {
                    if r == s {
                        continue;
                    }
                    let v = g[(p, q, r, s)];
                    if v != 0.0 {
                        op.add_term(&LadderTerm::new(
                            vec![
                                LadderOp::create(p),
                                LadderOp::create(q),
                                LadderOp::annihilate(s),
                                LadderOp::annihilate(r),
                            ],
                            0.5 * v,
                        ));
                    }
                }
            }
        }
    }
    Ok(op)
}

/// Lowest `n_alpha` alpha modes and lowest `n_beta` beta modes occupied,
/// alpha block first.
pub fn hartree_fock_occupation(n_alpha: usize, n_beta: usize, n_spatial: usize) -> Result<FockState> {
    if n_alpha > n_spatial || n_beta > n_spatial {
        return Err(QveError::invalid(format!(
            "({n_alpha}, {n_beta}) electrons do not fit in {n_spatial} spatial orbitals"
        )));
    }
    if 2 * n_spatial > 64 {
        return Err(QveError::ResourceLimit("more than 64 spin orbitals".into()));
    }
    let mut bits = 0u64;
    for p in 0..n_alpha {
        bits |= 1 << p;
    }
    for p in 0..n_beta {
        bits |= 1 << (n_spatial + p);
    }
    Ok(FockState::new(2 * n_spatial, bits))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn nilpotent_and_anticommutator() {
        let a0 = FermionOperator::term(2, &[LadderOp::annihilate(0)], 1.0).unwrap();
        let ad0 = FermionOperator::term(2, &[LadderOp::create(0)], 1.0).unwrap();
        assert!(a0.multiply(&a0).unwrap().is_empty());
        let anti = a0.multiply(&ad0).unwrap().add(&ad0.multiply(&a0).unwrap()).unwrap();
        assert_eq!(anti, FermionOperator::identity(2, 1.0));
    }

    #[test]
    fn normal_order_signs() {
        // a_0 a†_1 = -a†_1 a_0
        let op = FermionOperator::term(2, &[LadderOp::annihilate(0), LadderOp::create(1)], 1.0).unwrap();
        let terms: Vec<_> = op.iter().collect();
        assert_eq!(terms, vec![(&[1usize][..], &[0usize][..], c(-1.0))]);
        // a†_1 a†_0 = -a†_0 a†_1
        let op = FermionOperator::term(2, &[LadderOp::create(1), LadderOp::create(0)], 2.0).unwrap();
        let terms: Vec<_> = op.iter().collect();
        assert_eq!(terms, vec![(&[0usize, 1][..], &[][..], c(-2.0))]);
        // a†_0 a†_0 = 0
        let op = FermionOperator::term(1, &[LadderOp::create(0), LadderOp::create(0)], 1.0).unwrap();
        assert!(op.is_empty());
    }

    #[test]
    fn fock_action_signs() {
        let ad0 = FermionOperator::term(2, &[LadderOp::create(0)], 1.0).unwrap();
        let out = ad0.apply_to_fock(FockState::from_occupations("00").unwrap());
        assert_eq!(out, vec![(FockState::from_occupations("10").unwrap(), c(1.0))]);

        let ad1 = FermionOperator::term(2, &[LadderOp::create(1)], 1.0).unwrap();
        let out = ad1.apply_to_fock(FockState::from_occupations("10").unwrap());
        assert_eq!(out, vec![(FockState::from_occupations("11").unwrap(), c(-1.0))]);

        let n = number_operator(4, 0..4);
        let s = FockState::from_occupations("1011").unwrap();
        assert_eq!(n.apply_to_fock(s), vec![(s, c(3.0))]);
    }

    #[test]
    fn hf_occupations() {
        assert_eq!(hartree_fock_occupation(1, 1, 3).unwrap().to_string(), "100100");
        assert_eq!(hartree_fock_occupation(0, 0, 3).unwrap().to_string(), "000000");
        assert_eq!(hartree_fock_occupation(3, 3, 3).unwrap().to_string(), "111111");
        assert!(hartree_fock_occupation(4, 0, 3).is_err());
    }

    #[test]
    fn scalar_hamiltonian() {
        let h = DMatrix::zeros(4, 4);
        let g = Tensor4::zeros(4);
        let op = build_hamiltonian(&h, &g, -2.5).unwrap();
        assert_eq!(op, FermionOperator::identity(4, -2.5));
        assert!(build_hamiltonian(&DMatrix::zeros(3, 3), &g, 0.0).is_err());
    }

    #[test]
    fn mode_range_checked() {
        assert!(FermionOperator::term(2, &[LadderOp::create(2)], 1.0).is_err());
    }

    #[test]
    fn mismatched_multiply() {
        let a = FermionOperator::identity(2, 1.0);
        let b = FermionOperator::identity(3, 1.0);
        assert!(a.multiply(&b).is_err());
    }
}
