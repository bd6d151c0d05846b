//! Matrix-level checks of the fermion and qubit operator algebra on small
//! random operators.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qve_core::fermion::{FermionOperator, LadderOp, LadderTerm};
use qve_core::mapping::{map_operator, Mapper};

use super::{dense_word, eigenvalues, kron_sum, max_abs_diff, CMat};

pub const MAPPERS: [Mapper; 3] = [Mapper::JordanWigner, Mapper::Parity, Mapper::BravyiKitaev];

fn coeff(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Random Hermitian operator built from number-conserving one- and two-body
/// words plus their adjoints.
pub fn random_number_conserving(n_modes: usize, n_terms: usize, seed: u64) -> FermionOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut terms = Vec::new();
    for _ in 0..n_terms {
        let word = if rng.random_bool(0.5) {
            let (p, q) = (rng.random_range(0..n_modes), rng.random_range(0..n_modes));
            vec![LadderOp::create(p), LadderOp::annihilate(q)]
        } else {
            let mut m = || rng.random_range(0..n_modes);
            vec![
                LadderOp::create(m()),
                LadderOp::create(m()),
                LadderOp::annihilate(m()),
                LadderOp::annihilate(m()),
            ]
        };
        let c = coeff(&mut rng);
        let adjoint: Vec<LadderOp> = word.iter().rev().map(|o| o.dagger()).collect();
        terms.push(LadderTerm::new(word, c));
        terms.push(LadderTerm::new(adjoint, c.conj()));
    }
    FermionOperator::from_terms(n_modes, &terms).expect("random operator")
}

/// Random words of arbitrary ladder operators (not number conserving).
pub fn random_words(n_modes: usize, n_terms: usize, max_len: usize, seed: u64) -> Vec<LadderTerm> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n_terms)
        .map(|_| {
            let len = rng.random_range(0..=max_len);
            let word = (0..len)
                .map(|_| {
                    let p = rng.random_range(0..n_modes);
                    if rng.random_bool(0.5) {
                        LadderOp::create(p)
                    } else {
                        LadderOp::annihilate(p)
                    }
                })
                .collect();
            LadderTerm::new(word, coeff(&mut rng))
        })
        .collect()
}

pub fn dense_terms(n_modes: usize, terms: &[LadderTerm]) -> CMat {
    let dim = 1 << n_modes;
    let mut m = CMat::zeros(dim, dim);
    for t in terms {
        m += dense_word(n_modes, &t.factors) * t.coeff;
    }
    m
}

/// Largest eigenvalue deviation between the fermionic matrix and each
/// mapped qubit matrix.
pub fn spectrum_error(op: &FermionOperator) -> f64 {
    let reference = eigenvalues(&dense_of(op));
    let mut worst: f64 = 0.0;
    for m in MAPPERS {
        let q = map_operator(op, m).expect("mapping");
        let ev = eigenvalues(&kron_sum(&q));
        for (a, b) in reference.iter().zip(&ev) {
            worst = worst.max((a - b).abs());
        }
    }
    worst
}

/// Dense matrix of a normal-ordered operator built from the oracle ladder
/// matrices.
pub fn dense_of(op: &FermionOperator) -> CMat {
    let terms: Vec<LadderTerm> = op.ladder_terms();
    dense_terms(op.n_modes(), &terms)
}

/// Largest entry of `{A_p, A_q^dag} - delta_pq` and `{A_p, A_q}` over all
/// mode pairs, for every mapping.
pub fn anticommutation_error(n_modes: usize) -> f64 {
    let dim = 1 << n_modes;
    let id = CMat::identity(dim, dim);
    let mut worst: f64 = 0.0;
    for m in MAPPERS {
        let ladder = |op: LadderOp| {
            let f = FermionOperator::term(n_modes, &[op], 1.0).unwrap();
            kron_sum(&map_operator(&f, m).unwrap())
        };
        let ann: Vec<CMat> = (0..n_modes).map(|p| ladder(LadderOp::annihilate(p))).collect();
        let cre: Vec<CMat> = (0..n_modes).map(|p| ladder(LadderOp::create(p))).collect();
        for p in 0..n_modes {
            // the images must also be each other's adjoints
            worst = worst.max(max_abs_diff(&ann[p].adjoint(), &cre[p]));
            for q in 0..n_modes {
                let delta = if p == q { id.clone() } else { CMat::zeros(dim, dim) };
                let ac = &ann[p] * &cre[q] + &cre[q] * &ann[p];
                worst = worst.max(max_abs_diff(&ac, &delta));
                let aa = &ann[p] * &ann[q] + &ann[q] * &ann[p];
                worst = worst.max(max_abs_diff(&aa, &CMat::zeros(dim, dim)));
            }
        }
    }
    worst
}

/// Normal-ordered storage against the product of oracle matrices, for sums
/// and for operator products.
pub fn normal_order_error(n_modes: usize, seed: u64) -> f64 {
    let a_terms = random_words(n_modes, 5, 4, seed);
    let b_terms = random_words(n_modes, 4, 3, seed ^ 0x9e37_79b9);
    let a = FermionOperator::from_terms(n_modes, &a_terms).unwrap();
    let b = FermionOperator::from_terms(n_modes, &b_terms).unwrap();
    let (da, db) = (dense_terms(n_modes, &a_terms), dense_terms(n_modes, &b_terms));
    let ab = a.multiply(&b).unwrap();
    max_abs_diff(&a.to_dense().unwrap(), &da)
        .max(max_abs_diff(&dense_of(&a), &da))
        .max(max_abs_diff(&ab.to_dense().unwrap(), &(&da * &db)))
        .max(max_abs_diff(&a.adjoint().to_dense().unwrap(), &da.adjoint()))
}
