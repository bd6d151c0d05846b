//! Restricted Hartree-Fock, AO to MO transformation and active-space
//! reduction.

use nalgebra::{DMatrix, DVector};

use crate::error::{QveError, Result};
use crate::integrals::IntegralSet;
use crate::tensor::Tensor4;

pub const MAX_ITERATIONS: usize = 200;
pub const ENERGY_TOL: f64 = 1e-10;
pub const DENSITY_TOL: f64 = 1e-8;
pub const LINEAR_DEPENDENCE_TOL: f64 = 1e-10;
const DAMPING: f64 = 0.5;
const OSCILLATION_WINDOW: usize = 10;

#[derive(Debug, Clone)]
pub struct ScfResult {
    pub mo_coefficients: DMatrix<f64>,
    pub orbital_energies: DVector<f64>,
    pub total_energy: f64,
    pub density: DMatrix<f64>,
    pub converged: bool,
    pub iterations: usize,
}

/// Spatial-orbital problem handed to the quantum side. `h2` is physicist
/// `<pq|rs>`.
#[derive(Debug, Clone, PartialEq)]
pub struct ActiveSpaceProblem {
    pub n_spatial: usize,
    pub n_alpha: usize,
    pub n_beta: usize,
    pub h1: DMatrix<f64>,
    pub h2: Tensor4,
    pub e_offset: f64,
}

impl ActiveSpaceProblem {
    pub fn new(
        n_alpha: usize,
        n_beta: usize,
        h1: DMatrix<f64>,
        h2: Tensor4,
        e_offset: f64,
    ) -> Result<Self> {
        let n = h1.nrows();
        if h1.ncols() != n || h2.dim() != n {
            return Err(QveError::invalid(format!(
                "one-body {}x{} and two-body dimension {} disagree",
                h1.nrows(),
                h1.ncols(),
                h2.dim()
            )));
        }
        if n_alpha > n || n_beta > n {
            return Err(QveError::invalid(format!(
                "({n_alpha}, {n_beta}) electrons do not fit in {n} spatial orbitals"
            )));
        }
        Ok(ActiveSpaceProblem {
            n_spatial: n,
            n_alpha,
            n_beta,
            h1,
            h2,
            e_offset,
        })
    }

    pub fn n_spin_orbitals(&self) -> usize {
        2 * self.n_spatial
    }
}

/// Sorted eigen-decomposition of a symmetric matrix.
pub fn sorted_symmetric_eigen(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(order.len(), order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = DMatrix::zeros(m.nrows(), m.ncols());
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Symmetric orthogonalizer `S^{-1/2}`.
pub fn symmetric_orthogonalizer(s: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (vals, vecs) = sorted_symmetric_eigen(s);
    if vals[0] < LINEAR_DEPENDENCE_TOL {
        return Err(QveError::LinearDependence(vals[0]));
    }
    let inv_sqrt = DMatrix::from_diagonal(&vals.map(|v| 1.0 / v.sqrt()));
    Ok(&vecs * inv_sqrt * vecs.transpose())
}

fn fock_matrix(h: &DMatrix<f64>, eri: &Tensor4, d: &DMatrix<f64>) -> DMatrix<f64> {
    let n = h.nrows();
    let mut f = h.clone();
    for mu in 0..n {
        for nu in 0..=mu {
            let mut g = 0.0;
            for la in 0..n {
                for si in 0..n {
                    g += d[(la, si)] * (eri[(mu, nu, la, si)] - 0.5 * eri[(mu, la, nu, si)]);
                }
            }
            f[(mu, nu)] += g;
            if mu != nu {
                f[(nu, mu)] += g;
            }
        }
    }
    f
}

fn density_from(c: &DMatrix<f64>, n_occ: usize) -> DMatrix<f64> {
    let occ = c.columns(0, n_occ);
    occ * occ.transpose() * 2.0
}

fn electronic_energy(d: &DMatrix<f64>, h: &DMatrix<f64>, f: &DMatrix<f64>) -> f64 {
    0.5 * d.component_mul(&(h + f)).sum()
}

fn diagonalize_fock(f: &DMatrix<f64>, x: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let fp = x.transpose() * f * x;
    let (e, cp) = sorted_symmetric_eigen(&fp);
    (e, x * cp)
}

/// Closed-shell Roothaan iterations from the core-Hamiltonian guess.
pub fn run_rhf(ints: &IntegralSet, n_electrons: usize) -> Result<ScfResult> {
    let n = ints.n_basis();
    if !n_electrons.is_multiple_of(2) {
        return Err(QveError::invalid(format!(
            "restricted closed-shell SCF needs an even electron count, got {n_electrons}"
        )));
    }
    let n_occ = n_electrons / 2;
    if n_occ > n {
        return Err(QveError::invalid(format!(
            "{n_occ} doubly occupied orbitals exceed {n} basis functions"
        )));
    }
    let x = symmetric_orthogonalizer(&ints.overlap)?;
    let h = ints.core_hamiltonian();

    let (mut eps, mut c) = diagonalize_fock(&h, &x);
    let mut d = density_from(&c, n_occ);
    let mut f = fock_matrix(&h, &ints.eri, &d);
    let mut energy = electronic_energy(&d, &h, &f);
    let mut converged = false;
    let mut iterations = 0;
    let mut damping = false;
    let mut last_delta = 0.0f64;
    let mut sign_flips = 0usize;

    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let (e_new, c_new) = diagonalize_fock(&f, &x);
        let mut d_new = density_from(&c_new, n_occ);
        if damping {
            d_new = &d_new * (1.0 - DAMPING) + &d * DAMPING;
        }
        let f_new = fock_matrix(&h, &ints.eri, &d_new);
        let energy_new = electronic_energy(&d_new, &h, &f_new);

        let delta_e = energy_new - energy;
        let rms = ((&d_new - &d).norm_squared() / (n * n) as f64).sqrt();
        if delta_e * last_delta < 0.0 {
            sign_flips += 1;
        } else {
            sign_flips = 0;
        }
        if sign_flips >= OSCILLATION_WINDOW {
            damping = true;
        }
        last_delta = delta_e;

        eps = e_new;
        c = c_new;
        d = d_new;
        f = f_new;
        energy = energy_new;
        if delta_e.abs() < ENERGY_TOL && rms < DENSITY_TOL {
            converged = true;
            break;
        }
    }
    if damping {
        // Orbitals consistent with the final (damped) density's Fock matrix.
        let (e_fin, c_fin) = diagonalize_fock(&f, &x);
        eps = e_fin;
        c = c_fin;
    }

    Ok(ScfResult {
        mo_coefficients: c,
        orbital_energies: eps,
        total_energy: energy + ints.e_nuc,
        density: d,
        converged,
        iterations,
    })
}

fn check_columns(cols: &[usize], n_mo: usize) -> Result<()> {
    if let Some(&bad) = cols.iter().find(|&&c| c >= n_mo) {
        return Err(QveError::invalid(format!(
            "orbital index {bad} outside {n_mo} molecular orbitals"
        )));
    }
    Ok(())
}

/// One-body `C^T (T+V) C` and two-body integrals over the selected MO
/// columns; the two-body tensor comes back in physicist order.
pub fn mo_transform(
    ints: &IntegralSet,
    c: &DMatrix<f64>,
    active_columns: &[usize],
) -> Result<(DMatrix<f64>, Tensor4)> {
    let n = ints.n_basis();
    if c.nrows() != n {
        return Err(QveError::invalid(format!(
            "coefficient matrix has {} rows for {n} basis functions",
            c.nrows()
        )));
    }
    check_columns(active_columns, c.ncols())?;
    let m = active_columns.len();
    let mut cs = DMatrix::zeros(n, m);
    for (dst, &src) in active_columns.iter().enumerate() {
        cs.set_column(dst, &c.column(src));
    }
    let h1 = cs.transpose() * ints.core_hamiltonian() * &cs;
    let chem = transform_eri(&ints.eri, &cs);
    Ok((h1, chem.swap_middle()))
}

/// Four-index chemist-order transform, one index per pass.
pub fn transform_eri(eri: &Tensor4, c: &DMatrix<f64>) -> Tensor4 {
    let n = c.nrows();
    let m = c.ncols();
    let src = eri.as_slice();
    // (pν|λσ)
    let mut t1 = vec![0.0; m * n * n * n];
    for p in 0..m {
        for mu in 0..n {
            let cv = c[(mu, p)];
            if cv == 0.0 {
                continue;
            }
            let s = &src[mu * n * n * n..(mu + 1) * n * n * n];
            let d = &mut t1[p * n * n * n..(p + 1) * n * n * n];
            for (o, v) in d.iter_mut().zip(s) {
                *o += cv * v;
            }
        }
    }
    // (pq|λσ)
    let mut t2 = vec![0.0; m * m * n * n];
    for p in 0..m {
        for q in 0..m {
            for nu in 0..n {
                let cv = c[(nu, q)];
                let s = &t1[(p * n + nu) * n * n..(p * n + nu + 1) * n * n];
                let d = &mut t2[(p * m + q) * n * n..(p * m + q + 1) * n * n];
                for (o, v) in d.iter_mut().zip(s) {
                    *o += cv * v;
                }
            }
        }
    }
    // (pq|rσ)
    let mut t3 = vec![0.0; m * m * m * n];
    for pq in 0..m * m {
        for r in 0..m {
            for la in 0..n {
                let cv = c[(la, r)];
                let s = &t2[(pq * n + la) * n..(pq * n + la + 1) * n];
                let d = &mut t3[(pq * m + r) * n..(pq * m + r + 1) * n];
                for (o, v) in d.iter_mut().zip(s) {
                    *o += cv * v;
                }
            }
        }
    }
    let mut out = Tensor4::zeros(m);
    for p in 0..m {
        for q in 0..m {
            for r in 0..m {
                let row = &t3[((p * m + q) * m + r) * n..((p * m + q) * m + r + 1) * n];
                for s in 0..m {
                    out[(p, q, r, s)] = (0..n).map(|si| row[si] * c[(si, s)]).sum();
                }
            }
        }
    }
    out
}

/// Freezes doubly occupied `core` orbitals into a scalar offset and a mean
/// field on the `active` block. Inputs are full-space MO integrals, `h2`
/// physicist.
pub fn active_space_reduce(
    h1: &DMatrix<f64>,
    h2: &Tensor4,
    core: &[usize],
    active: &[usize],
    n_alpha: usize,
    n_beta: usize,
    e_nuc: f64,
) -> Result<ActiveSpaceProblem> {
    let n = h1.nrows();
    if h1.ncols() != n || h2.dim() != n {
        return Err(QveError::invalid("one-body and two-body dimensions disagree"));
    }
    check_columns(core, n)?;
    check_columns(active, n)?;
    if let Some(c) = core.iter().find(|c| active.contains(c)) {
        return Err(QveError::invalid(format!("orbital {c} is both core and active")));
    }
    let mut seen = vec![false; n];
    for &i in core.iter().chain(active) {
        if seen[i] {
            return Err(QveError::invalid(format!("orbital {i} listed twice")));
        }
        seen[i] = true;
    }
    if n_alpha > active.len() || n_beta > active.len() {
        return Err(QveError::invalid(format!(
            "({n_alpha}, {n_beta}) active electrons do not fit in {} active orbitals",
            active.len()
        )));
    }

    let mut e_offset = e_nuc;
    for &c in core {
        e_offset += 2.0 * h1[(c, c)];
        for &d in core {
            e_offset += 2.0 * h2[(c, d, c, d)] - h2[(c, d, d, c)];
        }
    }
    let m = active.len();
    let mut h1a = DMatrix::zeros(m, m);
    let mut h2a = Tensor4::zeros(m);
    for (i, &p) in active.iter().enumerate() {
        for (j, &q) in active.iter().enumerate() {
            let mut v = h1[(p, q)];
            for &c in core {
                v += 2.0 * h2[(p, c, q, c)] - h2[(p, c, c, q)];
            }
            h1a[(i, j)] = v;
            for (k, &r) in active.iter().enumerate() {
                for (l, &s) in active.iter().enumerate() {
                    h2a[(i, j, k, l)] = h2[(p, q, r, s)];
                }
            }
        }
    }
    ActiveSpaceProblem::new(n_alpha, n_beta, h1a, h2a, e_offset)
}

/// Blocked spin-orbital tensors: `[0, n)` alpha, `[n, 2n)` beta.
pub fn spin_orbital_expand(problem: &ActiveSpaceProblem) -> (DMatrix<f64>, Tensor4) {
    let n = problem.n_spatial;
    let m = 2 * n;
    let mut h = DMatrix::zeros(m, m);
    let mut g = Tensor4::zeros(m);
    for p in 0..m {
        for q in 0..m {
            if p / n == q / n {
                h[(p, q)] = problem.h1[(p % n, q % n)];
            }
            for r in 0..m {
                if p / n != r / n {
                    continue;
                }
                for s in 0..m {
                    if q / n == s / n {
                        g[(p, q, r, s)] = problem.h2[(p % n, q % n, r % n, s % n)];
                    }
                }
            }
        }
    }
    (h, g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_problem() -> ActiveSpaceProblem {
        let h1 = DMatrix::from_row_slice(2, 2, &[-1.0, 0.1, 0.1, -0.5]);
        let mut h2 = Tensor4::zeros(2);
        h2[(0, 0, 0, 0)] = 0.6;
        h2[(1, 1, 1, 1)] = 0.5;
        ActiveSpaceProblem::new(1, 1, h1, h2, 0.3).unwrap()
    }

    #[test]
    fn spin_expansion_blocks() {
        let p = ActiveSpaceProblem::new(1, 1, DMatrix::from_element(1, 1, -0.7), Tensor4::zeros(1), 0.0)
            .unwrap();
        let (h, _) = spin_orbital_expand(&p);
        assert_eq!(h, DMatrix::from_diagonal_element(2, 2, -0.7));

        let (_, g) = spin_orbital_expand(&toy_problem());
        // alpha, alpha, beta, alpha: spin(p) != spin(r)
        assert_eq!(g[(0, 0, 2, 0)], 0.0);
        assert_eq!(g[(0, 2, 0, 2)], 0.6);
    }

    #[test]
    fn empty_core_is_restriction() {
        let p = toy_problem();
        let red = active_space_reduce(&p.h1, &p.h2, &[], &[0, 1], 1, 1, 0.3).unwrap();
        assert_eq!(red, p);
    }

    #[test]
    fn partition_errors() {
        let p = toy_problem();
        assert!(active_space_reduce(&p.h1, &p.h2, &[0], &[0, 1], 1, 1, 0.0).is_err());
        assert!(active_space_reduce(&p.h1, &p.h2, &[0], &[1], 2, 0, 0.0).is_err());
        assert!(active_space_reduce(&p.h1, &p.h2, &[], &[2], 0, 0, 0.0).is_err());
    }

    #[test]
    fn orthogonalizer_rejects_singular() {
        let s = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert!(matches!(
            symmetric_orthogonalizer(&s),
            Err(QveError::LinearDependence(_))
        ));
    }
}
