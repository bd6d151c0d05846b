//! Gaussian basis functions and analytic s-type integrals.
//!
//! Only s shells are integrated. Molecules that need p or higher shells
//! (Be, Li 2p, ...) are rejected by [`build_integrals`] with
//! [`QveError::UnsupportedAngularMomentum`] and must come in through a
//! Hamiltonian fixture instead.

mod basis;
mod molecule;
mod primitive;

pub use basis::{orbitals_for_atom, BasisTable, ContractedOrbital, Shell, ShellKind};
pub use molecule::{
    atomic_number, element_symbol, nuclear_repulsion, Atom, LengthUnit, Molecule, BOHR_PER_ANGSTROM,
};
pub use primitive::{
    boys_f0, eri_s, gaussian_product, kinetic_s, normalize_primitive, nuclear_attraction_s, overlap_s,
    GaussianPrimitive, GaussianProduct, Vec3, BOYS_SWITCH,
};

use nalgebra::DMatrix;

use crate::error::{QveError, Result};
use crate::tensor::Tensor4;

/// AO integrals of a molecule. `eri` is stored in chemist order `(ab|cd)`.
#[derive(Debug, Clone)]
pub struct IntegralSet {
    pub overlap: DMatrix<f64>,
    pub kinetic: DMatrix<f64>,
    pub nuclear: DMatrix<f64>,
    pub eri: Tensor4,
    pub e_nuc: f64,
    pub labels: Vec<String>,
}

impl IntegralSet {
    pub fn n_basis(&self) -> usize {
        self.overlap.nrows()
    }

    pub fn core_hamiltonian(&self) -> DMatrix<f64> {
        &self.kinetic + &self.nuclear
    }
}

fn contract2(
    a: &ContractedOrbital,
    b: &ContractedOrbital,
    f: impl Fn(&GaussianPrimitive, &GaussianPrimitive) -> Result<f64>,
) -> Result<f64> {
    let mut sum = 0.0;
    for (da, pa) in a.primitives() {
        for (db, pb) in b.primitives() {
            sum += da * db * f(pa, pb)?;
        }
    }
    Ok(sum)
}

pub fn contracted_overlap(a: &ContractedOrbital, b: &ContractedOrbital) -> Result<f64> {
    contract2(a, b, overlap_s)
}

pub fn contracted_kinetic(a: &ContractedOrbital, b: &ContractedOrbital) -> Result<f64> {
    contract2(a, b, kinetic_s)
}

/// Attraction to every nucleus of `mol`.
pub fn contracted_nuclear(a: &ContractedOrbital, b: &ContractedOrbital, mol: &Molecule) -> Result<f64> {
    contract2(a, b, |pa, pb| {
        mol.atoms
            .iter()
            .map(|atom| nuclear_attraction_s(pa, pb, &atom.position, atom.z))
            .sum()
    })
}

/// Chemist-notation `(ab|cd)` over contracted orbitals.
pub fn contracted_eri(
    a: &ContractedOrbital,
    b: &ContractedOrbital,
    c: &ContractedOrbital,
    d: &ContractedOrbital,
) -> Result<f64> {
    let mut sum = 0.0;
    for (da, pa) in a.primitives() {
        for (db, pb) in b.primitives() {
            for (dc, pc) in c.primitives() {
                for (dd, pd) in d.primitives() {
                    sum += da * db * dc * dd * eri_s(pa, pb, pc, pd)?;
                }
            }
        }
    }
    Ok(sum)
}

/// Contracted orbitals of a whole molecule in atom order.
pub fn molecule_orbitals(mol: &Molecule, table: &BasisTable) -> Result<Vec<ContractedOrbital>> {
    let mut orbitals = Vec::new();
    for atom in &mol.atoms {
        let symbol = atom.symbol();
        let shells = table
            .shells(symbol)
            .ok_or_else(|| QveError::invalid(format!("basis table has no entry for element {symbol}")))?;
        if let Some(shell) = shells.iter().find(|s| s.kind != ShellKind::S) {
            return Err(QveError::UnsupportedAngularMomentum {
                element: symbol.to_string(),
                shell: shell.tag.clone(),
            });
        }
        orbitals.extend(orbitals_for_atom(table, symbol, atom.position)?);
    }
    Ok(orbitals)
}

/// Assembles S, T, V and the ERI tensor for an s-only molecule.
pub fn build_integrals(mol: &Molecule, table: &BasisTable) -> Result<IntegralSet> {
    let orbitals = molecule_orbitals(mol, table)?;
    let e_nuc = nuclear_repulsion(mol)?;
    let n = orbitals.len();
    let mut overlap = DMatrix::zeros(n, n);
    let mut kinetic = DMatrix::zeros(n, n);
    let mut nuclear = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let (a, b) = (&orbitals[i], &orbitals[j]);
            let s = if i == j { 1.0 } else { contracted_overlap(a, b)? };
            let t = contracted_kinetic(a, b)?;
            let v = contracted_nuclear(a, b, mol)?;
            overlap[(i, j)] = s;
            overlap[(j, i)] = s;
            kinetic[(i, j)] = t;
            kinetic[(j, i)] = t;
            nuclear[(i, j)] = v;
            nuclear[(j, i)] = v;
        }
    }

    let mut eri = Tensor4::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            let ij = i * (i + 1) / 2 + j;
            for k in 0..n {
                for l in 0..=k {
                    let kl = k * (k + 1) / 2 + l;
                    if kl > ij {
                        continue;
                    }
                    let v = contracted_eri(&orbitals[i], &orbitals[j], &orbitals[k], &orbitals[l])?;
                    for (a, b, c, d) in [
                        (i, j, k, l),
                        (j, i, k, l),
                        (i, j, l, k),
                        (j, i, l, k),
                        (k, l, i, j),
                        (l, k, i, j),
                        (k, l, j, i),
                        (l, k, j, i),
                    ] {
                        eri[(a, b, c, d)] = v;
                    }
                }
            }
        }
    }

    Ok(IntegralSet {
        overlap,
        kinetic,
        nuclear,
        eri,
        e_nuc,
        labels: orbitals.iter().map(|o| o.label().to_string()).collect(),
    })
}
