"""Regenerate the reference Hamiltonian fixtures with PySCF.

These files are produced once and checked in; the Rust code never calls
PySCF. Run from the repository root:

    python3 tools/gen_pyscf_fixtures.py

Outputs (crates/core/fixtures/):
  beh2_cas_2e3o.ham   BeH2, Be-H 1.326 A, STO-3G, 2 lowest MOs frozen,
                      3 active orbitals, 2 active electrons
  beh2_full_6e7o.ham  same molecule, all 7 MOs, no frozen core
  reference.txt       RHF / FCI totals printed by PySCF for cross-checks
"""

import itertools
import os

import numpy as np
from pyscf import ao2mo, fci, gto, scf

OUT = os.path.join(os.path.dirname(__file__), "..", "crates", "core", "fixtures")
CUT = 1e-12


def canonical(p, q, r, s):
    # physicist <pq|rs> == chemist (pr|qs); take the smallest member of the
    # 8-fold orbit so each unique integral is written once
    i, j, k, l = p, r, q, s
    orbit = []
    for a, b, c, d in [(i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k)]:
        orbit.append((a, b, c, d))
        orbit.append((c, d, a, b))
    a, b, c, d = min(orbit)
    return (a, c, b, d)


def write_fixture(path, title, norb, nalpha, nbeta, constant, h1, h2phys):
    lines = [f"# {title}", f"norb {norb}", f"nalpha {nalpha}", f"nbeta {nbeta}",
             f"constant {constant:.16e}"]
    for p in range(norb):
        for q in range(p, norb):
            v = h1[p, q]
            if abs(v) >= CUT:
                lines.append(f"h {p} {q} {v:.16e}")
    seen = set()
    for p, q, r, s in itertools.product(range(norb), repeat=4):
        key = canonical(p, q, r, s)
        if key != (p, q, r, s) or key in seen:
            continue
        seen.add(key)
        v = h2phys[p, q, r, s]
        if abs(v) >= CUT:
            lines.append(f"g {p} {q} {r} {s} {v:.16e}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def main():
    mol = gto.M(atom="H -1.326 0 0; Be 0 0 0; H 1.326 0 0", basis="sto3g",
                unit="Angstrom", charge=0, spin=0)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    e_hf = mf.kernel()
    c = mf.mo_coeff
    hcore = mf.get_hcore()
    eri_ao = mol.intor("int2e")
    e_nuc = mol.energy_nuc()

    # full space
    h1 = c.T @ hcore @ c
    chem = ao2mo.full(eri_ao, c, compact=False).reshape((7,) * 4)
    phys = chem.transpose(0, 2, 1, 3)
    write_fixture(os.path.join(OUT, "beh2_full_6e7o.ham"),
                  "BeH2 STO-3G, Be-H 1.326 A, all 7 RHF MOs (PySCF)",
                  7, 3, 3, e_nuc, h1, phys)

    # active space: freeze MOs 0,1; active MOs 2,3,4
    core, act = [0, 1], [2, 3, 4]
    cc, ca = c[:, core], c[:, act]
    dm = 2 * cc @ cc.T
    vj, vk = scf.hf.get_jk(mol, dm)
    e_core = e_nuc + np.einsum("ij,ji", dm, hcore) + 0.5 * np.einsum("ij,ji", dm, vj - 0.5 * vk)
    h1a = ca.T @ (hcore + vj - 0.5 * vk) @ ca
    chem_a = ao2mo.full(eri_ao, ca, compact=False).reshape((3,) * 4)
    write_fixture(os.path.join(OUT, "beh2_cas_2e3o.ham"),
                  "BeH2 STO-3G, Be-H 1.326 A, CAS(2e,3o) over RHF MOs 2-4, MOs 0-1 frozen (PySCF)",
                  3, 1, 1, e_core, h1a, chem_a.transpose(0, 2, 1, 3))

    e_cas, _ = fci.direct_spin1.kernel(h1a, chem_a, 3, (1, 1))
    e_fci_full, _ = fci.FCI(mf).kernel()

    h2 = gto.M(atom="H 0 0 0; H 0 0 0.74", basis="sto3g", unit="Angstrom")
    mf2 = scf.RHF(h2)
    mf2.conv_tol = 1e-12
    e_h2 = mf2.kernel()
    with open(os.path.join(OUT, "reference.txt"), "w") as fh:
        fh.write(f"beh2_rhf_total {e_hf:.12f}\n")
        fh.write(f"beh2_cas_2e3o_fci_total {e_cas + e_core:.12f}\n")
        fh.write(f"beh2_full_fci_total {e_fci_full:.12f}\n")
        fh.write(f"h2_0.74A_rhf_total {e_h2:.12f}\n")


if __name__ == "__main__":
    main()
