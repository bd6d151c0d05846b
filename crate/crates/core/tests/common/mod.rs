//! Independent reference implementations shared by the integration tests and
//! the acceptance harness. Nothing here calls the library's own matrix
//! builders or integral kernels.
#![allow(dead_code)]

use std::collections::HashMap;
use std::f64::consts::PI;
use std::path::PathBuf;

use nalgebra::DMatrix;
use num_complex::Complex64;

use qve_core::fermion::{LadderKind, LadderOp};
use qve_core::integrals::{ContractedOrbital, Vec3};
use qve_core::pauli::PauliSum;
use qve_core::pipeline::load_fixture;
use qve_core::scf::ActiveSpaceProblem;

pub mod algebra;
pub mod scenarios;

pub type CMat = DMatrix<Complex64>;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn beh2_cas() -> ActiveSpaceProblem {
    load_fixture(&fixture_path("beh2_cas_2e3o.ham")).expect("cas fixture")
}

pub fn beh2_full() -> ActiveSpaceProblem {
    load_fixture(&fixture_path("beh2_full_6e7o.ham")).expect("full fixture")
}

/// Values printed by the offline electronic-structure run that produced the
/// fixtures.
pub fn reference(key: &str) -> f64 {
    let text = std::fs::read_to_string(fixture_path("reference.txt")).expect("reference.txt");
    let map: HashMap<&str, f64> = text
        .lines()
        .filter_map(|l| {
            let mut it = l.split_whitespace();
            Some((it.next()?, it.next()?.parse().ok()?))
        })
        .collect();
    map[key]
}

pub const H2_GEOMETRY: &str = "units angstrom\nH 0 0 0\nH 0 0 0.74\n";

// ---------------------------------------------------------------------------
// dense matrices

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pauli_2x2(letter: char) -> CMat {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match letter {
        'I' => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        'X' => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        'Y' => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        'Z' => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
        _ => panic!("bad letter {letter}"),
    }
}

/// Kronecker product of 2x2 factors, qubit 0 as the least significant bit.
pub fn kron_label(label: &str) -> CMat {
    let mut m = DMatrix::from_element(1, 1, c(1.0, 0.0));
    for ch in label.chars() {
        m = pauli_2x2(ch).kronecker(&m);
    }
    m
}

pub fn kron_sum(h: &PauliSum) -> CMat {
    let n = h.n_qubits();
    let mut m = CMat::zeros(1 << n, 1 << n);
    for t in h.iter() {
        m += kron_label(&t.label(n)) * t.coeff;
    }
    m
}

/// Dense ladder operator built from its action on occupation bitstrings:
/// `a_p |..n_p..> = (-1)^{sum_{j<p} n_j} |..n_p - 1..>`.
pub fn dense_ladder(n_modes: usize, op: LadderOp) -> CMat {
    let dim = 1usize << n_modes;
    let mut m = CMat::zeros(dim, dim);
    for b in 0..dim {
        let occ = (b >> op.mode) & 1;
        let parity = (0..op.mode).filter(|j| (b >> j) & 1 == 1).count();
        let sign = if parity % 2 == 0 { 1.0 } else { -1.0 };
        let target = match (op.kind, occ) {
            (LadderKind::Annihilation, 1) => b & !(1 << op.mode),
            (LadderKind::Creation, 0) => b | (1 << op.mode),
            _ => continue,
        };
        m[(target, b)] = c(sign, 0.0);
    }
    m
}

pub fn dense_word(n_modes: usize, word: &[LadderOp]) -> CMat {
    let dim = 1usize << n_modes;
    let mut m = CMat::identity(dim, dim);
    for op in word {
        m *= dense_ladder(n_modes, *op);
    }
    m
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Hermitian eigenvalues in ascending order.
pub fn eigenvalues(m: &CMat) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

// ---------------------------------------------------------------------------
// integral quadrature

struct Prim {
    amp: f64,
    alpha: f64,
    center: Vec3,
}

fn prims(o: &ContractedOrbital) -> Vec<Prim> {
    assert!(o.is_s(), "quadrature oracle handles s functions only");
    o.primitives()
        .iter()
        .map(|(d, p)| Prim {
            amp: d * p.norm(),
            alpha: p.exponent(),
            center: p.center(),
        })
        .collect()
}

/// Trapezoid rule on a uniform grid wide enough for Gaussian integrands of
/// total exponent `width_exp`; super-exponentially accurate for such
/// integrands.
fn trapezoid(f: impl Fn(f64) -> f64, mid: f64, width_exp: f64) -> f64 {
    let sigma = (1.0 / width_exp).sqrt();
    let h = sigma / 8.0;
    let n = (12.0 * sigma / h).ceil() as i64;
    (-n..=n).map(|k| f(mid + k as f64 * h)).sum::<f64>() * h
}

fn overlap_1d(a: &Prim, b: &Prim, d: usize) -> f64 {
    let (xa, xb) = (a.center[d], b.center[d]);
    let mid = (a.alpha * xa + b.alpha * xb) / (a.alpha + b.alpha);
    trapezoid(
        |x| (-a.alpha * (x - xa).powi(2) - b.alpha * (x - xb).powi(2)).exp(),
        mid,
        a.alpha + b.alpha,
    )
}

fn derivative_overlap_1d(a: &Prim, b: &Prim, d: usize) -> f64 {
    let (xa, xb) = (a.center[d], b.center[d]);
    let mid = (a.alpha * xa + b.alpha * xb) / (a.alpha + b.alpha);
    trapezoid(
        |x| {
            let ga = -2.0 * a.alpha * (x - xa);
            let gb = -2.0 * b.alpha * (x - xb);
            ga * gb * (-a.alpha * (x - xa).powi(2) - b.alpha * (x - xb).powi(2)).exp()
        },
        mid,
        a.alpha + b.alpha,
    )
}

pub fn quad_overlap(a: &ContractedOrbital, b: &ContractedOrbital) -> f64 {
    let (pa, pb) = (prims(a), prims(b));
    let mut s = 0.0;
    for x in &pa {
        for y in &pb {
            s += x.amp * y.amp * (0..3).map(|d| overlap_1d(x, y, d)).product::<f64>();
        }
    }
    s
}

/// `1/2 <grad a | grad b>`, separable per Cartesian direction.
pub fn quad_kinetic(a: &ContractedOrbital, b: &ContractedOrbital) -> f64 {
    let (pa, pb) = (prims(a), prims(b));
    let mut t = 0.0;
    for x in &pa {
        for y in &pb {
            let s: Vec<f64> = (0..3).map(|d| overlap_1d(x, y, d)).collect();
            let mut sum = 0.0;
            for d in 0..3 {
                let others: f64 = (0..3).filter(|&e| e != d).map(|e| s[e]).product();
                sum += derivative_overlap_1d(x, y, d) * others;
            }
            t += 0.5 * x.amp * y.amp * sum;
        }
    }
    t
}

/// Composite Simpson on `[lo, hi]` with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    let h = (hi - lo) / n as f64;
    let mut s = f(lo) + f(hi);
    for k in 1..n {
        s += f(lo + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Electrostatic potential at distance `r` of a unit-charge spherical
/// Gaussian `(mu/pi)^{3/2} exp(-mu r^2)`, from the shell theorem by radial
/// quadrature.
pub fn gaussian_potential(mu: f64, r: f64) -> f64 {
    let rho = |s: f64| (mu / PI).powf(1.5) * (-mu * s * s).exp();
    let rmax = 14.0 / mu.sqrt();
    let n = 4000;
    if r < 1e-12 {
        return simpson(|s| rho(s) * 4.0 * PI * s, 0.0, rmax, n);
    }
    let inner = if r < rmax {
        simpson(|s| rho(s) * 4.0 * PI * s * s, 0.0, r, n) / r
    } else {
        1.0 / r
    };
    let outer = if r < rmax {
        simpson(|s| rho(s) * 4.0 * PI * s, r, rmax, n)
    } else {
        0.0
    };
    inner + outer
}

fn dist(a: Vec3, b: Vec3) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Product of two s Gaussians as a single Gaussian: (weight, exponent, center).
/// The product rule itself is checked pointwise in the integral tests.
pub fn gaussian_product(a: f64, ca: Vec3, b: f64, cb: Vec3) -> (f64, f64, Vec3) {
    let p = a + b;
    let center = [0, 1, 2].map(|d| (a * ca[d] + b * cb[d]) / p);
    let k = (-a * b / p * dist(ca, cb).powi(2)).exp();
    (k, p, center)
}

/// `-sum_C Z_C <a| 1/|r - C| |b>`.
pub fn quad_nuclear(a: &ContractedOrbital, b: &ContractedOrbital, nuclei: &[(f64, Vec3)]) -> f64 {
    let (pa, pb) = (prims(a), prims(b));
    let mut v = 0.0;
    for x in &pa {
        for y in &pb {
            let (k, p, center) = gaussian_product(x.alpha, x.center, y.alpha, y.center);
            let charge = k * (PI / p).powf(1.5);
            for &(z, pos) in nuclei {
                v -= x.amp * y.amp * z * charge * gaussian_potential(p, dist(center, pos));
            }
        }
    }
    v
}

/// Chemist `(ab|cd)`: two product charge clouds; their interaction equals the
/// potential of one Gaussian whose variance is the sum of both.
pub fn quad_eri(
    a: &ContractedOrbital,
    b: &ContractedOrbital,
    c_: &ContractedOrbital,
    d: &ContractedOrbital,
) -> f64 {
    let (pa, pb, pc, pd) = (prims(a), prims(b), prims(c_), prims(d));
    let mut e = 0.0;
    for w in &pa {
        for x in &pb {
            let (k1, p, cp) = gaussian_product(w.alpha, w.center, x.alpha, x.center);
            let q1 = k1 * (PI / p).powf(1.5);
            for y in &pc {
                for z in &pd {
                    let (k2, q, cq) = gaussian_product(y.alpha, y.center, z.alpha, z.center);
                    let q2 = k2 * (PI / q).powf(1.5);
                    let mu = p * q / (p + q);
                    e += w.amp * x.amp * y.amp * z.amp * q1 * q2 * gaussian_potential(mu, dist(cp, cq));
                }
            }
        }
    }
    e
}

/// Largest absolute deviation between the library's integrals and the
/// quadrature values over S, T, V and all ERIs.
pub fn integral_oracle_error(mol: &qve_core::integrals::Molecule) -> f64 {
    use qve_core::integrals::{build_integrals, molecule_orbitals, BasisTable};
    let table = BasisTable::sto3g();
    let ints = build_integrals(mol, &table).expect("integrals");
    let orbs = molecule_orbitals(mol, &table).expect("orbitals");
    let nuclei: Vec<(f64, Vec3)> = mol.atoms.iter().map(|a| (f64::from(a.z), a.position)).collect();
    let n = orbs.len();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((ints.overlap[(i, j)] - quad_overlap(&orbs[i], &orbs[j])).abs());
            worst = worst.max((ints.kinetic[(i, j)] - quad_kinetic(&orbs[i], &orbs[j])).abs());
            worst = worst.max((ints.nuclear[(i, j)] - quad_nuclear(&orbs[i], &orbs[j], &nuclei)).abs());
            for k in 0..n {
                for l in 0..n {
                    let q = quad_eri(&orbs[i], &orbs[j], &orbs[k], &orbs[l]);
                    worst = worst.max((ints.eri[(i, j, k, l)] - q).abs());
                }
            }
        }
    }
    worst
}

/// Cyclic coordinate descent with a golden-section line search of half-width
/// `radius` around the current coordinate.
pub fn coordinate_minimize(f: impl Fn(&[f64]) -> f64, x0: &[f64], sweeps: usize, radius: f64) -> (Vec<f64>, f64) {
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let mut x = x0.to_vec();
    for _ in 0..sweeps {
        for i in 0..x.len() {
            let at = |t: f64, x: &mut Vec<f64>| {
                x[i] = t;
                f(x)
            };
            let (mut lo, mut hi) = (x[i] - radius, x[i] + radius);
            let mut y = x.clone();
            let mut a = hi - golden * (hi - lo);
            let mut b = lo + golden * (hi - lo);
            let (mut fa, mut fb) = (at(a, &mut y), at(b, &mut y));
            for _ in 0..80 {
                if fa < fb {
                    hi = b;
                    b = a;
                    fb = fa;
                    a = hi - golden * (hi - lo);
                    fa = at(a, &mut y);
                } else {
                    lo = a;
                    a = b;
                    fa = fb;
                    b = lo + golden * (hi - lo);
                    fb = at(b, &mut y);
                }
            }
            let best = 0.5 * (lo + hi);
            if at(best, &mut y) < f(&x) {
                x[i] = best;
            }
        }
    }
    let fx = f(&x);
    (x, fx)
}

pub fn exact_energy(c: &qve_core::circuit::Circuit, theta: &[f64], h: &PauliSum) -> f64 {
    qve_core::circuit::estimate(c, theta, h, 0, 0, None).expect("exact estimate").mean
}

// ---------------------------------------------------------------------------
// textbook gate matrices

use qve_core::circuit::{Circuit, GateKind};

fn one_qubit_textbook(kind: GateKind, t: f64) -> [[Complex64; 2]; 2] {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    let (ch, sh) = ((t / 2.0).cos(), (t / 2.0).sin());
    match kind {
        GateKind::X => [[z, o], [o, z]],
        GateKind::H => {
            let s = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            [[s, s], [s, -s]]
        }
        GateKind::SqrtX => [[c(0.5, 0.5), c(0.5, -0.5)], [c(0.5, -0.5), c(0.5, 0.5)]],
        GateKind::SqrtXdg => [[c(0.5, -0.5), c(0.5, 0.5)], [c(0.5, 0.5), c(0.5, -0.5)]],
        GateKind::RX => [[c(ch, 0.0), -i * sh], [-i * sh, c(ch, 0.0)]],
        GateKind::RY => [[c(ch, 0.0), c(-sh, 0.0)], [c(sh, 0.0), c(ch, 0.0)]],
        GateKind::RZ => [[c(ch, -sh), z], [z, c(ch, sh)]],
        _ => unreachable!(),
    }
}

/// Full unitary of a circuit from textbook matrices, qubit 0 least
/// significant.
pub fn circuit_unitary(circ: &Circuit, theta: &[f64]) -> CMat {
    let n = circ.n_qubits();
    let dim = 1usize << n;
    let mut u = CMat::identity(dim, dim);
    for g in circ.gates() {
        let q = g.qubits();
        let mut m = CMat::zeros(dim, dim);
        match g.kind {
            GateKind::CX | GateKind::CZ | GateKind::SWAP => {
                for b in 0..dim {
                    let (a, t) = ((b >> q[0]) & 1, (b >> q[1]) & 1);
                    let (out, amp) = match g.kind {
                        GateKind::CX => (if a == 1 { b ^ (1 << q[1]) } else { b }, 1.0),
                        GateKind::CZ => (b, if a == 1 && t == 1 { -1.0 } else { 1.0 }),
                        _ => {
                            let swapped = (b & !(1 << q[0]) & !(1 << q[1])) | (t << q[0]) | (a << q[1]);
                            (swapped, 1.0)
                        }
                    };
                    m[(out, b)] = c(amp, 0.0);
                }
            }
            kind => {
                let t = g.angle.map_or(0.0, |a| a.resolve(theta).unwrap());
                let k = one_qubit_textbook(kind, t);
                for b in 0..dim {
                    let bit = (b >> q[0]) & 1;
                    for out_bit in 0..2 {
                        let out = (b & !(1 << q[0])) | (out_bit << q[0]);
                        m[(out, b)] += k[out_bit][bit];
                    }
                }
            }
        }
        u = m * u;
    }
    u
}

/// `|<a|b>|` for two state vectors.
pub fn overlap_modulus(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>().norm()
}
