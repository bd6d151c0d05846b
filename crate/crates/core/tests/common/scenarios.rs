//! End-to-end scenarios shared by the integration tests and the acceptance
//! harness.

use std::path::Path;

use qve_core::ansatz::{build_hea, build_uccsd, hf_state_circuit};
use qve_core::circuit::{estimate, Circuit, NoiseModel};
use qve_core::fermion::{build_hamiltonian, hartree_fock_occupation};
use qve_core::mapping::{map_hamiltonian, sector_ground_energy, Mapper};
use qve_core::pauli::PauliSum;
use qve_core::pipeline::run::{initial_parameters, read_convergence, read_result};
use qve_core::pipeline::{
    parse_params_log, replay_on_exact, run_vqe, AnsatzSpec, ProblemSource, RunConfig,
};
use qve_core::scf::spin_orbital_expand;
use qve_core::zne::{run_zne, FitModel};

use super::{beh2_cas, coordinate_minimize, exact_energy, fixture_path};

pub fn beh2_tapered() -> PauliSum {
    let p = beh2_cas();
    let (h, g) = spin_orbital_expand(&p);
    let op = build_hamiltonian(&h, &g, p.e_offset).unwrap();
    map_hamiltonian(&op, Mapper::Parity, true, p.n_alpha, p.n_beta).unwrap()
}

pub fn beh2_exact() -> f64 {
    sector_ground_energy(&beh2_tapered(), Mapper::Parity, true, 1, 1).unwrap()
}

pub fn beh2_uccsd() -> Circuit {
    build_uccsd(1, 1, 3, Mapper::Parity, true).unwrap()
}

/// UCCSD parameters minimizing the exact energy.
pub fn beh2_uccsd_optimum() -> Vec<f64> {
    let (h, c) = (beh2_tapered(), beh2_uccsd());
    coordinate_minimize(|t| exact_energy(&c, t, &h), &vec![0.0; c.n_parameters()], 8, 1.0).0
}

/// Mean energy of the Hartree-Fock preparation circuit under depolarizing
/// noise of each strength (p1 = p2 / 10).
pub fn hf_energy_vs_noise(p2s: &[f64], shots: usize, seed: u64) -> Vec<f64> {
    let h = beh2_tapered();
    let occ = hartree_fock_occupation(1, 1, 3).unwrap();
    let c = hf_state_circuit(occ, Mapper::Parity, true).unwrap();
    p2s.iter()
        .map(|&p2| {
            let noise = NoiseModel::depolarizing(p2).unwrap();
            estimate(&c, &[], &h, shots, seed, Some(&noise)).unwrap().mean
        })
        .collect()
}

/// HEA (4 qubits, one repetition) parameters minimizing the exact energy,
/// started from the run-0 initial point.
pub fn beh2_hea_optimum() -> Vec<f64> {
    let (h, c) = (beh2_tapered(), build_hea(4, 1));
    let start = initial_parameters(AnsatzSpec::Hea { reps: 1 }, c.n_parameters(), 0);
    coordinate_minimize(|t| exact_energy(&c, t, &h), &start, 12, 1.5).0
}

/// (|raw - exact|, |quadratic extrapolation - exact|) for one seed, HEA at
/// `theta`.
pub fn zne_trial(theta: &[f64], p2: f64, shots: usize, seed: u64) -> (f64, f64) {
    let (h, c) = (beh2_tapered(), build_hea(4, 1));
    let exact = beh2_exact();
    let noise = NoiseModel::depolarizing(p2).unwrap();
    let r = run_zne(&c, theta, &h, &[1, 3, 5], shots, seed, &noise, &[FitModel::Quadratic]).unwrap();
    ((r.raw - exact).abs(), (r.fits[&FitModel::Quadratic].e0 - exact).abs())
}

pub fn beh2_config(ansatz: AnsatzSpec, seed: u64, out: &Path) -> RunConfig {
    let mut cfg = RunConfig::new(ProblemSource::Fixture(fixture_path("beh2_cas_2e3o.ham")), out);
    cfg.ansatz = ansatz;
    cfg.seed = seed;
    cfg
}

/// Runs VQE and returns the last-10% mean and the exact reference.
pub fn vqe_summary(cfg: &RunConfig) -> (f64, f64) {
    let dir = run_vqe(cfg).unwrap();
    let r = read_result(&dir).unwrap();
    (r.last_fraction_mean.unwrap(), r.exact_energy.unwrap())
}

/// Noisy HEA run, then noiseless replay: (final replay energy, final logged
/// noisy energy).
pub fn noisy_replay_trial(seed: u64, p2: f64, maxiter: usize, out: &Path) -> (f64, f64) {
    let mut cfg = beh2_config(AnsatzSpec::Hea { reps: 1 }, seed, out);
    cfg.noise = Some(NoiseModel::depolarizing(p2).unwrap());
    cfg.spsa.maxiter = maxiter;
    let dir = run_vqe(&cfg).unwrap();
    let rows = read_convergence(&dir.join("convergence.csv")).unwrap();
    let log = std::fs::read_to_string(dir.join("params.jsonl")).unwrap();
    let records = parse_params_log(&log, "params").unwrap();
    let prep = qve_core::pipeline::prepare(&cfg).unwrap();
    let csv = replay_on_exact(&records, &prep.hamiltonian, &prep.circuit).unwrap();
    let replay = qve_core::pipeline::run::parse_replay_csv(&csv).unwrap();
    (replay.last().unwrap().1, rows.last().unwrap().energy_ha)
}
