mod common;

use common::scenarios::*;
use common::*;

use qve_core::pipeline::run::{read_convergence, read_result, ConvergenceRow, CONVERGENCE_FILE, PARAMS_FILE};
use qve_core::pipeline::{
    prepare, read_params_log, replay_on_exact, run_vqe, summarize_last_fraction, AnsatzSpec, ProblemSource,
    RunConfig,
};
use qve_core::QveError;

fn without_timing(rows: &[ConvergenceRow]) -> Vec<(usize, usize, f64, f64)> {
    rows.iter()
        .map(|r| (r.iteration, r.fevals, r.energy_ha, r.std_error_ha))
        .collect()
}

#[test]
fn single_iteration_run_layout() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = beh2_config(AnsatzSpec::Uccsd, 1, dir.path());
    cfg.spsa.maxiter = 1;
    run_vqe(&cfg).unwrap();
    for f in ["convergence.csv", "params.jsonl", "result.json", "config.resolved"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let text = std::fs::read_to_string(dir.path().join(CONVERGENCE_FILE)).unwrap();
    assert!(text.starts_with("iteration,fevals,energy_ha,std_error_ha,elapsed_ms\n"));
    let rows = read_convergence(&dir.path().join(CONVERGENCE_FILE)).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].fevals, 53);
    let params = read_params_log(&dir.path().join(PARAMS_FILE)).unwrap();
    assert_eq!(params.len(), 1);
    assert_eq!(params[0].theta.len(), 8);
    let resolved = RunConfig::load(&dir.path().join("config.resolved")).unwrap();
    assert_eq!(resolved, cfg);
}

#[test]
fn runs_are_deterministic_and_self_consistent() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let mut cfg = beh2_config(AnsatzSpec::Hea { reps: 1 }, 5, a.path());
    cfg.spsa.maxiter = 60;
    cfg.noise = Some(qve_core::circuit::NoiseModel::depolarizing(0.01).unwrap());
    run_vqe(&cfg).unwrap();
    cfg.out_dir = b.path().to_path_buf();
    run_vqe(&cfg).unwrap();
    let ra = read_convergence(&a.path().join(CONVERGENCE_FILE)).unwrap();
    let rb = read_convergence(&b.path().join(CONVERGENCE_FILE)).unwrap();
    assert_eq!(without_timing(&ra), without_timing(&rb));
    assert_eq!(
        std::fs::read(a.path().join(PARAMS_FILE)).unwrap(),
        std::fs::read(b.path().join(PARAMS_FILE)).unwrap()
    );
    assert!(ra.iter().enumerate().all(|(k, r)| r.fevals == 50 + 3 * (k + 1)));

    // reported gap recomputed from the CSV
    let res = read_result(a.path()).unwrap();
    let energies: Vec<f64> = ra.iter().map(|r| r.energy_ha).collect();
    let (mean, std) = summarize_last_fraction(&energies, 0.1).unwrap();
    assert!((res.last_fraction_mean.unwrap() - mean).abs() < 1e-12);
    assert!((res.last_fraction_std.unwrap() - std).abs() < 1e-12);
    assert!((res.delta_e.unwrap() - (mean - res.exact_energy.unwrap()).abs()).abs() < 1e-12);
    assert_eq!(res.evaluations, 50 + 3 * 60 + 1);
}

#[test]
fn noiseless_replay_matches_logged_energies() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = beh2_config(AnsatzSpec::Uccsd, 2, dir.path());
    cfg.spsa.maxiter = 40;
    run_vqe(&cfg).unwrap();
    let prep = prepare(&cfg).unwrap();
    let records = read_params_log(&dir.path().join(PARAMS_FILE)).unwrap();
    let csv = replay_on_exact(&records, &prep.hamiltonian, &prep.circuit).unwrap();
    let replay = qve_core::pipeline::run::parse_replay_csv(&csv).unwrap();
    let rows = read_convergence(&dir.path().join(CONVERGENCE_FILE)).unwrap();
    assert_eq!(replay.len(), rows.len());
    for ((it, e), row) in replay.iter().zip(&rows) {
        assert_eq!(*it, row.iteration);
        assert!((e - row.energy_ha).abs() <= 5.0 * row.std_error_ha + 1e-12, "iteration {it}");
    }
}

#[test]
fn replay_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = beh2_config(AnsatzSpec::Uccsd, 0, dir.path());
    let prep = prepare(&cfg).unwrap();
    assert_eq!(replay_on_exact(&[], &prep.hamiltonian, &prep.circuit).unwrap(), "iteration,energy_ha\n");
    let wrong = qve_core::pipeline::ParamsRecord {
        iteration: 1,
        fevals: 53,
        theta: vec![0.0; 3],
    };
    assert!(replay_on_exact(&[wrong], &prep.hamiltonian, &prep.circuit).is_err());
}

#[test]
fn noisy_optimization_replays_lower() {
    let dir = tempfile::tempdir().unwrap();
    let (replay, noisy) = noisy_replay_trial(4, 0.01, 80, dir.path());
    assert!(replay < noisy, "{replay} vs {noisy}");
}

#[test]
fn stage_failures_are_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig::new(ProblemSource::Fixture(dir.path().join("missing.ham")), dir.path());
    let err = run_vqe(&cfg).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    let res = read_result(dir.path()).unwrap();
    assert_eq!(res.status, "error");
    assert_eq!(res.error.unwrap().stage, "problem");

    let mut bad = cfg.clone();
    bad.shots = 0;
    assert!(matches!(run_vqe(&bad), Err(QveError::Stage { .. })));
    assert_eq!(read_result(dir.path()).unwrap().error.unwrap().stage, "config");
}

#[test]
fn geometry_source_runs_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let geom = dir.path().join("h2.geom");
    std::fs::write(&geom, H2_GEOMETRY).unwrap();
    let mut cfg = RunConfig::new(
        ProblemSource::Geometry {
            path: geom,
            charge: 0,
        },
        dir.path().join("run"),
    );
    cfg.mapper = qve_core::mapping::Mapper::JordanWigner;
    cfg.taper = false;
    cfg.spsa.maxiter = 150;
    let (mean, exact) = vqe_summary(&cfg);
    assert!((exact - -1.1372838).abs() < 1e-6);
    assert!(mean - exact < 0.01, "{mean}");
}
