//! VQE runs, their on-disk logs, and reporting helpers.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::config::{AnsatzSpec, ProblemSource, RunConfig};
use super::fixture::load_fixture;
use crate::ansatz::{build_hea, build_uccsd};
use crate::circuit::{estimate, Circuit, EstimatorResult};
use crate::error::{QveError, Result};
use crate::fermion::{build_hamiltonian, hartree_fock_occupation};
use crate::integrals::{build_integrals, BasisTable, Molecule};
use crate::mapping::{encoded_basis_index, map_hamiltonian, sector_ground_energy, Mapper};
use crate::pauli::{expectation_exact, PauliSum, DEFAULT_QUBIT_CAP};
use crate::rng::{derive_seed, stream, Purpose};
use crate::scf::{active_space_reduce, mo_transform, run_rhf, ActiveSpaceProblem};
use crate::spsa::{minimize, IterationRecord};

pub const CONVERGENCE_FILE: &str = "convergence.csv";
pub const PARAMS_FILE: &str = "params.jsonl";
pub const RESULT_FILE: &str = "result.json";
pub const CONFIG_FILE: &str = "config.resolved";

/// Default reporting window: the last 10% of iterations.
pub const LAST_FRACTION: f64 = 0.10;

/// Problem, qubit Hamiltonian, ansatz and starting point for one run.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub problem: ActiveSpaceProblem,
    pub hamiltonian: PauliSum,
    pub circuit: Circuit,
    pub theta0: Vec<f64>,
    pub exact_energy: Option<f64>,
}

/// Closed-shell molecule through integrals, RHF and an all-active space.
pub fn problem_from_geometry(path: &Path, charge: i32) -> Result<ActiveSpaceProblem> {
    let text = fs::read_to_string(path).map_err(|e| QveError::io(path, e))?;
    let mol = Molecule::parse_geometry(&text, &path.display().to_string(), charge)?;
    problem_from_molecule(&mol)
}

pub fn problem_from_molecule(mol: &Molecule) -> Result<ActiveSpaceProblem> {
    let ints = build_integrals(mol, &BasisTable::sto3g())?;
    let n_el = mol.n_electrons();
    let scf = run_rhf(&ints, n_el)?;
    if !scf.converged {
        return Err(QveError::invalid(format!(
            "SCF did not converge in {} iterations",
            scf.iterations
        )));
    }
    let all: Vec<usize> = (0..ints.n_basis()).collect();
    let (h1, h2) = mo_transform(&ints, &scf.mo_coefficients, &all)?;
    active_space_reduce(&h1, &h2, &[], &all, n_el / 2, n_el / 2, ints.e_nuc)
}

pub fn load_problem(source: &ProblemSource) -> Result<ActiveSpaceProblem> {
    match source {
        ProblemSource::Fixture(p) => load_fixture(p),
        ProblemSource::Geometry { path, charge } => problem_from_geometry(path, *charge),
    }
}

pub fn qubit_hamiltonian(problem: &ActiveSpaceProblem, cfg: &RunConfig) -> Result<PauliSum> {
    let (h, g) = crate::scf::spin_orbital_expand(problem);
    let op = build_hamiltonian(&h, &g, problem.e_offset)?;
    map_hamiltonian(&op, cfg.mapper, cfg.taper, problem.n_alpha, problem.n_beta)
}

pub fn build_ansatz(problem: &ActiveSpaceProblem, cfg: &RunConfig, n_qubits: usize) -> Result<Circuit> {
    match cfg.ansatz {
        AnsatzSpec::Uccsd => build_uccsd(
            problem.n_alpha,
            problem.n_beta,
            problem.n_spatial,
            cfg.mapper,
            cfg.taper,
        ),
        AnsatzSpec::Hea { reps } => Ok(build_hea(n_qubits, reps)),
    }
}

/// Exact expectation of the mapped Hamiltonian in the Hartree-Fock basis
/// state.
pub fn hartree_fock_energy(problem: &ActiveSpaceProblem, h: &PauliSum, mapper: Mapper, taper: bool) -> Result<f64> {
    let hf = hartree_fock_occupation(problem.n_alpha, problem.n_beta, problem.n_spatial)?;
    let idx = encoded_basis_index(mapper, hf, taper)? as usize;
    let mut psi = vec![Complex64::new(0.0, 0.0); 1usize << h.n_qubits()];
    psi[idx] = Complex64::new(1.0, 0.0);
    expectation_exact(h, &psi)
}

/// HEA: uniform on [0, 2pi); UCCSD: uniform on [-0.1, 0.1].
pub fn initial_parameters(ansatz: AnsatzSpec, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = stream(seed, Purpose::InitialParameters, 0, 0);
    match ansatz {
        AnsatzSpec::Hea { .. } => (0..n)
            .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
            .collect(),
        AnsatzSpec::Uccsd => (0..n).map(|_| rng.random_range(-0.1..=0.1)).collect(),
    }
}

pub fn prepare(cfg: &RunConfig) -> Result<Prepared> {
    cfg.validate().map_err(|e| e.in_stage("config"))?;
    let problem = load_problem(&cfg.problem).map_err(|e| e.in_stage("problem"))?;
    let hamiltonian = qubit_hamiltonian(&problem, cfg).map_err(|e| e.in_stage("mapping"))?;
    let circuit = build_ansatz(&problem, cfg, hamiltonian.n_qubits()).map_err(|e| e.in_stage("ansatz"))?;
    let theta0 = initial_parameters(cfg.ansatz, circuit.n_parameters(), cfg.seed);
    let exact_energy = if hamiltonian.n_qubits() <= DEFAULT_QUBIT_CAP {
        Some(
            sector_ground_energy(&hamiltonian, cfg.mapper, cfg.taper, problem.n_alpha, problem.n_beta)
                .map_err(|e| e.in_stage("exact"))?,
        )
    } else {
        None
    };
    Ok(Prepared {
        problem,
        hamiltonian,
        circuit,
        theta0,
        exact_energy,
    })
}

/// Mean and population standard deviation of the last `ceil(fraction * N)`
/// entries.
pub fn summarize_last_fraction(history: &[f64], fraction: f64) -> Result<(f64, f64)> {
    if history.is_empty() {
        return Err(QveError::invalid("empty energy history"));
    }
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(QveError::invalid(format!("fraction {fraction} not in (0, 1]")));
    }
    let window = ((fraction * history.len() as f64).ceil() as usize).clamp(1, history.len());
    let tail = &history[history.len() - window..];
    let mean = tail.iter().sum::<f64>() / window as f64;
    let var = tail.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / window as f64;
    Ok((mean, var.sqrt()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageError {
    pub stage: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<StageError>,
    pub n_qubits: usize,
    pub n_parameters: usize,
    pub iterations: usize,
    pub evaluations: usize,
    pub spsa_a: f64,
    pub final_theta: Vec<f64>,
    pub final_energy: Option<EstimatorResult>,
    pub last_fraction: f64,
    pub last_fraction_mean: Option<f64>,
    pub last_fraction_std: Option<f64>,
    pub exact_energy: Option<f64>,
    pub delta_e: Option<f64>,
}

impl RunResult {
    fn failed(stage: &str, err: &QveError) -> Self {
        let (stage, message) = match err {
            QveError::Stage { stage, source } => (stage.clone(), source.to_string()),
            other => (stage.to_string(), other.to_string()),
        };
        RunResult {
            status: "error".into(),
            error: Some(StageError { stage, message }),
            n_qubits: 0,
            n_parameters: 0,
            iterations: 0,
            evaluations: 0,
            spsa_a: 0.0,
            final_theta: Vec::new(),
            final_energy: None,
            last_fraction: LAST_FRACTION,
            last_fraction_mean: None,
            last_fraction_std: None,
            exact_energy: None,
            delta_e: None,
        }
    }
}

/// One line of `params.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub iteration: usize,
    pub fevals: usize,
    pub theta: Vec<f64>,
}

pub fn parse_params_log(text: &str, source_name: &str) -> Result<Vec<ParamsRecord>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str::<ParamsRecord>(l)
                .map_err(|e| QveError::parse(source_name, i + 1, e.to_string()))
        })
        .collect()
}

pub fn read_params_log(path: &Path) -> Result<Vec<ParamsRecord>> {
    let text = fs::read_to_string(path).map_err(|e| QveError::io(path, e))?;
    parse_params_log(&text, &path.display().to_string())
}

/// Noiseless exact energies of the ansatz at each logged parameter vector,
/// as CSV `iteration,energy_ha`.
pub fn replay_on_exact(records: &[ParamsRecord], h: &PauliSum, circuit: &Circuit) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["iteration", "energy_ha"]).map_err(csv_err)?;
    for r in records {
        if r.theta.len() != circuit.n_parameters() {
            return Err(QveError::invalid(format!(
                "iteration {} has {} parameters, ansatz expects {}",
                r.iteration,
                r.theta.len(),
                circuit.n_parameters()
            )));
        }
        let e = estimate(circuit, &r.theta, h, 0, 0, None)?;
        w.write_record([r.iteration.to_string(), format!("{:.12}", e.mean)])
            .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| QveError::invalid(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Parses `iteration,energy_ha` rows back (from replay output).
pub fn parse_replay_csv(text: &str) -> Result<Vec<(usize, f64)>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.records()
        .map(|rec| {
            let rec = rec.map_err(csv_err)?;
            let it = rec.get(0).and_then(|s| s.parse().ok());
            let e = rec.get(1).and_then(|s| s.parse().ok());
            match (it, e) {
                (Some(i), Some(e)) => Ok((i, e)),
                _ => Err(QveError::invalid("malformed replay row")),
            }
        })
        .collect()
}

fn csv_err(e: csv::Error) -> QveError {
    QveError::invalid(format!("csv: {e}"))
}

/// Convergence CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub iteration: usize,
    pub fevals: usize,
    pub energy_ha: f64,
    pub std_error_ha: f64,
    pub elapsed_ms: u64,
}

pub fn read_convergence(path: &Path) -> Result<Vec<ConvergenceRow>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    r.deserialize().map(|row| row.map_err(csv_err)).collect()
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| QveError::invalid(e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| QveError::io(path, e))
}

/// Per-evaluation seed so results do not depend on scheduling.
pub fn evaluation_seed(seed: u64, eval_index: u64) -> u64 {
    derive_seed(seed, Purpose::Evaluation, eval_index, 0)
}

/// Runs the full pipeline and writes the run directory. Failures are
/// recorded in `result.json` with their stage and returned.
pub fn run_vqe(cfg: &RunConfig) -> Result<PathBuf> {
    let dir = cfg.out_dir.clone();
    fs::create_dir_all(&dir).map_err(|e| QveError::io(&dir, e))?;
    let result_path = dir.join(RESULT_FILE);
    match run_inner(cfg, &dir) {
        Ok(res) => {
            write_json(&result_path, &res)?;
            Ok(dir)
        }
        Err((stage, err)) => {
            write_json(&result_path, &RunResult::failed(stage, &err))?;
            Err(err)
        }
    }
}

fn run_inner(cfg: &RunConfig, dir: &Path) -> std::result::Result<RunResult, (&'static str, QveError)> {
    let io_stage = |e: QveError| ("output", e);
    let config_text = cfg.to_toml().map_err(|e| ("config", e))?;
    let cfg_path = dir.join(CONFIG_FILE);
    fs::write(&cfg_path, config_text).map_err(|e| io_stage(QveError::io(&cfg_path, e)))?;

    let prep = prepare(cfg).map_err(|e| ("prepare", e))?;

    let conv_path = dir.join(CONVERGENCE_FILE);
    let params_path = dir.join(PARAMS_FILE);
    let mut conv = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(&conv_path)
        .map_err(|e| io_stage(csv_err(e)))?;
    conv.write_record(["iteration", "fevals", "energy_ha", "std_error_ha", "elapsed_ms"])
        .map_err(|e| io_stage(csv_err(e)))?;
    let mut params = std::io::BufWriter::new(
        fs::File::create(&params_path).map_err(|e| io_stage(QveError::io(&params_path, e)))?,
    );

    let start = Instant::now();
    let noise = cfg.noise;
    let seed = cfg.seed;
    let shots = cfg.shots;
    let mut cost = |theta: &[f64], i: u64| {
        estimate(
            &prep.circuit,
            theta,
            &prep.hamiltonian,
            shots,
            evaluation_seed(seed, i),
            noise.as_ref(),
        )
    };
    let mut log = |rec: &IterationRecord| -> Result<()> {
        conv.serialize(ConvergenceRow {
            iteration: rec.k,
            fevals: rec.function_evals_so_far,
            energy_ha: rec.energy.mean,
            std_error_ha: rec.energy.std_error,
            elapsed_ms: start.elapsed().as_millis() as u64,
        })
        .map_err(csv_err)?;
        let line = serde_json::to_string(&ParamsRecord {
            iteration: rec.k,
            fevals: rec.function_evals_so_far,
            theta: rec.theta.clone(),
        })
        .map_err(|e| QveError::invalid(e.to_string()))?;
        writeln!(params, "{line}").map_err(|e| QveError::io(&params_path, e))?;
        Ok(())
    };
    let outcome = minimize(&mut cost, &prep.theta0, &cfg.spsa, seed, &mut log).map_err(|e| ("optimize", e))?;
    conv.flush().map_err(|e| io_stage(QveError::io(&conv_path, e)))?;
    params.flush().map_err(|e| io_stage(QveError::io(&params_path, e)))?;

    let energies: Vec<f64> = outcome.history.iter().map(|r| r.energy.mean).collect();
    let (mean, std) = summarize_last_fraction(&energies, LAST_FRACTION).map_err(|e| ("summary", e))?;
    Ok(RunResult {
        status: "ok".into(),
        error: None,
        n_qubits: prep.circuit.n_qubits(),
        n_parameters: prep.circuit.n_parameters(),
        iterations: outcome.history.len(),
        evaluations: outcome.evaluations,
        spsa_a: outcome.a,
        final_theta: outcome.theta,
        final_energy: Some(outcome.final_energy),
        last_fraction: LAST_FRACTION,
        last_fraction_mean: Some(mean),
        last_fraction_std: Some(std),
        exact_energy: prep.exact_energy,
        delta_e: prep.exact_energy.map(|e| (mean - e).abs()),
    })
}

pub fn read_result(dir: &Path) -> Result<RunResult> {
    let path = dir.join(RESULT_FILE);
    let text = fs::read_to_string(&path).map_err(|e| QveError::io(&path, e))?;
    serde_json::from_str(&text).map_err(|e| QveError::parse(&path.display().to_string(), e.line(), e.to_string()))
}

/// Gnuplot script plotting a run's convergence curve, with the exact
/// reference as a horizontal line when known.
pub fn gnuplot_script(run_dir: &Path, exact: Option<f64>) -> String {
    let csv = run_dir.join(CONVERGENCE_FILE);
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set key autotitle columnhead\n");
    s.push_str("set xlabel 'iteration'\nset ylabel 'energy (Ha)'\n");
    let mut plot = format!(
        "plot '{}' using 1:3:4 with yerrorlines title 'VQE'",
        csv.display()
    );
    if let Some(e) = exact {
        plot.push_str(&format!(", {e} with lines dashtype 2 title 'exact'"));
    }
    s.push_str(&plot);
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn last_fraction_windows() {
        assert_eq!(summarize_last_fraction(&[2.0; 7], 0.1).unwrap(), (2.0, 0.0));
        let h: Vec<f64> = (1..=10).map(f64::from).collect();
        let (m, s) = summarize_last_fraction(&h, 0.2).unwrap();
        assert_eq!((m, s), (9.5, 0.5));
        let h: Vec<f64> = (0..400).map(f64::from).collect();
        let (m, _) = summarize_last_fraction(&h, 0.1).unwrap();
        assert_eq!(m, (360..400).map(f64::from).sum::<f64>() / 40.0);
        assert!(summarize_last_fraction(&[], 0.1).is_err());
    }

    #[test]
    fn params_log_parsing() {
        let text = "{\"iteration\":1,\"fevals\":53,\"theta\":[0.5,-1.0]}\n\n";
        let r = parse_params_log(text, "p").unwrap();
        assert_eq!(r[0].theta, vec![0.5, -1.0]);
        let e = parse_params_log("{}\n", "p").unwrap_err();
        assert!(matches!(e, QveError::Parse { line: 1, .. }));
    }

    #[test]
    fn initial_parameter_ranges() {
        let t = initial_parameters(AnsatzSpec::Uccsd, 50, 1);
        assert!(t.iter().all(|x| x.abs() <= 0.1));
        let t = initial_parameters(AnsatzSpec::Hea { reps: 1 }, 50, 1);
        assert!(t.iter().all(|x| (0.0..std::f64::consts::TAU).contains(x)));
    }
}
