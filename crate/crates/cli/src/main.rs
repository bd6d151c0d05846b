use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use qve_core::circuit::{circuit_stats, NoiseModel};
use qve_core::integrals::{build_integrals, BasisTable, Molecule};
use qve_core::mapping::{mapping_stats, sector_ground_energy, Mapper};
use qve_core::pipeline::run::{
    hartree_fock_energy, load_problem, problem_from_molecule, qubit_hamiltonian, read_result, CONFIG_FILE,
    PARAMS_FILE,
};
use qve_core::pipeline::{
    format_fixture, gnuplot_script, prepare, read_params_log, replay_on_exact, run_vqe, AnsatzSpec,
    ProblemSource, RunConfig,
};
use qve_core::spsa::SpsaConfig;
use qve_core::zne::{run_zne, FitModel};
use qve_core::{QveError, Result};

#[derive(Parser)]
#[command(name = "qve", version, about = "Variational quantum eigensolver pipeline for small molecules")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Geometry file to Hamiltonian fixture (s-only STO-3G, all orbitals active).
    Hamiltonian {
        #[arg(long)]
        geometry: PathBuf,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        charge: i32,
        /// Output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Qubit count, term count and average Pauli weight as JSON.
    Map(MapArgs),
    /// Exact ground energy in the electron-number sector as JSON.
    Exact(MapArgs),
    /// Run VQE and write a run directory.
    Vqe(VqeArgs),
    /// Re-evaluate a run's logged parameters without noise or shots.
    Replay {
        /// Run directory written by `qve vqe`.
        #[arg(long)]
        run: PathBuf,
        /// CSV output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Zero-noise extrapolation at a run's final parameters.
    Zne(ZneArgs),
}

#[derive(Args, Clone)]
struct ProblemArgs {
    /// Hamiltonian fixture.
    #[arg(long, conflicts_with = "geometry", required_unless_present = "geometry")]
    ham: Option<PathBuf>,
    /// Geometry file (s-only basis).
    #[arg(long)]
    geometry: Option<PathBuf>,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    charge: i32,
}

impl ProblemArgs {
    fn source(&self) -> ProblemSource {
        match (&self.ham, &self.geometry) {
            (Some(p), _) => ProblemSource::Fixture(p.clone()),
            (None, Some(g)) => ProblemSource::Geometry {
                path: g.clone(),
                charge: self.charge,
            },
            (None, None) => unreachable!("clap enforces a problem source"),
        }
    }
}

#[derive(Args, Clone)]
struct MapArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, value_parser = parse_mapper, default_value = "parity")]
    mapper: Mapper,
    #[arg(long)]
    taper: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum AnsatzArg {
    Uccsd,
    Hea,
}

#[derive(Args, Clone)]
struct VqeArgs {
    #[command(flatten)]
    map: MapArgs,
    #[arg(long, value_enum, default_value = "uccsd")]
    ansatz: AnsatzArg,
    #[arg(long, default_value_t = 1)]
    reps: usize,
    #[arg(long, default_value_t = 400)]
    maxiter: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Batch of seeds run in parallel, one subdirectory `seed_<s>` each.
    #[arg(long, value_delimiter = ',', conflicts_with = "seed")]
    seeds: Option<Vec<u64>>,
    #[arg(long, default_value_t = qve_core::pipeline::config::DEFAULT_SHOTS)]
    shots: usize,
    /// Noise model TOML file.
    #[arg(long)]
    noise: Option<PathBuf>,
    #[arg(long, default_value = "run")]
    out: PathBuf,
    /// Print a gnuplot script for the convergence curve.
    #[arg(long)]
    gnuplot: bool,
}

#[derive(Args, Clone)]
struct ZneArgs {
    /// Run directory whose final parameters, problem and ansatz are used.
    #[arg(long)]
    run: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "1,3,5")]
    folds: Vec<usize>,
    #[arg(long, value_delimiter = ',', value_parser = parse_fit, default_value = "linear,quadratic,exponential")]
    fit: Vec<FitModel>,
    #[arg(long, default_value_t = 40000)]
    shots: usize,
    /// Noise model TOML file; defaults to the run's noise model.
    #[arg(long)]
    noise: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fold table (fold, energy, std error) CSV path.
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn parse_mapper(s: &str) -> std::result::Result<Mapper, String> {
    s.parse().map_err(|e: QveError| e.to_string())
}

fn parse_fit(s: &str) -> std::result::Result<FitModel, String> {
    s.parse().map_err(|e: QveError| e.to_string())
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json value"));
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| QveError::io(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn map_config(args: &MapArgs) -> RunConfig {
    let mut cfg = RunConfig::new(args.problem.source(), "");
    cfg.mapper = args.mapper;
    cfg.taper = args.taper;
    cfg
}

fn cmd_hamiltonian(geometry: &Path, charge: i32, out: Option<&Path>) -> Result<()> {
    let text = fs::read_to_string(geometry).map_err(|e| QveError::io(geometry, e))?;
    let mol = Molecule::parse_geometry(&text, &geometry.display().to_string(), charge)?;
    // fail early on unsupported shells before the SCF
    build_integrals(&mol, &BasisTable::sto3g())?;
    let problem = problem_from_molecule(&mol)?;
    let title = format!("{} (STO-3G, all orbitals active)", geometry.display());
    write_or_print(out, &format_fixture(&problem, Some(&title)))
}

fn cmd_map(args: &MapArgs) -> Result<()> {
    let cfg = map_config(args);
    let problem = load_problem(&cfg.problem)?;
    let h = qubit_hamiltonian(&problem, &cfg)?;
    print_json(&serde_json::to_value(mapping_stats(&h)).expect("stats"));
    Ok(())
}

fn cmd_exact(args: &MapArgs) -> Result<()> {
    let cfg = map_config(args);
    let problem = load_problem(&cfg.problem)?;
    let h = qubit_hamiltonian(&problem, &cfg)?;
    let e = sector_ground_energy(&h, cfg.mapper, cfg.taper, problem.n_alpha, problem.n_beta)?;
    let e_hf = hartree_fock_energy(&problem, &h, cfg.mapper, cfg.taper)?;
    print_json(&json!({
        "mapper": cfg.mapper.name(),
        "taper": cfg.taper,
        "n_qubits": h.n_qubits(),
        "energy_ha": e,
        "hartree_fock_energy_ha": e_hf,
    }));
    Ok(())
}

fn load_noise(path: Option<&Path>) -> Result<Option<NoiseModel>> {
    path.map(NoiseModel::load).transpose()
}

fn cmd_vqe(args: &VqeArgs) -> Result<()> {
    let mut base = map_config(&args.map);
    base.ansatz = match args.ansatz {
        AnsatzArg::Uccsd => AnsatzSpec::Uccsd,
        AnsatzArg::Hea => AnsatzSpec::Hea { reps: args.reps },
    };
    base.shots = args.shots;
    base.noise = load_noise(args.noise.as_deref())?;
    base.spsa = SpsaConfig {
        maxiter: args.maxiter,
        ..SpsaConfig::default()
    };
    let configs: Vec<RunConfig> = match &args.seeds {
        Some(seeds) => seeds
            .iter()
            .map(|&s| RunConfig {
                seed: s,
                out_dir: args.out.join(format!("seed_{s}")),
                ..base.clone()
            })
            .collect(),
        None => vec![RunConfig {
            seed: args.seed,
            out_dir: args.out.clone(),
            ..base.clone()
        }],
    };
    for c in &configs {
        c.validate()?;
    }
    let outcomes: Vec<Result<PathBuf>> = configs.par_iter().map(run_vqe).collect();
    let mut first_err = None;
    for (cfg, out) in configs.iter().zip(outcomes) {
        match out {
            Ok(dir) => {
                let r = read_result(&dir)?;
                print_json(&json!({
                    "seed": cfg.seed,
                    "run_dir": dir,
                    "last_fraction_mean": r.last_fraction_mean,
                    "last_fraction_std": r.last_fraction_std,
                    "exact_energy": r.exact_energy,
                    "delta_e": r.delta_e,
                }));
                if args.gnuplot {
                    print!("{}", gnuplot_script(&dir, r.exact_energy));
                }
            }
            Err(e) => {
                eprintln!("seed {}: {e}", cfg.seed);
                first_err.get_or_insert(e);
            }
        }
    }
    first_err.map_or(Ok(()), Err)
}

fn cmd_replay(run: &Path, out: Option<&Path>) -> Result<()> {
    let cfg = RunConfig::load(&run.join(CONFIG_FILE))?;
    let prep = prepare(&cfg)?;
    let records = read_params_log(&run.join(PARAMS_FILE))?;
    let csv = replay_on_exact(&records, &prep.hamiltonian, &prep.circuit)?;
    write_or_print(out, &csv)
}

fn cmd_zne(args: &ZneArgs) -> Result<()> {
    let cfg = RunConfig::load(&args.run.join(CONFIG_FILE))?;
    let prep = prepare(&cfg)?;
    let result = read_result(&args.run)?;
    if result.final_theta.len() != prep.circuit.n_parameters() {
        return Err(QveError::invalid(format!(
            "run {} has no usable final parameters",
            args.run.display()
        )));
    }
    let noise = match load_noise(args.noise.as_deref())? {
        Some(n) => n,
        None => cfg.noise.ok_or_else(|| {
            QveError::InvalidCombination("zne needs a noise model (--noise or the run's)".into())
        })?,
    };
    let zne = run_zne(
        &prep.circuit,
        &result.final_theta,
        &prep.hamiltonian,
        &args.folds,
        args.shots,
        args.seed,
        &noise,
        &args.fit,
    )?;
    if let Some(p) = &args.csv {
        fs::write(p, zne.points_csv()).map_err(|e| QveError::io(p, e))?;
    }
    let stats = circuit_stats(&prep.circuit);
    let mut v = serde_json::to_value(&zne).map_err(|e| QveError::invalid(e.to_string()))?;
    v["exact_energy"] = json!(prep.exact_energy);
    v["circuit_depth"] = json!(stats.depth);
    print_json(&v);
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Command::Hamiltonian { geometry, charge, out } => cmd_hamiltonian(&geometry, charge, out.as_deref()),
        Command::Map(a) => cmd_map(&a),
        Command::Exact(a) => cmd_exact(&a),
        Command::Vqe(a) => cmd_vqe(&a),
        Command::Replay { run, out } => cmd_replay(&run, out.as_deref()),
        Command::Zne(a) => cmd_zne(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("QVE_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // ignore the error if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
