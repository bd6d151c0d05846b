//! End-to-end orchestration: problem ingestion, VQE runs, run logs and
//! reporting.

pub mod config;
pub mod fixture;
pub mod run;

pub use config::{AnsatzSpec, ProblemSource, RunConfig};
pub use fixture::{format_fixture, load_fixture, parse_fixture, save_fixture};
pub use run::{
    gnuplot_script, parse_params_log, prepare, read_convergence, read_params_log, read_result,
    replay_on_exact, run_vqe, summarize_last_fraction, ParamsRecord, Prepared, RunResult,
};
