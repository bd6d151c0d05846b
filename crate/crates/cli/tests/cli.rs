use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn qve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qve"))
        .args(args)
        .env("QVE_THREADS", "2")
        .output()
        .expect("spawn qve")
}

fn fixture() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures/beh2_cas_2e3o.ham")
        .display()
        .to_string()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn map_prints_statistics() {
    let v = json(&qve(&["map", "--ham", &fixture(), "--mapper", "parity", "--taper"]));
    assert_eq!(v["n_qubits"], 4);
    assert_eq!(v["n_pauli_terms"], 28);
    let v = json(&qve(&["map", "--ham", &fixture(), "--mapper", "bk"]));
    assert_eq!(v["n_pauli_terms"], 34);
}

#[test]
fn exact_prints_energy() {
    let v = json(&qve(&["exact", "--ham", &fixture(), "--mapper", "parity", "--taper"]));
    assert!((v["energy_ha"].as_f64().unwrap() - -15.56089).abs() < 5e-6);
    assert!((v["hartree_fock_energy_ha"].as_f64().unwrap() - -15.56033).abs() < 5e-6);
}

#[test]
fn hamiltonian_vqe_replay_zne() {
    let dir = tempfile::tempdir().unwrap();
    let geom = write(dir.path(), "h2.geom", "units angstrom\nH 0 0 0\nH 0 0 0.74\n");
    let ham = dir.path().join("h2.ham").display().to_string();
    assert!(qve(&["hamiltonian", "--geometry", &geom, "--out", &ham]).status.success());
    assert!(std::fs::read_to_string(&ham).unwrap().contains("norb 2"));

    let noise = write(dir.path(), "noise.toml", "p1 = 0.001\np2 = 0.01\n");
    let runs = dir.path().join("runs").display().to_string();
    let out = qve(&[
        "vqe", "--ham", &ham, "--mapper", "jw", "--ansatz", "hea", "--maxiter", "20", "--seeds", "1,2", "--shots",
        "512", "--noise", &noise, "--out", &runs, "--gnuplot",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("plot '"));
    let run1 = format!("{runs}/seed_1");
    let rows = std::fs::read_to_string(format!("{run1}/convergence.csv")).unwrap();
    assert_eq!(rows.lines().count(), 21);

    let replay = qve(&["replay", "--run", &run1]);
    assert!(replay.status.success());
    let text = String::from_utf8(replay.stdout).unwrap();
    assert!(text.starts_with("iteration,energy_ha\n"));
    assert_eq!(text.lines().count(), 21);

    let table = dir.path().join("folds.csv").display().to_string();
    let v = json(&qve(&[
        "zne", "--run", &run1, "--folds", "1,3,5", "--fit", "linear,quadratic", "--shots", "2000", "--csv", &table,
    ]));
    assert_eq!(v["points"].as_array().unwrap().len(), 3);
    assert!(v["fits"]["quadratic"]["e0"].is_number());
    assert!(std::fs::read_to_string(&table).unwrap().starts_with("fold,energy_ha,std_error_ha\n"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // configuration errors
    assert_eq!(qve(&["map", "--ham", &fixture(), "--mapper", "bk", "--taper"]).status.code(), Some(2));
    assert_eq!(qve(&["exact", "--ham", "/nonexistent.ham"]).status.code(), Some(2));
    let out = dir.path().join("r").display().to_string();
    assert_eq!(qve(&["vqe", "--ham", &fixture(), "--shots", "0", "--out", &out]).status.code(), Some(2));
    // p shells are outside the s-only integral engine
    let beh2 = write(dir.path(), "beh2.geom", "units angstrom\nH -1.3 0 0\nBe 0 0 0\nH 1.3 0 0\n");
    assert_eq!(qve(&["hamiltonian", "--geometry", &beh2]).status.code(), Some(4));
    // coincident nuclei are a numeric failure
    let bad = write(dir.path(), "bad.geom", "units angstrom\nH 0 0 0\nH 0 0 0\n");
    assert_eq!(qve(&["hamiltonian", "--geometry", &bad]).status.code(), Some(3));
}
