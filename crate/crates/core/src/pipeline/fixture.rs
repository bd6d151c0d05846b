//! Line-oriented Hamiltonian fixture format.
//!
//! ```text
//! # comment
//! norb 3
//! nalpha 1
//! nbeta 1
//! constant -1.4279914331543647e+01
//! h 0 0 -8.5798178711001694e-01
//! g 0 1 0 1 3.5699184508121784e-01
//! ```
//!
//! `h p q` is the one-body integral, `g p q r s` the physicist `<pq|rs>`,
//! both 0-based. Each unique integral appears once; the loader fills in the
//! symmetric partners.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{QveError, Result};
use crate::scf::ActiveSpaceProblem;
use crate::tensor::Tensor4;

/// Entries below this magnitude are not written.
pub const WRITE_CUTOFF: f64 = 1e-12;

/// Orbital index limit for fixtures (64 spin orbitals).
pub const MAX_ORBITALS: usize = 32;

/// Smallest member of the 8-fold orbit of physicist `<pq|rs>`, returned in
/// physicist order.
pub fn canonical_two_body(p: usize, q: usize, r: usize, s: usize) -> (usize, usize, usize, usize) {
    let (i, j, k, l) = (p, r, q, s);
    let orbit = [
        (i, j, k, l),
        (k, l, i, j),
        (j, i, k, l),
        (k, l, j, i),
        (i, j, l, k),
        (l, k, i, j),
        (j, i, l, k),
        (l, k, j, i),
    ];
    let (a, b, c, d) = orbit.into_iter().min().unwrap();
    (a, c, b, d)
}

/// All physicist index tuples equal to `<pq|rs>` by real-orbital symmetry.
pub fn two_body_orbit(p: usize, q: usize, r: usize, s: usize) -> [(usize, usize, usize, usize); 8] {
    [
        (p, q, r, s),
        (q, p, s, r),
        (r, s, p, q),
        (s, r, q, p),
        (r, q, p, s),
        (p, s, r, q),
        (s, p, q, r),
        (q, r, s, p),
    ]
}

/// `{:.16e}` with a signed, two-digit exponent (`-1.5000000000000000e+01`).
pub fn format_float(v: f64) -> String {
    let s = format!("{v:.16e}");
    match s.split_once('e') {
        Some((mant, exp)) => {
            let (sign, digits) = match exp.strip_prefix('-') {
                Some(d) => ('-', d),
                None => ('+', exp),
            };
            format!("{mant}e{sign}{digits:0>2}")
        }
        None => s,
    }
}

pub fn parse_fixture(text: &str, source_name: &str) -> Result<ActiveSpaceProblem> {
    let mut norb: Option<usize> = None;
    let mut nalpha: Option<usize> = None;
    let mut nbeta: Option<usize> = None;
    let mut constant: Option<f64> = None;
    let mut ones: Vec<(usize, usize, usize, f64)> = Vec::new();
    let mut twos: Vec<(usize, [usize; 4], f64)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |msg: String| QveError::parse(source_name, line_no, msg);
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let count = |fields: &[&str], want: usize| -> Result<()> {
            if fields.len() != want {
                return Err(err(format!(
                    "`{}` takes {} values, found {}",
                    fields[0],
                    want - 1,
                    fields.len() - 1
                )));
            }
            Ok(())
        };
        let int = |tok: &str| -> Result<usize> {
            tok.parse::<usize>().map_err(|_| err(format!("bad integer `{tok}`")))
        };
        let float = |tok: &str| -> Result<f64> {
            let v = tok.parse::<f64>().map_err(|_| err(format!("bad number `{tok}`")))?;
            if !v.is_finite() {
                return Err(err(format!("non-finite value `{tok}`")));
            }
            Ok(v)
        };
        let set_once = |slot: &mut Option<usize>, v: usize, key: &str| -> Result<()> {
            if slot.replace(v).is_some() {
                return Err(err(format!("`{key}` given twice")));
            }
            Ok(())
        };
        match fields[0] {
            "norb" => {
                count(&fields, 2)?;
                let v = int(fields[1])?;
                if v > MAX_ORBITALS {
                    return Err(err(format!("norb {v} exceeds {MAX_ORBITALS}")));
                }
                set_once(&mut norb, v, "norb")?;
            }
            "nalpha" => {
                count(&fields, 2)?;
                set_once(&mut nalpha, int(fields[1])?, "nalpha")?;
            }
            "nbeta" => {
                count(&fields, 2)?;
                set_once(&mut nbeta, int(fields[1])?, "nbeta")?;
            }
            "constant" => {
                count(&fields, 2)?;
                if constant.replace(float(fields[1])?).is_some() {
                    return Err(err("`constant` given twice".into()));
                }
            }
            "h" => {
                count(&fields, 4)?;
                ones.push((line_no, int(fields[1])?, int(fields[2])?, float(fields[3])?));
            }
            "g" => {
                count(&fields, 6)?;
                let idx = [
                    int(fields[1])?,
                    int(fields[2])?,
                    int(fields[3])?,
                    int(fields[4])?,
                ];
                twos.push((line_no, idx, float(fields[5])?));
            }
            other => return Err(err(format!("unknown record `{other}`"))),
        }
    }

    let n = norb.unwrap_or(0);
    let mut h1 = DMatrix::zeros(n, n);
    let mut seen1: HashMap<(usize, usize), usize> = HashMap::new();
    for (line_no, p, q, v) in ones {
        if p >= n || q >= n {
            return Err(QveError::parse(
                source_name,
                line_no,
                format!("index out of range for norb {n}"),
            ));
        }
        let key = (p.min(q), p.max(q));
        if let Some(first) = seen1.insert(key, line_no) {
            return Err(QveError::parse(
                source_name,
                line_no,
                format!("duplicate one-body entry (first on line {first})"),
            ));
        }
        h1[(p, q)] = v;
        h1[(q, p)] = v;
    }
    let mut h2 = Tensor4::zeros(n);
    let mut seen2: HashMap<(usize, usize, usize, usize), usize> = HashMap::new();
    for (line_no, [p, q, r, s], v) in twos {
        if [p, q, r, s].iter().any(|&i| i >= n) {
            return Err(QveError::parse(
                source_name,
                line_no,
                format!("index out of range for norb {n}"),
            ));
        }
        if let Some(first) = seen2.insert(canonical_two_body(p, q, r, s), line_no) {
            return Err(QveError::parse(
                source_name,
                line_no,
                format!("duplicate two-body entry (first on line {first})"),
            ));
        }
        for idx in two_body_orbit(p, q, r, s) {
            h2[idx] = v;
        }
    }
    ActiveSpaceProblem::new(
        nalpha.unwrap_or(0),
        nbeta.unwrap_or(0),
        h1,
        h2,
        constant.unwrap_or(0.0),
    )
    .map_err(|e| QveError::parse(source_name, 0, e.to_string()))
}

pub fn load_fixture(path: &Path) -> Result<ActiveSpaceProblem> {
    let text = std::fs::read_to_string(path).map_err(|e| QveError::io(path, e))?;
    parse_fixture(&text, &path.display().to_string())
}

/// Serializes unique entries in canonical order; `title` becomes a leading
/// comment line.
pub fn format_fixture(problem: &ActiveSpaceProblem, title: Option<&str>) -> String {
    let n = problem.n_spatial;
    let mut out = String::new();
    if let Some(t) = title {
        for l in t.lines() {
            let _ = writeln!(out, "# {l}");
        }
    }
    let _ = writeln!(out, "norb {n}");
    let _ = writeln!(out, "nalpha {}", problem.n_alpha);
    let _ = writeln!(out, "nbeta {}", problem.n_beta);
    let _ = writeln!(out, "constant {}", format_float(problem.e_offset));
    for p in 0..n {
        for q in p..n {
            let v = problem.h1[(p, q)];
            if v.abs() >= WRITE_CUTOFF {
                let _ = writeln!(out, "h {p} {q} {}", format_float(v));
            }
        }
    }
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    if canonical_two_body(p, q, r, s) != (p, q, r, s) {
                        continue;
                    }
                    let v = problem.h2[(p, q, r, s)];
                    if v.abs() >= WRITE_CUTOFF {
                        let _ = writeln!(out, "g {p} {q} {r} {s} {}", format_float(v));
                    }
                }
            }
        }
    }
    out
}

pub fn save_fixture(problem: &ActiveSpaceProblem, path: &Path, title: Option<&str>) -> Result<()> {
    std::fs::write(path, format_fixture(problem, title)).map_err(|e| QveError::io(path, e))
}
