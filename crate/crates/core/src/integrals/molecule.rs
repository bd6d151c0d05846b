use super::primitive::{dist2, Vec3};
use crate::error::{QveError, Result};

/// Fixed conversion used for every geometry in the crate.
pub const BOHR_PER_ANGSTROM: f64 = 1.8897259886;

const ELEMENTS: [&str; 18] = [
    "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne", "Na", "Mg", "Al", "Si", "P", "S", "Cl",
    "Ar",
];

pub fn atomic_number(symbol: &str) -> Option<u32> {
    ELEMENTS
        .iter()
        .position(|s| s.eq_ignore_ascii_case(symbol))
        .map(|i| i as u32 + 1)
}

pub fn element_symbol(z: u32) -> Option<&'static str> {
    ELEMENTS.get((z as usize).checked_sub(1)?).copied()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LengthUnit {
    Angstrom,
    Bohr,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub z: u32,
    /// Position in bohr.
    pub position: Vec3,
}

impl Atom {
    pub fn symbol(&self) -> &'static str {
        element_symbol(self.z).unwrap_or("?")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Molecule {
    pub atoms: Vec<Atom>,
    pub charge: i32,
    pub multiplicity: u32,
}

impl Molecule {
    /// Closed-shell molecule; positions in bohr.
    pub fn new(atoms: Vec<Atom>, charge: i32) -> Result<Self> {
        let mol = Molecule {
            atoms,
            charge,
            multiplicity: 1,
        };
        if mol.atoms.iter().any(|a| a.z == 0) {
            return Err(QveError::invalid("atomic number must be positive"));
        }
        if mol.atoms.iter().any(|a| a.position.iter().any(|x| !x.is_finite())) {
            return Err(QveError::invalid("atom position is not finite"));
        }
        let total: i64 = mol.atoms.iter().map(|a| a.z as i64).sum();
        if total - (charge as i64) < 0 {
            return Err(QveError::invalid(format!(
                "charge {charge} leaves a negative electron count"
            )));
        }
        Ok(mol)
    }

    pub fn n_electrons(&self) -> usize {
        (self.atoms.iter().map(|a| a.z as i64).sum::<i64>() - self.charge as i64) as usize
    }

    /// Parses a geometry file: a `units angstrom|bohr` header followed by
    /// `SYMBOL x y z` lines. `#` starts a comment.
    pub fn parse_geometry(text: &str, source_name: &str, charge: i32) -> Result<Self> {
        let mut unit = None;
        let mut atoms = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if unit.is_none() {
                unit = match fields.as_slice() {
                    [kw, u] if kw.eq_ignore_ascii_case("units") => match u.to_ascii_lowercase().as_str() {
                        "angstrom" => Some(LengthUnit::Angstrom),
                        "bohr" => Some(LengthUnit::Bohr),
                        other => {
                            return Err(QveError::parse(source_name, line_no, format!("unknown unit `{other}`")))
                        }
                    },
                    _ => {
                        return Err(QveError::parse(
                            source_name,
                            line_no,
                            "first line must be `units angstrom` or `units bohr`",
                        ))
                    }
                };
                continue;
            }
            if fields.len() != 4 {
                return Err(QveError::parse(source_name, line_no, "expected `SYMBOL x y z`"));
            }
            let z = atomic_number(fields[0])
                .ok_or_else(|| QveError::parse(source_name, line_no, format!("unknown element `{}`", fields[0])))?;
            let scale = match unit {
                Some(LengthUnit::Angstrom) => BOHR_PER_ANGSTROM,
                _ => 1.0,
            };
            let mut position = [0.0; 3];
            for (d, f) in fields[1..].iter().enumerate() {
                let v: f64 = f
                    .parse()
                    .ok()
                    .filter(|v: &f64| v.is_finite())
                    .ok_or_else(|| QveError::parse(source_name, line_no, format!("bad coordinate `{f}`")))?;
                position[d] = v * scale;
            }
            atoms.push(Atom { z, position });
        }
        if unit.is_none() {
            return Err(QveError::parse(source_name, 1, "missing `units` header"));
        }
        if atoms.is_empty() {
            return Err(QveError::parse(source_name, 1, "no atoms"));
        }
        Molecule::new(atoms, charge).map_err(|e| QveError::parse(source_name, 1, e.to_string()))
    }
}

/// `sum_{m<n} Z_m Z_n / |R_m - R_n|` in hartree.
pub fn nuclear_repulsion(mol: &Molecule) -> Result<f64> {
    if mol.atoms.is_empty() {
        return Err(QveError::invalid("molecule has no atoms"));
    }
    let mut e = 0.0;
    for (m, a) in mol.atoms.iter().enumerate() {
        for (n, b) in mol.atoms.iter().enumerate().skip(m + 1) {
            let r = dist2(&a.position, &b.position).sqrt();
            if r < 1e-8 {
                return Err(QveError::DegenerateGeometry(m, n));
            }
            e += (a.z * b.z) as f64 / r;
        }
    }
    Ok(e)
}
