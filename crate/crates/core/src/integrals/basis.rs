//! STO-nG basis tables and contracted orbitals.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::primitive::{GaussianPrimitive, Vec3};
use crate::error::{QveError, Result};

const STO3G_TABLE: &str = include_str!("../../data/sto3g.basis");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ShellKind {
    S,
    P,
}

impl ShellKind {
    fn angular_triples(self) -> &'static [[u32; 3]] {
        match self {
            ShellKind::S => &[[0, 0, 0]],
            ShellKind::P => &[[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        }
    }
}

/// One contracted shell: a tag such as `2p` and (exponent, coefficient) pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct Shell {
    pub tag: String,
    pub kind: ShellKind,
    pub primitives: Vec<(f64, f64)>,
}

/// Element symbol to ordered list of shells.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BasisTable {
    shells: BTreeMap<String, Vec<Shell>>,
}

impl BasisTable {
    /// The built-in STO-3G table (H through Be).
    pub fn sto3g() -> Self {
        Self::parse(STO3G_TABLE, "sto3g.basis").expect("embedded STO-3G table is well formed")
    }

    /// Parses `element shell exponent coefficient` lines. Consecutive lines
    /// with the same element and shell tag form one contracted shell.
    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let mut table = BasisTable::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(QveError::parse(
                    source_name,
                    line_no,
                    format!("expected `element shell exponent coefficient`, got {} fields", fields.len()),
                ));
            }
            let element = fields[0].to_string();
            let tag = fields[1].to_ascii_lowercase();
            let kind = match tag.chars().last() {
                Some('s') => ShellKind::S,
                Some('p') => ShellKind::P,
                _ => {
                    return Err(QveError::parse(
                        source_name,
                        line_no,
                        format!("unsupported shell tag `{}`", fields[1]),
                    ))
                }
            };
            let number = |s: &str, what: &str| -> Result<f64> {
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| QveError::parse(source_name, line_no, format!("bad {what} `{s}`")))
            };
            let exponent = number(fields[2], "exponent")?;
            if exponent <= 0.0 {
                return Err(QveError::parse(source_name, line_no, "exponent must be positive"));
            }
            let coefficient = number(fields[3], "coefficient")?;

            let shells = table.shells.entry(element).or_default();
            match shells.last_mut() {
                Some(last) if last.tag == tag => last.primitives.push((exponent, coefficient)),
                _ => {
                    if shells.iter().any(|s| s.tag == tag) {
                        return Err(QveError::parse(
                            source_name,
                            line_no,
                            format!("shell `{tag}` is split by another shell"),
                        ));
                    }
                    shells.push(Shell {
                        tag,
                        kind,
                        primitives: vec![(exponent, coefficient)],
                    });
                }
            }
        }
        Ok(table)
    }

    pub fn shells(&self, element: &str) -> Option<&[Shell]> {
        self.shells.get(element).map(Vec::as_slice)
    }

    pub fn elements(&self) -> impl Iterator<Item = &str> {
        self.shells.keys().map(String::as_str)
    }
}

/// Normalized linear combination of primitives sharing center and angular part.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractedOrbital {
    primitives: Vec<(f64, GaussianPrimitive)>,
    label: String,
}

fn double_factorial_odd(l: u32) -> f64 {
    // (2l - 1)!!
    (1..=l).map(|k| f64::from(2 * k - 1)).product()
}

/// Overlap of two normalized primitives on the same center with the same
/// angular triple.
fn same_center_overlap(a: &GaussianPrimitive, b: &GaussianPrimitive) -> f64 {
    let p = a.exponent() + b.exponent();
    let angular = a
        .angular()
        .iter()
        .map(|&l| double_factorial_odd(l) / (2.0 * p).powi(l as i32))
        .product::<f64>();
    a.norm() * b.norm() * angular * (PI / p).powf(1.5)
}

impl ContractedOrbital {
    /// Builds the contraction and rescales the coefficients so that the
    /// orbital has unit self-overlap.
    pub fn new(primitives: Vec<(f64, GaussianPrimitive)>, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        let first = primitives
            .first()
            .ok_or_else(|| QveError::invalid(format!("contracted orbital {label} has no primitives")))?;
        let (angular, center) = (first.1.angular(), first.1.center());
        if primitives
            .iter()
            .any(|(_, p)| p.angular() != angular || p.center() != center)
        {
            return Err(QveError::invalid(format!(
                "primitives of {label} must share angular part and center"
            )));
        }
        let mut self_overlap = 0.0;
        for (da, a) in &primitives {
            for (db, b) in &primitives {
                self_overlap += da * db * same_center_overlap(a, b);
            }
        }
        if !(self_overlap > 0.0) {
            return Err(QveError::invalid(format!("contracted orbital {label} has zero norm")));
        }
        let scale = self_overlap.sqrt().recip();
        let primitives = primitives.into_iter().map(|(d, p)| (d * scale, p)).collect();
        Ok(ContractedOrbital { primitives, label })
    }

    pub fn primitives(&self) -> &[(f64, GaussianPrimitive)] {
        &self.primitives
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn center(&self) -> Vec3 {
        self.primitives[0].1.center()
    }

    pub fn is_s(&self) -> bool {
        self.primitives[0].1.is_s()
    }

    pub fn value(&self, r: &Vec3) -> f64 {
        self.primitives.iter().map(|(d, p)| d * p.value(r)).sum()
    }
}

/// Contracted orbitals for one element placed at `center`, in table order.
pub fn orbitals_for_atom(
    table: &BasisTable,
    element: &str,
    center: Vec3,
) -> Result<Vec<ContractedOrbital>> {
    let shells = table
        .shells(element)
        .ok_or_else(|| QveError::invalid(format!("basis table has no entry for element {element}")))?;
    let mut out = Vec::new();
    for shell in shells {
        for (ci, &angular) in shell.kind.angular_triples().iter().enumerate() {
            let prims = shell
                .primitives
                .iter()
                .map(|&(e, d)| Ok((d, GaussianPrimitive::new(e, angular, center)?)))
                .collect::<Result<Vec<_>>>()?;
            let label = match shell.kind {
                ShellKind::S => format!("{element} {}", shell.tag),
                ShellKind::P => format!("{element} {}{}", shell.tag, ["x", "y", "z"][ci]),
            };
            out.push(ContractedOrbital::new(prims, label)?);
        }
    }
    Ok(out)
}
