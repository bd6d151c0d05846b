//! Run configuration and its resolved TOML form.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ansatz::AnsatzKind;
use crate::circuit::NoiseModel;
use crate::error::{QveError, Result};
use crate::mapping::Mapper;
use crate::spsa::SpsaConfig;

pub const DEFAULT_SHOTS: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemSource {
    /// Hamiltonian fixture file.
    Fixture(PathBuf),
    /// Geometry file for the built-in s-only integral engine; all orbitals
    /// active.
    Geometry { path: PathBuf, charge: i32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AnsatzSpec {
    Uccsd,
    Hea { reps: usize },
}

impl From<AnsatzSpec> for AnsatzKind {
    fn from(a: AnsatzSpec) -> Self {
        match a {
            AnsatzSpec::Uccsd => AnsatzKind::Uccsd,
            AnsatzSpec::Hea { reps } => AnsatzKind::Hea { reps },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub problem: ProblemSource,
    pub mapper: Mapper,
    pub taper: bool,
    pub ansatz: AnsatzSpec,
    pub shots: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseModel>,
    pub spsa: SpsaConfig,
}

impl RunConfig {
    /// Defaults: parity mapping with tapering, UCCSD, 4096 shots, SPSA
    /// defaults (400 iterations), seed 0, noiseless.
    pub fn new(problem: ProblemSource, out_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            problem,
            mapper: Mapper::Parity,
            taper: true,
            ansatz: AnsatzSpec::Uccsd,
            shots: DEFAULT_SHOTS,
            seed: 0,
            out_dir: out_dir.into(),
            noise: None,
            spsa: SpsaConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(QveError::invalid("shots must be at least 1"));
        }
        if self.taper && self.mapper != Mapper::Parity {
            return Err(QveError::InvalidCombination(format!(
                "--taper needs the parity mapping, got {}",
                self.mapper
            )));
        }
        if let Some(n) = &self.noise {
            n.validate()?;
        }
        self.spsa.validate()
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| QveError::invalid(format!("config serialization: {e}")))
    }

    pub fn from_toml(text: &str, source_name: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let line = e
                .span()
                .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
                .unwrap_or(0);
            QveError::parse(source_name, line, e.message())
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| QveError::io(path, e))?;
        Self::from_toml(&text, &path.display().to_string())
    }
}
