//! Parametric depolarizing + readout noise model.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{QveError, Result};

/// Depolarizing probabilities per 1- and 2-qubit gate and readout flip
/// probabilities, uniform across qubits.
///
/// Config file (TOML):
///
/// ```text
/// p1 = 0.001
/// p2 = 0.01
/// readout01 = 0.02   # P(read 1 | state 0)
/// readout10 = 0.03   # P(read 0 | state 1)
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseModel {
    pub p1: f64,
    pub p2: f64,
    #[serde(default)]
    pub readout01: f64,
    #[serde(default)]
    pub readout10: f64,
}

impl NoiseModel {
    pub fn new(p1: f64, p2: f64, readout01: f64, readout10: f64) -> Result<Self> {
        let m = NoiseModel {
            p1,
            p2,
            readout01,
            readout10,
        };
        m.validate()?;
        Ok(m)
    }

    /// Gate noise only, with `p1 = p2 / 10`.
    pub fn depolarizing(p2: f64) -> Result<Self> {
        Self::new(p2 / 10.0, p2, 0.0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("p1", self.p1),
            ("p2", self.p2),
            ("readout01", self.readout01),
            ("readout10", self.readout10),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(QveError::invalid(format!("{name} = {v} is not a probability")));
            }
        }
        Ok(())
    }

    pub fn has_gate_noise(&self) -> bool {
        self.p1 > 0.0 || self.p2 > 0.0
    }

    pub fn has_readout_noise(&self) -> bool {
        self.readout01 > 0.0 || self.readout10 > 0.0
    }

    /// 2x2 column-stochastic readout matrix `[[P(0|0), P(0|1)], [P(1|0), P(1|1)]]`.
    pub fn readout_matrix(&self) -> [[f64; 2]; 2] {
        [
            [1.0 - self.readout01, self.readout10],
            [self.readout01, 1.0 - self.readout10],
        ]
    }

    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let m: NoiseModel = toml::from_str(text).map_err(|e| {
            let line = e
                .span()
                .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
                .unwrap_or(0);
            QveError::parse(source_name, line, e.message())
        })?;
        m.validate()
            .map_err(|e| QveError::parse(source_name, 0, e.to_string()))?;
        Ok(m)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| QveError::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("noise model serializes")
    }
}
