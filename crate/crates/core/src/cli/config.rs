use std::path::PathBuf;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::field::Grid;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Ball,
    Prop2,
    BaExtension,
    CustomFile,
}

impl std::str::FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ball" => Ok(ScenarioKind::Ball),
            "prop2" => Ok(ScenarioKind::Prop2),
            "ba_extension" | "ba-extension" => Ok(ScenarioKind::BaExtension),
            "custom_file" | "custom-file" => Ok(ScenarioKind::CustomFile),
            other => Err(Error::Config(format!("unknown scenario '{other}'"))),
        }
    }
}

/// Everything a run depends on. The output directory is not part of the
/// hashed configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    pub grid_n: usize,
    pub grid_l: f64,
    pub tol: f64,
    pub max_iter: usize,
    /// Amplitude of the ball coefficient.
    pub c: f64,
    pub center: Complex64,
    pub radius: f64,
    pub mollify_width: f64,
    /// Exponent parameter of the power-law scenarios.
    pub k: f64,
    pub mu_file: Option<PathBuf>,
    pub seed: u64,
    pub trace_window: f64,
    pub trace_samples: usize,
    pub padding_factor: usize,
    #[serde(skip)]
    pub out: PathBuf,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            scenario: ScenarioKind::Ball,
            grid_n: 128,
            grid_l: 8.0,
            tol: 1e-10,
            max_iter: 200,
            c: 0.3,
            center: Complex64::new(0.0, 2.0),
            radius: 1.0,
            mollify_width: 0.5,
            k: 1.5,
            mu_file: None,
            seed: 0,
            trace_window: 8.0,
            trace_samples: 1024,
            padding_factor: 2,
            out: PathBuf::from("qcircle-out"),
        }
    }
}

impl ScenarioConfig {
    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.grid_l, self.grid_n)
    }

    /// Checks every parameter used by the scenario before any compute.
    pub fn validate(&self) -> Result<()> {
        let grid = self.grid().map_err(|e| Error::Config(e.to_string()))?;
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return bad(format!("tol must be positive, got {}", self.tol));
        }
        if self.max_iter == 0 {
            return bad("max_iter must be positive".into());
        }
        if !(self.trace_window > 0.0) || self.trace_samples < 64 {
            return bad("trace needs a positive window and at least 64 samples".into());
        }
        if self.padding_factor < 2 || !self.padding_factor.is_power_of_two() {
            return bad(format!("padding factor must be a power of two >= 2, got {}", self.padding_factor));
        }
        match self.scenario {
            ScenarioKind::Ball => {
                if !(0.0..1.0).contains(&self.c) {
                    return bad(format!("c must lie in [0, 1), got {}", self.c));
                }
                if !(self.radius > 0.0) || !(0.0..=self.radius).contains(&self.mollify_width) {
                    return bad("ball needs radius > 0 and 0 <= mollify width <= radius".into());
                }
                if !grid.contains_ball(self.center, self.radius) {
                    return bad(format!("ball at {} of radius {} leaves the grid box", self.center, self.radius));
                }
            }
            ScenarioKind::Prop2 | ScenarioKind::BaExtension => {
                if !(self.k > 1.0 && self.k < 2.0) {
                    return bad(format!("K must lie in (1, 2), got {}", self.k));
                }
            }
            ScenarioKind::CustomFile => match &self.mu_file {
                None => return bad("custom-file scenario needs --mu-file".into()),
                Some(p) if !p.is_file() => return bad(format!("mu file {} does not exist", p.display())),
                _ => {}
            },
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON encoding.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}
