//! Flat TOML configuration files.
//!
//! ```toml
//! A = 120
//! Z = 50
//! kappa = 0.5
//! basis = "3-6"
//! ```
//!
//! Only `A` and `Z` are required. Unknown keys are rejected.

use std::path::Path;

use gdrq_core::encoding::{BasisWindow, EnergyGrid, NucleusConfig, PrepMethod};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrepName {
    TimeEvolution,
    Lcu,
}

impl From<PrepName> for PrepMethod {
    fn from(p: PrepName) -> Self {
        match p {
            PrepName::TimeEvolution => PrepMethod::TimeEvolution,
            PrepName::Lcu => PrepMethod::Lcu,
        }
    }
}

impl From<PrepMethod> for PrepName {
    fn from(p: PrepMethod) -> Self {
        match p {
            PrepMethod::TimeEvolution => PrepName::TimeEvolution,
            PrepMethod::Lcu => PrepName::Lcu,
        }
    }
}

fn default_kappa() -> f64 {
    0.4
}
fn default_gamma_spread() -> f64 {
    2.0
}
fn default_basis() -> String {
    "3-6".into()
}
fn default_shots() -> u64 {
    8000
}
fn default_runs() -> u32 {
    100
}
fn default_gamma_prep() -> f64 {
    0.1
}
fn default_e_min() -> f64 {
    5.0
}
fn default_e_max() -> f64 {
    30.0
}
fn default_e_step() -> f64 {
    0.1
}
fn default_calibration() -> f64 {
    1.0
}
fn default_prep() -> PrepName {
    PrepName::TimeEvolution
}
fn default_attempt_cap() -> u32 {
    1000
}

/// On-disk form of [`NucleusConfig`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(rename = "A")]
    pub a: u32,
    #[serde(rename = "Z")]
    pub z: u32,
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    #[serde(default = "default_gamma_spread")]
    pub gamma_spread: f64,
    #[serde(default)]
    pub beta2: f64,
    #[serde(default = "default_basis")]
    pub basis: String,
    #[serde(default = "default_shots")]
    pub shots: u64,
    #[serde(default = "default_runs")]
    pub runs: u32,
    #[serde(default = "default_gamma_prep")]
    pub gamma_prep: f64,
    #[serde(default = "default_e_min")]
    pub e_min: f64,
    #[serde(default = "default_e_max")]
    pub e_max: f64,
    #[serde(default = "default_e_step")]
    pub e_step: f64,
    #[serde(default = "default_calibration")]
    pub calibration: f64,
    #[serde(default = "default_prep")]
    pub prep: PrepName,
    #[serde(default = "default_attempt_cap")]
    pub attempt_cap: u32,
    #[serde(default)]
    pub exact: bool,
}

impl ConfigFile {
    pub fn to_config(&self) -> Result<NucleusConfig, gdrq_core::Error> {
        let c = NucleusConfig {
            a: self.a,
            z: self.z,
            kappa: self.kappa,
            gamma_spread: self.gamma_spread,
            beta2: self.beta2,
            basis: self.basis.parse()?,
            shots: self.shots,
            runs: self.runs,
            gamma_prep: self.gamma_prep,
            grid: EnergyGrid {
                e_min: self.e_min,
                e_max: self.e_max,
                step: self.e_step,
            },
            calibration: self.calibration,
            prep: self.prep.into(),
            attempt_cap: self.attempt_cap,
            exact: self.exact,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn from_config(c: &NucleusConfig) -> Self {
        ConfigFile {
            a: c.a,
            z: c.z,
            kappa: c.kappa,
            gamma_spread: c.gamma_spread,
            beta2: c.beta2,
            basis: c.basis.to_string(),
            shots: c.shots,
            runs: c.runs,
            gamma_prep: c.gamma_prep,
            e_min: c.grid.e_min,
            e_max: c.grid.e_max,
            e_step: c.grid.step,
            calibration: c.calibration,
            prep: c.prep.into(),
            attempt_cap: c.attempt_cap,
            exact: c.exact,
        }
    }
}

pub fn parse_config(text: &str) -> Result<NucleusConfig, String> {
    let file: ConfigFile = toml::from_str(text).map_err(|e| e.message().to_string())?;
    file.to_config().map_err(|e| e.to_string())
}

pub fn load_config(path: &Path) -> Result<NucleusConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config(&text).map_err(|message| CliError::Config {
        path: path.to_path_buf(),
        message,
    })
}

pub fn config_to_toml(c: &NucleusConfig) -> String {
    toml::to_string(&ConfigFile::from_config(c)).expect("flat config always serialises")
}

/// A validated window list such as `0-10,2-8,3-6`.
pub fn parse_windows(s: &str) -> Result<Vec<BasisWindow>, gdrq_core::Error> {
    s.split(',').map(str::parse).collect()
}
