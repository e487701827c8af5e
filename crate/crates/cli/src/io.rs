use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::errors::{CliError, CliResult};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn print_json<T: Serialize>(value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Parse(format!("serialization: {e}")))?;
    println!("{text}");
    Ok(())
}

/// One scored forecast: a probability (as mass or as ν-density) plus the
/// materialized observation.
#[derive(Clone, Debug, Deserialize)]
pub struct ForecastRecord {
    #[serde(default)]
    pub id: Option<String>,
    #[serde(default)]
    pub timestamp: Option<String>,
    pub observation: String,
    #[serde(default)]
    pub mass: Option<Vec<f64>>,
    #[serde(default)]
    pub density: Option<Vec<f64>>,
}

/// A forecast file: records over an optional explicit space (defaults to the
/// kernel's space).
#[derive(Clone, Debug, Deserialize)]
pub struct ForecastFile {
    #[serde(default)]
    pub space: Option<charkern::json::SpaceJson>,
    pub records: Vec<ForecastRecord>,
}

/// Bare-array or `{"lambda": [...]}` / `{"kappa": [...]}` coefficient files.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum CoeffFile {
    Bare(Vec<f64>),
    Lambda { lambda: Vec<f64> },
    Kappa { kappa: Vec<f64> },
    B { b: Vec<f64> },
}

impl CoeffFile {
    pub fn values(self) -> Vec<f64> {
        match self {
            CoeffFile::Bare(v) => v,
            CoeffFile::Lambda { lambda } => lambda,
            CoeffFile::Kappa { kappa } => kappa,
            CoeffFile::B { b } => b,
        }
    }
}
