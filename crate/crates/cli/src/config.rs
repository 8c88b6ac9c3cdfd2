//! Optional JSON defaults; command-line flags take precedence.

use std::path::Path;

use serde::Deserialize;
use slipchan::{Family, Friction};

use crate::CliError;

/// Table and report encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Defaults read from `--config`. Every field is optional.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// A number, `"navier"` or `"dirichlet"`.
    pub friction: Option<Friction>,
    pub family: Option<Family>,
    pub count: Option<usize>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub max_index: Option<u32>,
    pub max_p: Option<u32>,
    pub grid: Option<usize>,
    pub tol: Option<f64>,
    /// Comma-separated β list for `figure`.
    pub friction_list: Option<String>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }
}
