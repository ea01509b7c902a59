use std::path::Path;

use anyhow::{Context, Result};
use herglotz::analysis::{CharacterizeConfig, StieltjesConfig};
use herglotz::QuadratureConfig;
use serde::{Deserialize, Serialize};

use crate::descriptor::relaxed_json;

/// Contents of a `--config` file. Every section is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CliConfig {
    /// Quadrature for quadrature-backed functions.
    pub quad: QuadratureConfig,
    /// Sampling and limits for `check`.
    pub characterize: CharacterizeConfig,
    /// Box, limits and outer quadrature for `invert`.
    pub stieltjes: StieltjesConfig,
}

impl CliConfig {
    pub fn load(path: Option<&Path>) -> Result<CliConfig> {
        let Some(path) = path else {
            return Ok(CliConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file `{}`", path.display()))?;
        serde_json::from_str(&relaxed_json(&text))
            .with_context(|| format!("cannot parse config file `{}`", path.display()))
    }
}
