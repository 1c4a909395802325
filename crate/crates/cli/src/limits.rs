//! Solver limits from flags, environment and an optional TOML file.
//!
//! Precedence: flag, then environment variable (clap resolves those two),
//! then the config file, then the library defaults.
//!
//! ```toml
//! [limits]
//! max_edges = 26
//! max_nodes = 500000000
//! time_budget_secs = 120.0
//! ```

use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::Args;
use serde::Deserialize;

use tgame_core::SolveLimits;

use crate::error::CliError;

#[derive(Debug, Clone, Default, Args)]
pub struct LimitArgs {
    /// Largest edge count the exact solver accepts (hard cap 30).
    #[arg(long, global = true, env = "TGAME_MAX_EDGES")]
    pub max_edges: Option<usize>,
    /// Abort a solve after expanding this many nodes.
    #[arg(long, global = true, env = "TGAME_MAX_NODES")]
    pub max_nodes: Option<u64>,
    /// Abort a solve after this many seconds.
    #[arg(long, global = true, env = "TGAME_TIME_BUDGET", value_name = "SECS")]
    pub time_budget: Option<f64>,
    /// TOML file with a `[limits]` table.
    #[arg(long, global = true, env = "TGAME_CONFIG", value_name = "PATH")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    limits: ConfigLimits,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigLimits {
    max_edges: Option<usize>,
    max_nodes: Option<u64>,
    time_budget_secs: Option<f64>,
}

fn read_config(path: &Path) -> Result<ConfigLimits, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let file: ConfigFile =
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Ok(file.limits)
}

fn seconds(secs: f64) -> Result<Duration, CliError> {
    Duration::try_from_secs_f64(secs).map_err(|_| CliError::Usage(format!("invalid time budget {secs}")))
}

impl LimitArgs {
    pub fn resolve(&self) -> Result<SolveLimits, CliError> {
        let file = match &self.config {
            Some(p) => read_config(p)?,
            None => ConfigLimits::default(),
        };
        let defaults = SolveLimits::default();
        let time = self.time_budget.or(file.time_budget_secs).map(seconds).transpose()?;
        Ok(SolveLimits {
            max_edges: self.max_edges.or(file.max_edges).unwrap_or(defaults.max_edges),
            max_nodes: self.max_nodes.or(file.max_nodes).or(defaults.max_nodes),
            time_budget: time.or(defaults.time_budget),
        })
    }
}
