use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::algorithms::spec::AlgorithmSpec;
use crate::error::{Error, Result};
use crate::hypothesis::ClassSpec;
use crate::noise::ProblemSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    pub dir: PathBuf,
    #[serde(default = "default_csv")]
    pub csv: String,
    #[serde(default = "default_summary")]
    pub summary: String,
}

fn default_csv() -> String {
    "curves.csv".into()
}

fn default_summary() -> String {
    "summary.md".into()
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            csv: default_csv(),
            summary: default_summary(),
        }
    }
}

/// One experiment: every algorithm in `algorithms` runs on the same seeded
/// streams for each (budget, trial).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub name: String,
    pub problem: ProblemSpec,
    pub class: ClassSpec,
    pub algorithms: Vec<AlgorithmSpec>,
    /// Strictly increasing label budgets.
    pub budgets: Vec<usize>,
    pub trials: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub output: OutputConfig,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.budgets.is_empty() || self.budgets.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("budgets must be nonempty and strictly increasing".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Config("no algorithm given".into()));
        }
        if self.base_seed > i64::MAX as u64 {
            return Err(Error::Config("base_seed must fit in a TOML integer (< 2^63)".into()));
        }
        self.problem.build()?;
        self.class.build()?;
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }
}
