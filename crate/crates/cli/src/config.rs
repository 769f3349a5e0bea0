//! Run configuration: a JSON file whose values are overridden by flags.

use std::fs;
use std::path::{Path, PathBuf};

use epv_core::{Error, Result, SamplerConfig, SdFormula};
use serde::{Deserialize, Serialize};

pub const DEFAULT_OUT_DIR: &str = "epv-out";

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub chains: Option<usize>,
    pub iterations: Option<usize>,
    pub burn_in: Option<usize>,
    pub thinning: Option<usize>,
    pub rhat_threshold: Option<f64>,
    pub resolution: Option<f64>,
    pub sd_formula: Option<SdFormula>,
    pub top_k: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub prior: Option<PathBuf>,
    pub subset: Option<String>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("config {}: {e}", path.display())))
    }

    /// `flag` wins over the file, the file over `default`.
    pub fn pick<T: Clone>(flag: Option<T>, file: &Option<T>, default: T) -> T {
        flag.or_else(|| file.clone()).unwrap_or(default)
    }

    pub fn require_seed(&self, flag: Option<u64>, stage: &str) -> Result<u64> {
        flag.or(self.seed).ok_or_else(|| {
            Error::Config(format!(
                "{stage} needs a seed (--seed or \"seed\" in the config file)"
            ))
        })
    }

    pub fn sampler(&self, flags: &SamplerFlags, seed: u64) -> SamplerConfig {
        let d = SamplerConfig::default();
        SamplerConfig {
            chains: Self::pick(flags.chains, &self.chains, d.chains),
            iterations: Self::pick(flags.iterations, &self.iterations, d.iterations),
            burn_in: Self::pick(flags.burn_in, &self.burn_in, d.burn_in),
            thinning: Self::pick(flags.thinning, &self.thinning, d.thinning),
            rhat_threshold: Self::pick(
                flags.rhat_threshold,
                &self.rhat_threshold,
                d.rhat_threshold,
            ),
            seed,
        }
    }

    pub fn out_dir(&self, flag: Option<PathBuf>) -> PathBuf {
        Self::pick(flag, &self.out_dir, PathBuf::from(DEFAULT_OUT_DIR))
    }
}

#[derive(Debug, Clone, Default)]
pub struct SamplerFlags {
    pub chains: Option<usize>,
    pub iterations: Option<usize>,
    pub burn_in: Option<usize>,
    pub thinning: Option<usize>,
    pub rhat_threshold: Option<f64>,
}

/// Inputs are checked before a stage does any work.
pub fn require_file(path: &Path) -> Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "input file {} does not exist",
            path.display()
        )))
    }
}

pub fn require_dir(path: &Path) -> Result<()> {
    if path.is_dir() {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "directory {} does not exist",
            path.display()
        )))
    }
}
