//! Pooled posterior draws, their summaries, and the on-disk artifact.
//!
//! A posterior directory holds:
//!
//! * `config.json`: sampler settings, centre layout and draw counts.
//! * `summary.csv`: `centre_index, centre_x, centre_y, outcome, mean, std,
//!   rhat, ess`, one row per centre and outcome.
//! * `samples.bin`: a 28-byte little-endian header followed by the draws as
//!   little-endian `f64`, row-major over `[chain][draw][centre][outcome]`.
//!   Header: magic `b"EPVSMPL\0"`, then `u32` version (1), chains,
//!   draws per chain, centres, outcomes.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fmt;
use crate::geometry::CentreSet;
use crate::outcome::{Outcome, NUM_OUTCOMES};

use super::diagnostics::{effective_sample_size, split_rhat};
use super::gibbs::SamplerConfig;
use super::OutcomeSimplex;

const MAGIC: &[u8; 8] = b"EPVSMPL\0";
const VERSION: u32 = 1;
const HEADER_LEN: usize = 28;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceWarning {
    pub centre: usize,
    pub outcome: Outcome,
    pub rhat: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Posterior {
    centres: CentreSet,
    config: SamplerConfig,
    n_observations: usize,
    samples: Vec<f64>,
    mean: Vec<[f64; NUM_OUTCOMES]>,
    std: Vec<[f64; NUM_OUTCOMES]>,
    rhat: Vec<[f64; NUM_OUTCOMES]>,
    ess: Vec<[f64; NUM_OUTCOMES]>,
    warnings: Vec<ConvergenceWarning>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ArtifactConfig {
    format_version: u32,
    sampler: SamplerConfig,
    centres: CentreSet,
    n_observations: usize,
    chains: usize,
    draws_per_chain: usize,
    n_centres: usize,
    n_outcomes: usize,
}

impl Posterior {
    /// Builds summaries from draws laid out `[chain][draw][centre][outcome]`.
    pub fn from_samples(
        samples: Vec<f64>,
        centres: CentreSet,
        config: SamplerConfig,
        n_observations: usize,
    ) -> Self {
        let k_total = centres.len();
        let row = k_total * NUM_OUTCOMES;
        let per_chain = config.kept_per_chain();
        assert_eq!(
            samples.len(),
            config.chains * per_chain * row,
            "sample layout"
        );

        let mut mean = vec![[0.0; NUM_OUTCOMES]; k_total];
        let mut std = vec![[0.0; NUM_OUTCOMES]; k_total];
        let mut rhat = vec![[0.0; NUM_OUTCOMES]; k_total];
        let mut ess = vec![[0.0; NUM_OUTCOMES]; k_total];
        let mut warnings = Vec::new();
        let n_total = (config.chains * per_chain) as f64;

        for k in 0..k_total {
            for s in 0..NUM_OUTCOMES {
                let offset = k * NUM_OUTCOMES + s;
                let chains: Vec<Vec<f64>> = (0..config.chains)
                    .map(|c| {
                        (0..per_chain)
                            .map(|d| samples[(c * per_chain + d) * row + offset])
                            .collect()
                    })
                    .collect();
                let refs: Vec<&[f64]> = chains.iter().map(Vec::as_slice).collect();
                let m = chains.iter().flatten().sum::<f64>() / n_total;
                let var = chains
                    .iter()
                    .flatten()
                    .map(|v| (v - m) * (v - m))
                    .sum::<f64>()
                    / (n_total - 1.0);
                mean[k][s] = m;
                std[k][s] = var.sqrt();
                rhat[k][s] = split_rhat(&refs);
                ess[k][s] = effective_sample_size(&refs);
                if !(rhat[k][s] <= config.rhat_threshold) {
                    warnings.push(ConvergenceWarning {
                        centre: k,
                        outcome: Outcome::ALL[s],
                        rhat: rhat[k][s],
                    });
                }
            }
        }
        Posterior {
            centres,
            config,
            n_observations,
            samples,
            mean,
            std,
            rhat,
            ess,
            warnings,
        }
    }

    pub fn centres(&self) -> &CentreSet {
        &self.centres
    }

    pub fn config(&self) -> &SamplerConfig {
        &self.config
    }

    pub fn n_observations(&self) -> usize {
        self.n_observations
    }

    pub fn n_centres(&self) -> usize {
        self.centres.len()
    }

    /// All draws, `[chain][draw][centre][outcome]`.
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Pooled draw count across chains.
    pub fn n_draws(&self) -> usize {
        self.config.chains * self.config.kept_per_chain()
    }

    pub fn draw(&self, draw: usize, centre: usize) -> OutcomeSimplex {
        let start = (draw * self.n_centres() + centre) * NUM_OUTCOMES;
        let mut p = [0.0; NUM_OUTCOMES];
        p.copy_from_slice(&self.samples[start..start + NUM_OUTCOMES]);
        OutcomeSimplex(p)
    }

    /// Every pooled draw for one centre.
    pub fn centre_samples(&self, centre: usize) -> Vec<OutcomeSimplex> {
        (0..self.n_draws()).map(|d| self.draw(d, centre)).collect()
    }

    pub fn mean(&self) -> &[[f64; NUM_OUTCOMES]] {
        &self.mean
    }

    pub fn std(&self) -> &[[f64; NUM_OUTCOMES]] {
        &self.std
    }

    pub fn rhat(&self) -> &[[f64; NUM_OUTCOMES]] {
        &self.rhat
    }

    pub fn ess(&self) -> &[[f64; NUM_OUTCOMES]] {
        &self.ess
    }

    pub fn mean_simplex(&self, centre: usize) -> OutcomeSimplex {
        OutcomeSimplex(self.mean[centre])
    }

    /// Monte-Carlo standard error of a posterior mean: `std / sqrt(ess)`.
    pub fn mcse(&self, centre: usize, outcome: usize) -> f64 {
        self.std[centre][outcome] / self.ess[centre][outcome].sqrt()
    }

    /// Entries whose R-hat exceeds the configured threshold.
    pub fn warnings(&self) -> &[ConvergenceWarning] {
        &self.warnings
    }

    pub fn converged(&self) -> bool {
        self.warnings.is_empty()
    }

    pub fn max_rhat(&self) -> f64 {
        self.rhat
            .iter()
            .flatten()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_ess(&self) -> f64 {
        self.ess
            .iter()
            .flatten()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Short human-readable convergence summary.
    pub fn diagnostics_summary(&self) -> String {
        let mut out = format!(
            "{} chains x {} draws, {} observations; max R-hat {}, min ESS {}",
            self.config.chains,
            self.config.kept_per_chain(),
            self.n_observations,
            fmt::fixed(self.max_rhat(), 4),
            fmt::fixed(self.min_ess(), 0),
        );
        if !self.warnings.is_empty() {
            out.push_str(&format!(
                "\nwarning: {} centre-outcome pairs have R-hat above {}",
                self.warnings.len(),
                self.config.rhat_threshold
            ));
            for w in self.warnings.iter().take(10) {
                out.push_str(&format!(
                    "\n  centre {} {}: R-hat {}",
                    w.centre,
                    w.outcome,
                    fmt::fixed(w.rhat, 4)
                ));
            }
        }
        out
    }

    pub fn write_summary_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "centre_index",
            "centre_x",
            "centre_y",
            "outcome",
            "mean",
            "std",
            "rhat",
            "ess",
        ])?;
        for c in self.centres.centres() {
            for o in Outcome::ALL {
                let (k, s) = (c.index, o.index());
                out.write_record([
                    k.to_string(),
                    c.x.to_string(),
                    c.y.map_or_else(|| "TRY".into(), |y| y.to_string()),
                    o.name().to_string(),
                    fmt::sig(self.mean[k][s], 9),
                    fmt::sig(self.std[k][s], 9),
                    fmt::sig(self.rhat[k][s], 9),
                    fmt::sig(self.ess[k][s], 9),
                ])?;
            }
        }
        out.flush()?;
        Ok(())
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let cfg = ArtifactConfig {
            format_version: VERSION,
            sampler: self.config,
            centres: self.centres.clone(),
            n_observations: self.n_observations,
            chains: self.config.chains,
            draws_per_chain: self.config.kept_per_chain(),
            n_centres: self.n_centres(),
            n_outcomes: NUM_OUTCOMES,
        };
        let mut json = serde_json::to_string_pretty(&cfg)?;
        json.push('\n');
        fs::write(dir.join("config.json"), json)?;

        self.write_summary_csv(BufWriter::new(fs::File::create(dir.join("summary.csv"))?))?;

        let mut bin = BufWriter::new(fs::File::create(dir.join("samples.bin"))?);
        bin.write_all(MAGIC)?;
        for v in [
            VERSION,
            cfg.chains as u32,
            cfg.draws_per_chain as u32,
            cfg.n_centres as u32,
            NUM_OUTCOMES as u32,
        ] {
            bin.write_all(&v.to_le_bytes())?;
        }
        for v in &self.samples {
            bin.write_all(&v.to_le_bytes())?;
        }
        bin.flush()?;
        Ok(())
    }

    /// Loads a posterior directory; summaries are recomputed from the draws.
    pub fn load(dir: &Path) -> Result<Self> {
        let artifact = |path: &Path, message: String| Error::Artifact {
            path: path.to_path_buf(),
            message,
        };
        let cfg_path = dir.join("config.json");
        let text = fs::read_to_string(&cfg_path).map_err(|e| artifact(&cfg_path, e.to_string()))?;
        let cfg: ArtifactConfig =
            serde_json::from_str(&text).map_err(|e| artifact(&cfg_path, e.to_string()))?;
        if cfg.format_version != VERSION
            || cfg.n_outcomes != NUM_OUTCOMES
            || cfg.n_centres != cfg.centres.len()
            || cfg.chains != cfg.sampler.chains
            || cfg.draws_per_chain != cfg.sampler.kept_per_chain()
        {
            return Err(artifact(
                &cfg_path,
                "inconsistent posterior configuration".into(),
            ));
        }

        let bin_path = dir.join("samples.bin");
        let bytes = fs::read(&bin_path).map_err(|e| artifact(&bin_path, e.to_string()))?;
        if bytes.len() < HEADER_LEN || &bytes[..8] != MAGIC {
            return Err(artifact(&bin_path, "not a samples file".into()));
        }
        let header: Vec<u32> = bytes[8..HEADER_LEN]
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        let expected = [
            VERSION,
            cfg.chains as u32,
            cfg.draws_per_chain as u32,
            cfg.n_centres as u32,
            NUM_OUTCOMES as u32,
        ];
        if header != expected {
            return Err(artifact(
                &bin_path,
                format!("header {header:?} does not match config.json {expected:?}"),
            ));
        }
        let n_values = cfg.chains * cfg.draws_per_chain * cfg.n_centres * NUM_OUTCOMES;
        if bytes.len() != HEADER_LEN + 8 * n_values {
            return Err(artifact(&bin_path, "truncated samples".into()));
        }
        let samples = bytes[HEADER_LEN..]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok(Posterior::from_samples(
            samples,
            cfg.centres,
            cfg.sampler,
            cfg.n_observations,
        ))
    }
}
