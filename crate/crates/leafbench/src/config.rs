//! JSON run configuration: one diffable file reproduces a whole grid run.

use std::fs;
use std::path::{Path, PathBuf};

use leafbench_core::filters::FilterSpec;
use leafbench_core::metrics::MetricConfig;
use leafbench_core::noise::{NoiseModel, NoiseSpec};
use leafbench_core::pipeline::ExperimentId;
use leafbench_core::rng::SplitMix64;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid config JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{field}: {reason}")]
    Invalid {
        field: &'static str,
        reason: String,
    },
}

/// A noise model plus an optional explicit seed. Without one, the seed
/// derives from the master seed and the noise's position in the list, so
/// adding filters or experiments never perturbs noise realizations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NoiseEntry {
    #[serde(flatten)]
    pub model: NoiseModel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Timing study parameters.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimingConfig {
    pub image_count: usize,
    pub repetitions: usize,
}

impl Default for TimingConfig {
    fn default() -> Self {
        TimingConfig {
            image_count: 500,
            repetitions: 3,
        }
    }
}

/// Full grid-run configuration. `corpus_dir`, `output_dir`, and
/// `master_seed` are required; everything else defaults to the benchmark's
/// standard grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub corpus_dir: PathBuf,
    pub output_dir: PathBuf,
    pub master_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noises: Option<Vec<NoiseEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filters: Option<Vec<FilterSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiments: Option<Vec<ExperimentId>>,
    #[serde(default)]
    pub metrics: MetricConfig,
    #[serde(default)]
    pub timing: TimingConfig,
}

/// Deterministic per-noise seed: first SplitMix64 output of
/// `master_seed XOR (index + 1) * golden-gamma`.
pub fn derive_noise_seed(master_seed: u64, kind_index: usize) -> u64 {
    let salt = (kind_index as u64 + 1).wrapping_mul(0x9E3779B97F4A7C15);
    SplitMix64::new(master_seed ^ salt).next_u64()
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.display().to_string(),
            source,
        })?;
        let config: RunConfig = serde_json::from_str(&text)?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !self.corpus_dir.is_dir() {
            return Err(ConfigError::Invalid {
                field: "corpus_dir",
                reason: format!("not an existing directory: {}", self.corpus_dir.display()),
            });
        }
        if let Some(noises) = &self.noises {
            if noises.is_empty() {
                return Err(ConfigError::Invalid {
                    field: "noises",
                    reason: "list must not be empty".into(),
                });
            }
            for entry in noises {
                entry.model.validate().map_err(|e| ConfigError::Invalid {
                    field: "noises",
                    reason: e.to_string(),
                })?;
            }
        }
        if let Some(filters) = &self.filters {
            if filters.is_empty() {
                return Err(ConfigError::Invalid {
                    field: "filters",
                    reason: "list must not be empty".into(),
                });
            }
            for spec in filters {
                spec.validate().map_err(|e| ConfigError::Invalid {
                    field: "filters",
                    reason: e.to_string(),
                })?;
            }
        }
        if let Some(experiments) = &self.experiments {
            if experiments.is_empty() {
                return Err(ConfigError::Invalid {
                    field: "experiments",
                    reason: "list must not be empty".into(),
                });
            }
        }
        self.metrics.validate().map_err(|e| ConfigError::Invalid {
            field: "metrics",
            reason: e.to_string(),
        })?;
        if self.timing.image_count == 0 {
            return Err(ConfigError::Invalid {
                field: "timing.image_count",
                reason: "must be at least 1".into(),
            });
        }
        if self.timing.repetitions < 3 {
            return Err(ConfigError::Invalid {
                field: "timing.repetitions",
                reason: "must be at least 3".into(),
            });
        }
        Ok(())
    }

    /// Noise list with seeds resolved.
    pub fn resolved_noises(&self) -> Vec<NoiseSpec> {
        match &self.noises {
            Some(entries) => entries
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    NoiseSpec::new(e.model, e.seed.unwrap_or(derive_noise_seed(self.master_seed, i)))
                })
                .collect(),
            None => NoiseModel::standard_set()
                .iter()
                .enumerate()
                .map(|(i, &m)| NoiseSpec::new(m, derive_noise_seed(self.master_seed, i)))
                .collect(),
        }
    }

    pub fn resolved_filters(&self) -> Vec<FilterSpec> {
        self.filters
            .clone()
            .unwrap_or_else(|| FilterSpec::standard_set().to_vec())
    }

    pub fn resolved_experiments(&self) -> Vec<ExperimentId> {
        self.experiments
            .clone()
            .unwrap_or_else(|| ExperimentId::ALL.to_vec())
    }
}
