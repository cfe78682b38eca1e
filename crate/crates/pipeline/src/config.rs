//! Pipeline configuration: a versioned TOML file with per-flag overrides
//! applied by the CLI.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use quotenet_core::analytics::PageRankParams;
use quotenet_core::preprocess::PreprocessConfig;
use quotenet_core::text::case_fold;

pub const CONFIG_VERSION: u32 = 1;

fn default_version() -> u32 {
    CONFIG_VERSION
}

fn default_min_quote_words() -> usize {
    5
}

fn default_min_shared_substring() -> usize {
    8
}

fn default_damping() -> f64 {
    0.85
}

fn default_tolerance() -> f64 {
    1e-10
}

fn default_max_iter() -> usize {
    200
}

fn default_threads() -> usize {
    1
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    #[serde(default = "default_version")]
    pub version: u32,
    /// Short-quotation threshold l_q: minimum unique content words.
    #[serde(default = "default_min_quote_words")]
    pub min_quote_words: usize,
    /// Near-duplicate window length l_s in content words.
    #[serde(default = "default_min_shared_substring")]
    pub min_shared_substring: usize,
    /// Quotes whose winning global attribution mass falls below this are dropped.
    #[serde(default)]
    pub min_global_probability: f64,
    #[serde(default = "default_damping")]
    pub damping: f64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_threads")]
    pub threads: usize,
    /// Seed for synthetic corpus generation only.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub articles: Option<PathBuf>,
    #[serde(default)]
    pub aliases: Option<PathBuf>,
    #[serde(default)]
    pub snapshot: Option<PathBuf>,
    #[serde(default)]
    pub hierarchy: Option<PathBuf>,
    #[serde(default)]
    pub defunct_countries: Option<PathBuf>,
    #[serde(default)]
    pub stopwords: Option<PathBuf>,
    #[serde(default = "default_out")]
    pub out: PathBuf,
}

impl Default for PipelineConfig {
    fn default() -> PipelineConfig {
        PipelineConfig {
            version: CONFIG_VERSION,
            min_quote_words: default_min_quote_words(),
            min_shared_substring: default_min_shared_substring(),
            min_global_probability: 0.0,
            damping: default_damping(),
            tolerance: default_tolerance(),
            max_iter: default_max_iter(),
            threads: default_threads(),
            seed: 0,
            articles: None,
            aliases: None,
            snapshot: None,
            hierarchy: None,
            defunct_countries: None,
            stopwords: None,
            out: default_out(),
        }
    }
}

impl PipelineConfig {
    pub fn from_file(path: &Path) -> anyhow::Result<PipelineConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| anyhow::anyhow!("cannot read config {}: {e}", path.display()))?;
        let cfg: PipelineConfig = toml::from_str(&text)?;
        if cfg.version != CONFIG_VERSION {
            anyhow::bail!(
                "unsupported config version {} (expected {CONFIG_VERSION})",
                cfg.version
            );
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        self.preprocess_config(None)
            .validate()
            .map_err(|e| anyhow::anyhow!(e))?;
        if !(0.0..1.0).contains(&self.damping) {
            anyhow::bail!("damping must be in [0, 1)");
        }
        if self.tolerance <= 0.0 {
            anyhow::bail!("tolerance must be positive");
        }
        if self.threads == 0 {
            anyhow::bail!("threads must be >= 1");
        }
        Ok(())
    }

    pub fn preprocess_config(&self, stopwords: Option<BTreeSet<String>>) -> PreprocessConfig {
        PreprocessConfig {
            min_unique_words: self.min_quote_words,
            min_shared_substring: self.min_shared_substring,
            stopwords: stopwords.unwrap_or_else(|| {
                quotenet_core::preprocess::DEFAULT_STOPWORDS
                    .iter()
                    .map(|w| case_fold(w))
                    .collect()
            }),
        }
    }

    pub fn pagerank_params(&self) -> PageRankParams {
        PageRankParams {
            damping: self.damping,
            tolerance: self.tolerance,
            max_iter: self.max_iter,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_the_standard_constants() {
        let c = PipelineConfig::default();
        assert_eq!(c.min_quote_words, 5);
        assert_eq!(c.min_shared_substring, 8);
        assert_eq!(c.min_global_probability, 0.0);
        assert_eq!(c.damping, 0.85);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn toml_roundtrip() {
        let c = PipelineConfig::default();
        let s = toml::to_string(&c).unwrap();
        let back: PipelineConfig = toml::from_str(&s).unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn rejected_versions_and_values() {
        let mut c = PipelineConfig::default();
        c.threads = 0;
        assert!(c.validate().is_err());
        c = PipelineConfig::default();
        c.damping = 1.5;
        assert!(c.validate().is_err());
    }
}
