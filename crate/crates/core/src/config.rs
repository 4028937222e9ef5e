//! Sectioned key-value configuration files (TOML syntax).
//!
//! ```toml
//! [lda]
//! topics = 20
//! iterations = 500
//!
//! [dr]
//! lambda = 0.4
//!
//! [tar]
//! enabled = false
//! ```
//!
//! Every key is optional. Command-line flags take precedence over the file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::corpus::{parse_stopwords, PreprocessConfig};
use crate::error::{Error, Result};
use crate::eval::SynthConfig;
use crate::io::read_to_string;
use crate::lda::LdaConfig;
use crate::pipeline::{PipelineConfig, StageConfig};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageSection {
    pub enabled: Option<bool>,
    pub lambda: Option<f64>,
    pub threshold: Option<f64>,
    pub max_iterations: Option<usize>,
    pub convergence_tol: Option<f64>,
}

impl StageSection {
    pub fn apply(&self, stage: &mut StageConfig) {
        if let Some(v) = self.enabled {
            stage.enabled = v;
        }
        if let Some(v) = self.lambda {
            stage.lambda = v;
        }
        if let Some(v) = self.threshold {
            stage.prune_threshold = v;
        }
        if let Some(v) = self.max_iterations {
            stage.max_iterations = v;
        }
        if let Some(v) = self.convergence_tol {
            stage.convergence_tol = v;
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LdaSection {
    pub topics: Option<usize>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub iterations: Option<usize>,
    pub seed: Option<u64>,
    pub infer_iterations: Option<usize>,
}

impl LdaSection {
    /// Applies the section; `alpha` follows `1/topics` unless set explicitly.
    pub fn apply(&self, lda: &mut LdaConfig) {
        if let Some(t) = self.topics {
            lda.num_topics = t;
            lda.alpha = 1.0 / t.max(1) as f64;
        }
        if let Some(v) = self.alpha {
            lda.alpha = v;
        }
        if let Some(v) = self.beta {
            lda.beta = v;
        }
        if let Some(v) = self.iterations {
            lda.gibbs_iterations = v;
        }
        if let Some(v) = self.seed {
            lda.seed = v;
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalSection {
    pub tau: Option<f64>,
    pub top_n: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PreprocessSection {
    pub lowercase: Option<bool>,
    pub stopwords_file: Option<PathBuf>,
    pub top_k_removed: Option<usize>,
    pub min_frequency: Option<u64>,
}

impl PreprocessSection {
    pub fn apply(&self, cfg: &mut PreprocessConfig) -> Result<()> {
        if let Some(v) = self.lowercase {
            cfg.lowercase = v;
        }
        if let Some(path) = &self.stopwords_file {
            cfg.stopwords = load_stopwords(path)?;
        }
        if let Some(v) = self.top_k_removed {
            cfg.top_k_frequent_removed = v;
        }
        if let Some(v) = self.min_frequency {
            cfg.min_collection_frequency = v;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthSection {
    pub groups: Option<usize>,
    pub docs_per_group: Option<usize>,
    pub vocab_size: Option<usize>,
    pub doc_length: Option<usize>,
    pub pairs: Option<usize>,
    pub docs_per_pair: Option<usize>,
    pub nondiverse_per_group: Option<usize>,
    pub general_topics: Option<usize>,
    pub general_share_min: Option<f64>,
    pub general_share_max: Option<f64>,
    pub leak: Option<f64>,
    pub length_spread: Option<f64>,
    pub burstiness: Option<f64>,
    pub seed: Option<u64>,
}

impl SynthSection {
    pub fn apply(&self, cfg: &mut SynthConfig) {
        macro_rules! set {
            ($($field:ident => $target:ident),*) => {
                $(if let Some(v) = self.$field { cfg.$target = v; })*
            };
        }
        set!(groups => num_groups, docs_per_group => docs_per_group, vocab_size => vocab_size,
             doc_length => doc_length, pairs => num_diverse_pairs, docs_per_pair => diverse_docs_per_pair,
             nondiverse_per_group => nondiverse_docs_per_group, general_topics => general_topics,
             leak => leak, length_spread => length_spread, burstiness => burstiness, seed => seed);
        if let Some(v) = self.general_share_min {
            cfg.general_share.0 = v;
        }
        if let Some(v) = self.general_share_max {
            cfg.general_share.1 = v;
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub dr: StageSection,
    #[serde(default)]
    pub tr: StageSection,
    #[serde(default)]
    pub tar: StageSection,
    #[serde(default)]
    pub lda: LdaSection,
    #[serde(default)]
    pub eval: EvalSection,
    #[serde(default)]
    pub preprocess: PreprocessSection,
    #[serde(default)]
    pub synth: SynthSection,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidConfig(e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = read_to_string(path).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        FileConfig::parse(&text).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))
    }

    /// Loads `path` if given, otherwise an empty config.
    pub fn load_optional(path: Option<&Path>) -> Result<Self> {
        path.map_or_else(|| Ok(FileConfig::default()), FileConfig::load)
    }

    /// Pipeline defaults overlaid with the file's sections.
    pub fn pipeline(&self) -> PipelineConfig {
        let mut cfg = PipelineConfig::default();
        self.dr.apply(&mut cfg.dr);
        self.tr.apply(&mut cfg.tr);
        self.tar.apply(&mut cfg.tar);
        self.lda.apply(&mut cfg.lda);
        if let Some(v) = self.lda.infer_iterations {
            cfg.infer_iterations = v;
        }
        cfg
    }
}

pub fn load_stopwords(path: &Path) -> Result<std::collections::BTreeSet<String>> {
    Ok(parse_stopwords(&read_to_string(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_overlay_defaults() {
        let f = FileConfig::parse(
            "[dr]\nlambda = 0.45\n[tar]\nenabled = false\nthreshold = 0.02\n[lda]\ntopics = 20\nseed = 3\n",
        )
        .unwrap();
        let p = f.pipeline();
        assert_eq!(p.dr.lambda, 0.45);
        assert_eq!(p.tr.lambda, 0.7);
        assert!(!p.tar.enabled);
        assert_eq!(p.tar.prune_threshold, 0.02);
        assert_eq!(p.lda.num_topics, 20);
        assert_eq!(p.lda.alpha, 0.05);
        assert_eq!(p.lda.seed, 3);
    }

    #[test]
    fn unknown_keys_are_config_errors() {
        let err = FileConfig::parse("[dr]\nlamda = 0.4\n").unwrap_err();
        assert!(matches!(err, Error::InvalidConfig(_)));
        assert!(FileConfig::parse("[nope]\n").is_err());
    }
}
