//! End-to-end comparison of re-estimation variants on the synthetic benchmark.

use serde::{Deserialize, Serialize};

use crate::corpus::{build_corpus, Corpus, PreprocessConfig};
use crate::diversity::{score_with, TopicDistanceMatrix};
use crate::error::Result;
use crate::eval::metrics::{
    cluster_purity_nmi, gini, npmi_coherence, roc_auc, sparsity, topic_mass, EvalReport, LabeledScore, Roc,
};
use crate::eval::synth::{generate_synthetic, SynthConfig, SyntheticBenchmark};
use crate::lda::LdaConfig;
use crate::pipeline::{rescale_tar_lambda, run_pipeline, PipelineConfig, PipelineResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkConfig {
    pub synth: SynthConfig,
    pub preprocess: PreprocessConfig,
    /// HiTR settings; variants toggle its stages.
    pub pipeline: PipelineConfig,
    pub sparsity_tau: f64,
    pub coherence_top_n: usize,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        let mut lda = LdaConfig::new(20);
        lda.seed = 7;
        let mut pipeline = PipelineConfig {
            lda,
            ..PipelineConfig::default()
        };
        // The default TAR λ is tuned for 100 topics.
        pipeline.tar.lambda = rescale_tar_lambda(pipeline.tar.lambda, 100, 20);
        BenchmarkConfig {
            synth: SynthConfig::default(),
            preprocess: PreprocessConfig::default(),
            pipeline,
            sparsity_tau: 0.01,
            coherence_top_n: 10,
        }
    }
}

impl BenchmarkConfig {
    /// The HiTR config with the given stages switched on.
    pub fn variant(&self, dr: bool, tr: bool, tar: bool) -> PipelineConfig {
        let mut cfg = self.pipeline.clone();
        cfg.dr.enabled = dr;
        cfg.tr.enabled = tr;
        cfg.tar.enabled = tar;
        cfg
    }
}

/// Everything measured for one pipeline variant.
#[derive(Debug, Clone)]
pub struct VariantOutcome {
    pub name: String,
    pub result: PipelineResult,
    pub scores: Vec<LabeledScore>,
    pub roc: Roc,
    pub report: EvalReport,
    /// Gini of `Σ_d P(t|d)` before and after TAR (equal when TAR is off).
    pub gini_before_tar: f64,
    pub gini_after_tar: f64,
    pub mean_topic_distance: f64,
}

/// Prepared benchmark data shared by all variants.
pub struct Benchmark {
    pub config: BenchmarkConfig,
    pub data: SyntheticBenchmark,
    pub corpus: Corpus,
    pub pseudo_docs: Vec<crate::corpus::Document>,
    pub group_labels: Vec<String>,
}

impl Benchmark {
    pub fn prepare(config: BenchmarkConfig) -> Result<Self> {
        let data = generate_synthetic(&config.synth)?;
        let corpus = build_corpus(&data.training_documents(), &config.preprocess)?;
        let pseudo_docs = corpus.project(&data.pseudo_documents(), config.preprocess.lowercase);
        let group_labels = corpus
            .docs()
            .iter()
            .map(|d| d.label.clone().unwrap_or_default())
            .collect();
        Ok(Benchmark {
            config,
            data,
            corpus,
            pseudo_docs,
            group_labels,
        })
    }

    pub fn run_variant(&self, cfg: &PipelineConfig) -> Result<VariantOutcome> {
        let result = run_pipeline(&self.corpus, cfg)?;
        self.evaluate(cfg.label(), result)
    }

    /// Scores the pseudo-documents under `result` and computes every metric.
    pub fn evaluate(&self, name: String, result: PipelineResult) -> Result<VariantOutcome> {
        let delta = TopicDistanceMatrix::from_doc_topic(&result.final_doc_topic)?;
        let rows = result.transform(&self.pseudo_docs)?;
        let ids: Vec<String> = self.data.pseudo.iter().map(|p| p.id.clone()).collect();
        let diversity = score_with(&delta, &rows, &ids)?;
        let scores: Vec<LabeledScore> = diversity
            .into_iter()
            .zip(&self.data.pseudo)
            .map(|(s, p)| LabeledScore {
                id: s.doc_id,
                score: s.score,
                label: p.label,
            })
            .collect();
        let roc = roc_auc(&scores)?;
        let (purity, nmi) = cluster_purity_nmi(&result.final_doc_topic, &self.group_labels)?;
        let report = EvalReport {
            auc: roc.auc,
            roc: roc.points.clone(),
            sparsity: sparsity(&result.final_doc_topic, self.config.sparsity_tau),
            coherence: npmi_coherence(&result.model, &self.corpus, self.config.coherence_top_n)?,
            purity: Some(purity),
            nmi: Some(nmi),
        };
        Ok(VariantOutcome {
            name,
            gini_before_tar: gini(&topic_mass(&result.model.doc_topic)),
            gini_after_tar: gini(&topic_mass(&result.final_doc_topic)),
            mean_topic_distance: delta.mean_off_diagonal(),
            result,
            scores,
            roc,
            report,
        })
    }
}
