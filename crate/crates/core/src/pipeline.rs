//! Hierarchical re-estimation of a topic model.
//!
//! Stages run in a fixed order: document re-estimation (DR) on the
//! document-term counts, LDA training, topic re-estimation (TR) on the
//! topic-word rows, topic assignment, and topic assignment re-estimation
//! (TAR) on the document-topic rows. Each re-estimation stage parsimonizes
//! its rows against the average of all rows at that level.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{collection_language_model, Corpus, Document};
use crate::error::{Error, Result};
use crate::lda::{self, Inferencer, LdaConfig, TopicModel};
use crate::parsimony::{parsimonize_traced, EmConfig};
use crate::sparse::{mean_distribution, CountVector, SparseDistribution};

/// Scale applied to probabilities to form TR/TAR pseudo-counts.
pub const PSEUDO_COUNT_SCALE: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StageConfig {
    pub enabled: bool,
    pub lambda: f64,
    pub prune_threshold: f64,
    pub max_iterations: usize,
    pub convergence_tol: f64,
}

impl StageConfig {
    pub fn with_lambda(lambda: f64) -> Self {
        StageConfig {
            enabled: true,
            lambda,
            prune_threshold: 0.01,
            max_iterations: 50,
            convergence_tol: 1e-6,
        }
    }

    pub fn disabled(mut self) -> Self {
        self.enabled = false;
        self
    }

    pub fn em(&self) -> EmConfig {
        EmConfig {
            lambda: self.lambda,
            prune_threshold: self.prune_threshold,
            max_iterations: self.max_iterations,
            convergence_tol: self.convergence_tol,
        }
    }
}

/// TAR λ for `to_topics` topics that prunes as hard as `lambda` does at `from_topics`.
///
/// With a near-uniform topic background `b ≈ 1/T`, a topic survives TAR only
/// if its share exceeds a bound that grows with `(1 - λ) / λ · b`. Holding
/// `(1 - λ) / (λ T)` fixed keeps that bound in place when `T` changes.
pub fn rescale_tar_lambda(lambda: f64, from_topics: usize, to_topics: usize) -> f64 {
    let odds = (1.0 - lambda) / lambda * to_topics as f64 / from_topics as f64;
    1.0 / (1.0 + odds)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub dr: StageConfig,
    pub tr: StageConfig,
    pub tar: StageConfig,
    pub lda: LdaConfig,
    /// Gibbs sweeps used when folding documents into a fixed model.
    pub infer_iterations: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            dr: StageConfig::with_lambda(0.4),
            tr: StageConfig::with_lambda(0.7),
            tar: StageConfig::with_lambda(0.03),
            lda: LdaConfig::default(),
            infer_iterations: 100,
        }
    }
}

impl PipelineConfig {
    /// Plain LDA: every re-estimation stage off.
    pub fn lda_only(lda: LdaConfig) -> Self {
        let d = PipelineConfig::default();
        PipelineConfig {
            dr: d.dr.disabled(),
            tr: d.tr.disabled(),
            tar: d.tar.disabled(),
            lda,
            infer_iterations: d.infer_iterations,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, stage) in [("dr", &self.dr), ("tr", &self.tr), ("tar", &self.tar)] {
            if stage.enabled {
                stage
                    .em()
                    .validate()
                    .map_err(|e| Error::InvalidConfig(format!("[{name}] {e}")))?;
            }
        }
        self.lda.validate()?;
        if self.infer_iterations == 0 {
            return Err(Error::InvalidConfig("infer_iterations must be positive".into()));
        }
        Ok(())
    }

    /// Short name such as `LDA+DR+TAR`.
    pub fn label(&self) -> String {
        let mut s = String::from("LDA");
        for (name, stage) in [("DR", &self.dr), ("TR", &self.tr), ("TAR", &self.tar)] {
            if stage.enabled {
                s.push('+');
                s.push_str(name);
            }
        }
        s
    }
}

/// Summary statistics for one executed stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: String,
    pub items: usize,
    pub mean_iterations: f64,
    /// Mean input probability mass of the entries a row lost.
    pub removed_mass: f64,
    pub mean_support_before: f64,
    pub mean_support_after: f64,
}

impl StageRecord {
    fn passthrough(stage: &str, rows: &[SparseDistribution]) -> Self {
        let support = mean_support(rows);
        StageRecord {
            stage: stage.into(),
            items: rows.len(),
            mean_iterations: 0.0,
            removed_mass: 0.0,
            mean_support_before: support,
            mean_support_after: support,
        }
    }
}

fn mean_support(rows: &[SparseDistribution]) -> f64 {
    if rows.is_empty() {
        return 0.0;
    }
    rows.iter().map(|r| r.len() as f64).sum::<f64>() / rows.len() as f64
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// Mass of `before` that is not on the support of `after`.
fn lost_mass(before: &SparseDistribution, after: &SparseDistribution) -> f64 {
    before
        .entries()
        .iter()
        .filter(|(i, _)| after.get(*i) == 0.0)
        .map(|(_, p)| p)
        .sum()
}

/// `floor(x)`, except values within rounding noise of an integer snap to it.
fn floor_count(x: f64) -> u64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r as u64
    } else {
        x.floor() as u64
    }
}

/// Parsimonizes one document against `background` and recomputes its counts as
/// `floor(P(w|d̃) · |d|)` with the original length.
fn reestimate_document(
    doc: &Document,
    dim: usize,
    background: &SparseDistribution,
    em: &EmConfig,
) -> Result<(Vec<(usize, u64)>, usize, f64)> {
    if doc.is_empty() {
        return Ok((Vec::new(), 0, 0.0));
    }
    let len = doc.len() as f64;
    let counts = doc.count_vector(dim);
    let fit = parsimonize_traced(&counts, background, em)?;
    let mut out: Vec<(usize, u64)> = fit
        .distribution
        .entries()
        .iter()
        .map(|&(w, p)| (w, floor_count(p * len)))
        .filter(|&(_, c)| c > 0)
        .collect();
    if out.is_empty() {
        out.push((fit.distribution.argmax(), 1));
    }
    let kept: u64 = doc
        .counts
        .iter()
        .filter(|(w, _)| out.binary_search_by_key(w, |&(i, _)| i).is_ok())
        .map(|(_, c)| c)
        .sum();
    let removed = 1.0 - kept as f64 / len;
    Ok((out, fit.iterations, removed))
}

/// DR: removes collection-general words from every document.
pub fn document_reestimate(corpus: &Corpus, cfg: &StageConfig) -> Result<(Corpus, StageRecord)> {
    let background = collection_language_model(corpus)?;
    let em = cfg.em();
    em.validate()?;
    let dim = corpus.vocab_size();
    let rows: Vec<(Vec<(usize, u64)>, usize, f64)> = corpus
        .docs()
        .par_iter()
        .map(|d| reestimate_document(d, dim, &background, &em))
        .collect::<Result<_>>()?;
    let nonempty: Vec<usize> = (0..rows.len()).filter(|&i| !corpus.docs()[i].is_empty()).collect();
    let record = StageRecord {
        stage: "dr".into(),
        items: nonempty.len(),
        mean_iterations: mean(nonempty.iter().map(|&i| rows[i].1 as f64)),
        removed_mass: mean(nonempty.iter().map(|&i| rows[i].2)),
        mean_support_before: mean(nonempty.iter().map(|&i| corpus.docs()[i].counts.len() as f64)),
        mean_support_after: mean(nonempty.iter().map(|&i| rows[i].0.len() as f64)),
    };
    let out = corpus.with_counts(rows.into_iter().map(|r| r.0).collect())?;
    Ok((out, record))
}

/// Parsimonizes each row's pseudo-counts against the mean of all rows.
fn reestimate_rows(
    stage: &str,
    rows: &[SparseDistribution],
    background: &SparseDistribution,
    cfg: &StageConfig,
) -> Result<(Vec<SparseDistribution>, StageRecord)> {
    let em = cfg.em();
    em.validate()?;
    let fitted: Vec<(SparseDistribution, usize)> = rows
        .par_iter()
        .map(|row| {
            let counts = CountVector::scaled(row, PSEUDO_COUNT_SCALE);
            parsimonize_traced(&counts, background, &em).map(|f| (f.distribution, f.iterations))
        })
        .collect::<Result<_>>()?;
    let record = StageRecord {
        stage: stage.into(),
        items: rows.len(),
        mean_iterations: mean(fitted.iter().map(|f| f.1 as f64)),
        removed_mass: mean(rows.iter().zip(&fitted).map(|(r, f)| lost_mass(r, &f.0))),
        mean_support_before: mean_support(rows),
        mean_support_after: mean(fitted.iter().map(|f| f.0.len() as f64)),
    };
    Ok((fitted.into_iter().map(|f| f.0).collect(), record))
}

/// TR: removes words shared across topics from every topic.
pub fn topic_reestimate(model: &TopicModel, cfg: &StageConfig) -> Result<(TopicModel, StageRecord)> {
    let background = mean_distribution(&model.topic_word)?;
    let (topic_word, record) = reestimate_rows("tr", &model.topic_word, &background, cfg)?;
    Ok((
        TopicModel {
            topic_word,
            ..model.clone()
        },
        record,
    ))
}

/// Background used by TAR: the normalized sum of all document-topic rows.
pub fn topic_collection_model(doc_topic: &[SparseDistribution]) -> Result<SparseDistribution> {
    mean_distribution(doc_topic)
}

/// TAR: removes collection-general topics from every document.
pub fn topic_assignment_reestimate(
    doc_topic: &[SparseDistribution],
    cfg: &StageConfig,
) -> Result<(Vec<SparseDistribution>, StageRecord)> {
    let background = topic_collection_model(doc_topic)?;
    reestimate_rows("tar", doc_topic, &background, cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineResult {
    #[serde(rename = "pipeline")]
    pub config: PipelineConfig,
    pub doc_ids: Vec<String>,
    /// Document-term counts after DR (the input corpus when DR is off).
    pub reestimated_corpus: Corpus,
    /// Topic-word rows after TR; `doc_topic` holds the assignment TAR consumed.
    #[serde(flatten)]
    pub model: TopicModel,
    /// `P(t|d)` after TAR.
    pub final_doc_topic: Vec<SparseDistribution>,
    pub stage_log: Vec<StageRecord>,
    /// DR background, kept to re-estimate unseen documents the same way.
    pub collection_model: Option<SparseDistribution>,
    /// TAR background, kept to re-estimate unseen documents the same way.
    pub topic_background: Option<SparseDistribution>,
}

/// Runs DR → LDA → TR → assignment → TAR, skipping disabled stages.
pub fn run_pipeline(corpus: &Corpus, cfg: &PipelineConfig) -> Result<PipelineResult> {
    cfg.validate()?;
    let mut stage_log = Vec::new();

    let (working, collection_model) = if cfg.dr.enabled {
        let (c, rec) = document_reestimate(corpus, &cfg.dr).map_err(|e| Error::in_stage("dr", e))?;
        log::info!("dr: removed {:.3} of token mass", rec.removed_mass);
        stage_log.push(rec);
        let bg = collection_language_model(corpus).map_err(|e| Error::in_stage("dr", e))?;
        (c, Some(bg))
    } else {
        (corpus.clone(), None)
    };

    let mut model = lda::train(&working, &cfg.lda).map_err(|e| Error::in_stage("lda", e))?;
    stage_log.push(StageRecord::passthrough("lda", &model.doc_topic));

    if cfg.tr.enabled {
        let (m, rec) = topic_reestimate(&model, &cfg.tr).map_err(|e| Error::in_stage("tr", e))?;
        log::info!("tr: removed {:.3} of topic mass", rec.removed_mass);
        stage_log.push(rec);
        model = m;
        let inferencer = Inferencer::new(&model);
        let docs: Vec<CountVector> = working.docs().iter().map(|d| d.count_vector(working.vocab_size())).collect();
        let inferred = inferencer
            .infer_all(&docs, cfg.infer_iterations, cfg.lda.seed)
            .map_err(|e| Error::in_stage("assign", e))?;
        model.doc_topic = inferred.into_iter().map(|i| i.distribution).collect();
        stage_log.push(StageRecord::passthrough("assign", &model.doc_topic));
    }

    let (final_doc_topic, topic_background) = if cfg.tar.enabled {
        let (rows, rec) =
            topic_assignment_reestimate(&model.doc_topic, &cfg.tar).map_err(|e| Error::in_stage("tar", e))?;
        log::info!("tar: removed {:.3} of assignment mass", rec.removed_mass);
        stage_log.push(rec);
        let bg = topic_collection_model(&model.doc_topic).map_err(|e| Error::in_stage("tar", e))?;
        (rows, Some(bg))
    } else {
        (model.doc_topic.clone(), None)
    };

    Ok(PipelineResult {
        config: cfg.clone(),
        doc_ids: corpus.docs().iter().map(|d| d.id.clone()).collect(),
        reestimated_corpus: working,
        model,
        final_doc_topic,
        stage_log,
        collection_model,
        topic_background,
    })
}

impl PipelineResult {
    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if self.final_doc_topic.len() != self.doc_ids.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} topic rows for {} documents",
                self.final_doc_topic.len(),
                self.doc_ids.len()
            )));
        }
        for row in &self.final_doc_topic {
            if row.dim() != self.model.num_topics() {
                return Err(Error::ShapeMismatch("final_doc_topic row dimension differs from topic count".into()));
            }
            row.validate()?;
        }
        if self.reestimated_corpus.vocab_size() != self.model.vocab_size {
            return Err(Error::ShapeMismatch(format!(
                "vocabulary has {} terms, model has {}",
                self.reestimated_corpus.vocab_size(),
                self.model.vocab_size
            )));
        }
        Ok(())
    }

    /// Final topic distributions of unseen documents, re-estimated the way the
    /// training documents were: DR against the training collection, inference
    /// with the final topics, TAR against the training topic background.
    pub fn transform(&self, docs: &[Document]) -> Result<Vec<SparseDistribution>> {
        let dim = self.model.vocab_size;
        let cfg = &self.config;
        let counts: Vec<CountVector> = match (&self.collection_model, cfg.dr.enabled) {
            (Some(bg), true) => {
                let em = cfg.dr.em();
                docs.par_iter()
                    .map(|d| {
                        let (c, _, _) = reestimate_document(d, dim, bg, &em)?;
                        CountVector::from_counts(dim, &c)
                    })
                    .collect::<Result<_>>()
                    .map_err(|e| Error::in_stage("dr", e))?
            }
            _ => docs
                .iter()
                .map(|d| CountVector::from_counts(dim, &d.counts))
                .collect::<Result<_>>()?,
        };
        let inferred = Inferencer::new(&self.model)
            .infer_all(&counts, cfg.infer_iterations, cfg.lda.seed)
            .map_err(|e| Error::in_stage("assign", e))?;
        let rows: Vec<SparseDistribution> = inferred.into_iter().map(|i| i.distribution).collect();
        match (&self.topic_background, cfg.tar.enabled) {
            (Some(bg), true) => {
                let em = cfg.tar.em();
                rows.par_iter()
                    .map(|r| parsimonize_traced(&CountVector::scaled(r, PSEUDO_COUNT_SCALE), bg, &em).map(|f| f.distribution))
                    .collect::<Result<_>>()
                    .map_err(|e| Error::in_stage("tar", e))
            }
            _ => Ok(rows),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Vocabulary;

    fn three_word_corpus() -> Corpus {
        // "the" dominates the collection; the first document is the one under test.
        let vocab = Vocabulary::from_terms(vec!["brain".into(), "neurons".into(), "the".into()]).unwrap();
        let docs = vec![
            Document { id: "a".into(), label: None, counts: vec![(0, 10), (1, 10), (2, 50)] },
            Document { id: "b".into(), label: None, counts: vec![(2, 400)] },
            Document { id: "c".into(), label: None, counts: vec![(2, 390)] },
        ];
        Corpus::new(vocab, docs).unwrap()
    }

    #[test]
    fn floor_rule() {
        assert_eq!(floor_count(0.35 * 10.0), 3);
        assert_eq!(floor_count(0.1 * 3.0 / 0.3 * 3.0), 3);
        assert_eq!(floor_count(2.999), 2);
    }

    #[test]
    fn tar_lambda_rescaling() {
        assert_eq!(rescale_tar_lambda(0.03, 100, 100), 0.03);
        let l = rescale_tar_lambda(0.03, 100, 20);
        assert!((l - 0.1339).abs() < 1e-4);
        assert!(((1.0 - l) / (l * 20.0) - 0.97 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn dr_lambda_one_is_identity() {
        let c = three_word_corpus();
        let cfg = StageConfig { prune_threshold: 0.0, ..StageConfig::with_lambda(1.0) };
        let (out, rec) = document_reestimate(&c, &cfg).unwrap();
        assert_eq!(out, c);
        assert_eq!(rec.removed_mass, 0.0);
    }

    #[test]
    fn dr_suppresses_the_general_word() {
        let c = three_word_corpus();
        let (out, rec) = document_reestimate(&c, &StageConfig::with_lambda(0.1)).unwrap();
        let d = &out.docs()[0];
        let count = |w| d.counts.iter().find(|(i, _)| *i == w).map_or(0, |(_, c)| *c);
        assert!(count(2) < 50);
        assert!(count(0) >= 10 && count(1) >= 10);
        assert!(rec.removed_mass > 0.0);
        // Single-word documents cannot lose their only word.
        assert_eq!(out.docs()[1].counts, vec![(2, 400)]);
    }

    #[test]
    fn tr_on_a_single_topic_only_prunes() {
        let row = SparseDistribution::new(4, vec![(0, 0.6), (1, 0.395), (2, 0.005)]).unwrap();
        let model = TopicModel {
            config: LdaConfig::new(1),
            vocab_size: 4,
            topic_word: vec![row.clone()],
            doc_topic: vec![],
        };
        let (out, _) = topic_reestimate(&model, &StageConfig::with_lambda(0.5)).unwrap();
        let expected = row.prune(0.01);
        for w in 0..4 {
            assert!((out.topic_word[0].get(w) - expected.get(w)).abs() < 1e-12);
        }
    }

    #[test]
    fn identical_topics_stay_identical() {
        let row = SparseDistribution::new(3, vec![(0, 0.5), (1, 0.3), (2, 0.2)]).unwrap();
        let other = SparseDistribution::new(3, vec![(0, 0.1), (1, 0.1), (2, 0.8)]).unwrap();
        let model = TopicModel {
            config: LdaConfig::new(3),
            vocab_size: 3,
            topic_word: vec![row.clone(), other, row],
            doc_topic: vec![],
        };
        let (out, _) = topic_reestimate(&model, &StageConfig::with_lambda(0.5)).unwrap();
        assert_eq!(out.topic_word[0], out.topic_word[2]);
    }

    #[test]
    fn tar_identity_and_uniform_rows() {
        let rows = vec![SparseDistribution::new(3, vec![(0, 0.7), (1, 0.295), (2, 0.005)]).unwrap(); 4];
        let cfg = StageConfig { prune_threshold: 0.0, ..StageConfig::with_lambda(1.0) };
        let (out, _) = topic_assignment_reestimate(&rows, &cfg).unwrap();
        for (a, b) in out.iter().zip(&rows) {
            assert!(a.total_variation(b) < 1e-12);
        }
        // Identical rows: background equals the row, so only the pruning acts.
        let (out, _) = topic_assignment_reestimate(&rows, &StageConfig::with_lambda(0.03)).unwrap();
        let expected = rows[0].prune(0.01);
        for r in &out {
            assert!(r.total_variation(&expected) < 1e-12);
        }
    }

    #[test]
    fn labels() {
        assert_eq!(PipelineConfig::default().label(), "LDA+DR+TR+TAR");
        assert_eq!(PipelineConfig::lda_only(LdaConfig::new(3)).label(), "LDA");
    }
}
