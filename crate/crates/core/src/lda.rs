//! Latent Dirichlet allocation trained by collapsed Gibbs sampling.
//!
//! Randomness comes from `ChaCha8Rng` (rand_chacha), seeded with
//! `seed_from_u64(seed)`. Training draws from stream 0. Inference on the
//! `k`-th document of a batch uses the same seed with `set_stream(k + 1)`,
//! so documents can be processed in any order or in parallel without changing
//! the result. Count updates are integer-only and the sampling weights use
//! plain IEEE-754 double arithmetic, which keeps runs bit-identical across
//! platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::sparse::{CountVector, SparseDistribution};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaConfig {
    pub num_topics: usize,
    pub alpha: f64,
    pub beta: f64,
    pub gibbs_iterations: usize,
    pub seed: u64,
}

impl LdaConfig {
    /// `alpha = 1/T`, `beta = 0.01`, 1000 sweeps.
    pub fn new(num_topics: usize) -> Self {
        LdaConfig {
            num_topics,
            alpha: 1.0 / num_topics.max(1) as f64,
            beta: 0.01,
            gibbs_iterations: 1000,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_topics == 0 {
            return Err(Error::InvalidConfig("num_topics must be positive".into()));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidConfig(format!("alpha {} must be positive", self.alpha)));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidConfig(format!("beta {} must be positive", self.beta)));
        }
        if self.gibbs_iterations == 0 {
            return Err(Error::InvalidConfig("gibbs_iterations must be positive".into()));
        }
        Ok(())
    }
}

impl Default for LdaConfig {
    fn default() -> Self {
        LdaConfig::new(100)
    }
}

/// Topic-word and document-topic distributions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicModel {
    pub config: LdaConfig,
    pub vocab_size: usize,
    /// `P(w|t)`, one row per topic.
    pub topic_word: Vec<SparseDistribution>,
    /// `P(t|d)`, one row per training document.
    pub doc_topic: Vec<SparseDistribution>,
}

impl TopicModel {
    pub fn num_topics(&self) -> usize {
        self.topic_word.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.topic_word.len() != self.config.num_topics {
            return Err(Error::ShapeMismatch(format!(
                "{} topic rows for {} topics",
                self.topic_word.len(),
                self.config.num_topics
            )));
        }
        for (t, row) in self.topic_word.iter().enumerate() {
            if row.dim() != self.vocab_size {
                return Err(Error::ShapeMismatch(format!(
                    "topic {t} has dimension {}, vocabulary has {}",
                    row.dim(),
                    self.vocab_size
                )));
            }
            row.validate()?;
        }
        for (d, row) in self.doc_topic.iter().enumerate() {
            if row.dim() != self.num_topics() {
                return Err(Error::ShapeMismatch(format!(
                    "document {d} has {} topics, model has {}",
                    row.dim(),
                    self.num_topics()
                )));
            }
            row.validate()?;
        }
        Ok(())
    }
}

/// Mutable sampler state for one training run.
pub struct GibbsState {
    cfg: LdaConfig,
    vocab_size: usize,
    /// Word id of every token, grouped by document.
    tokens: Vec<Vec<u32>>,
    assignments: Vec<Vec<u32>>,
    /// `n_{t,w}`, stored word-major: `topic_word[w * T + t]`.
    topic_word: Vec<u32>,
    topic_totals: Vec<u32>,
    /// `n_{d,t}`, stored `doc_topic[d * T + t]`.
    doc_topic: Vec<u32>,
    rng: ChaCha8Rng,
    weights: Vec<f64>,
}

impl GibbsState {
    /// Random initial assignment of every token.
    pub fn new(corpus: &Corpus, cfg: &LdaConfig) -> Result<Self> {
        cfg.validate()?;
        if corpus.total_tokens() == 0 {
            return Err(Error::EmptyCorpus);
        }
        let k = cfg.num_topics;
        let v = corpus.vocab_size();
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let tokens: Vec<Vec<u32>> = corpus
            .docs()
            .iter()
            .map(|d| {
                d.counts
                    .iter()
                    .flat_map(|&(w, c)| std::iter::repeat_n(w as u32, c as usize))
                    .collect()
            })
            .collect();
        let mut state = GibbsState {
            cfg: cfg.clone(),
            vocab_size: v,
            assignments: Vec::with_capacity(tokens.len()),
            topic_word: vec![0; v * k],
            topic_totals: vec![0; k],
            doc_topic: vec![0; tokens.len() * k],
            tokens: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(0),
            weights: vec![0.0; k],
        };
        for (d, doc) in tokens.iter().enumerate() {
            let z: Vec<u32> = doc.iter().map(|_| rng.gen_range(0..k as u32)).collect();
            for (&w, &t) in doc.iter().zip(&z) {
                state.topic_word[w as usize * k + t as usize] += 1;
                state.topic_totals[t as usize] += 1;
                state.doc_topic[d * k + t as usize] += 1;
            }
            state.assignments.push(z);
        }
        state.tokens = tokens;
        state.rng = rng;
        Ok(state)
    }

    /// One full pass over every token.
    pub fn sweep(&mut self) {
        let k = self.cfg.num_topics;
        let alpha = self.cfg.alpha;
        let beta = self.cfg.beta;
        let v_beta = self.vocab_size as f64 * beta;
        for d in 0..self.tokens.len() {
            let dt = &mut self.doc_topic[d * k..(d + 1) * k];
            for (pos, &w) in self.tokens[d].iter().enumerate() {
                let old = self.assignments[d][pos] as usize;
                let tw = &mut self.topic_word[w as usize * k..(w as usize + 1) * k];
                tw[old] -= 1;
                self.topic_totals[old] -= 1;
                dt[old] -= 1;

                let mut total = 0.0;
                for t in 0..k {
                    total += (dt[t] as f64 + alpha) * (tw[t] as f64 + beta)
                        / (self.topic_totals[t] as f64 + v_beta);
                    self.weights[t] = total;
                }
                let u = self.rng.gen::<f64>() * total;
                let new = self.weights.iter().position(|&c| u < c).unwrap_or(k - 1);

                tw[new] += 1;
                self.topic_totals[new] += 1;
                dt[new] += 1;
                self.assignments[d][pos] = new as u32;
            }
        }
    }

    /// `n_{t,w}` as a `T x V` table.
    pub fn topic_word_counts(&self) -> Vec<Vec<u32>> {
        let k = self.cfg.num_topics;
        (0..k)
            .map(|t| (0..self.vocab_size).map(|w| self.topic_word[w * k + t]).collect())
            .collect()
    }

    /// `n_{d,t}` as a `D x T` table.
    pub fn doc_topic_counts(&self) -> Vec<Vec<u32>> {
        self.doc_topic.chunks(self.cfg.num_topics).map(<[u32]>::to_vec).collect()
    }

    /// Smoothed point estimates from the current sample.
    pub fn to_model(&self) -> TopicModel {
        let k = self.cfg.num_topics;
        let v = self.vocab_size;
        let (alpha, beta) = (self.cfg.alpha, self.cfg.beta);
        let topic_word = (0..k)
            .map(|t| {
                let denom = self.topic_totals[t] as f64 + v as f64 * beta;
                let entries = (0..v).map(|w| (w, (self.topic_word[w * k + t] as f64 + beta) / denom)).collect();
                SparseDistribution::new_unchecked(v, entries)
            })
            .collect();
        let doc_topic = self
            .tokens
            .iter()
            .enumerate()
            .map(|(d, toks)| {
                if toks.is_empty() {
                    return SparseDistribution::uniform(k);
                }
                let denom = toks.len() as f64 + k as f64 * alpha;
                let entries = (0..k).map(|t| (t, (self.doc_topic[d * k + t] as f64 + alpha) / denom)).collect();
                SparseDistribution::new_unchecked(k, entries)
            })
            .collect();
        TopicModel {
            config: self.cfg.clone(),
            vocab_size: v,
            topic_word,
            doc_topic,
        }
    }
}

/// Trains LDA for `cfg.gibbs_iterations` sweeps.
pub fn train(corpus: &Corpus, cfg: &LdaConfig) -> Result<TopicModel> {
    let mut state = GibbsState::new(corpus, cfg)?;
    for it in 0..cfg.gibbs_iterations {
        state.sweep();
        if (it + 1) % 100 == 0 {
            log::debug!("gibbs sweep {}/{}", it + 1, cfg.gibbs_iterations);
        }
    }
    Ok(state.to_model())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Inference {
    pub distribution: SparseDistribution,
    /// No token of the document is known to the model; the distribution is uniform.
    pub empty: bool,
}

/// Folds new documents into a fixed topic model.
pub struct Inferencer {
    num_topics: usize,
    vocab_size: usize,
    alpha: f64,
    /// `P(w|t)` word-major.
    phi: Vec<f64>,
}

impl Inferencer {
    pub fn new(model: &TopicModel) -> Self {
        let k = model.num_topics();
        let v = model.vocab_size;
        let mut phi = vec![0.0; v * k];
        for (t, row) in model.topic_word.iter().enumerate() {
            for &(w, p) in row.entries() {
                phi[w * k + t] = p;
            }
        }
        Inferencer {
            num_topics: k,
            vocab_size: v,
            alpha: model.config.alpha,
            phi,
        }
    }

    /// Gibbs sampling over the document's token assignments with topics held fixed.
    ///
    /// Words that no topic generates are ignored.
    pub fn infer(&self, doc: &CountVector, iterations: usize, seed: u64, stream: u64) -> Result<Inference> {
        if doc.dim() != self.vocab_size {
            return Err(Error::ShapeMismatch(format!(
                "document over {} terms, model over {}",
                doc.dim(),
                self.vocab_size
            )));
        }
        let k = self.num_topics;
        let tokens: Vec<usize> = doc
            .entries()
            .iter()
            .filter(|&&(w, _)| self.phi[w * k..(w + 1) * k].iter().any(|&p| p > 0.0))
            .flat_map(|&(w, c)| std::iter::repeat_n(w, c.round() as usize))
            .collect();
        if tokens.is_empty() {
            return Ok(Inference {
                distribution: SparseDistribution::uniform(k),
                empty: true,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let mut weights = vec![0.0; k];
        let mut counts = vec![0u32; k];
        let mut z = Vec::with_capacity(tokens.len());
        for &w in &tokens {
            let phi = &self.phi[w * k..(w + 1) * k];
            let t = sample(&mut rng, &mut weights, |t| phi[t]);
            counts[t] += 1;
            z.push(t);
        }
        for _ in 0..iterations {
            for (pos, &w) in tokens.iter().enumerate() {
                let phi = &self.phi[w * k..(w + 1) * k];
                counts[z[pos]] -= 1;
                let t = sample(&mut rng, &mut weights, |t| (counts[t] as f64 + self.alpha) * phi[t]);
                counts[t] += 1;
                z[pos] = t;
            }
        }
        let denom = tokens.len() as f64 + k as f64 * self.alpha;
        let entries = (0..k).map(|t| (t, (counts[t] as f64 + self.alpha) / denom)).collect();
        Ok(Inference {
            distribution: SparseDistribution::new_unchecked(k, entries),
            empty: false,
        })
    }

    /// Infers every document; document `i` uses RNG stream `i + 1`.
    pub fn infer_all(&self, docs: &[CountVector], iterations: usize, seed: u64) -> Result<Vec<Inference>> {
        docs.par_iter()
            .enumerate()
            .map(|(i, d)| self.infer(d, iterations, seed, i as u64 + 1))
            .collect()
    }
}

fn sample(rng: &mut ChaCha8Rng, cumulative: &mut [f64], weight: impl Fn(usize) -> f64) -> usize {
    let mut total = 0.0;
    for (t, c) in cumulative.iter_mut().enumerate() {
        total += weight(t);
        *c = total;
    }
    let u = rng.gen::<f64>() * total;
    cumulative.iter().position(|&c| u < c).unwrap_or(cumulative.len() - 1)
}

/// Topic distribution of a single new document.
pub fn infer_doc_topics(model: &TopicModel, doc: &CountVector, iterations: usize, seed: u64) -> Result<Inference> {
    Inferencer::new(model).infer(doc, iterations, seed, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_corpus, PreprocessConfig, RawDocument};

    fn corpus(texts: &[&str]) -> Corpus {
        let docs: Vec<RawDocument> = texts
            .iter()
            .enumerate()
            .map(|(i, t)| RawDocument::new(format!("d{i}"), *t, None))
            .collect();
        build_corpus(&docs, &PreprocessConfig::passthrough()).unwrap()
    }

    #[test]
    fn single_topic_single_word() {
        let c = corpus(&["brain"]);
        let mut cfg = LdaConfig::new(1);
        cfg.gibbs_iterations = 5;
        let m = train(&c, &cfg).unwrap();
        assert_eq!(m.topic_word[0].entries(), &[(0, 1.0)]);
        assert_eq!(m.doc_topic[0].entries(), &[(0, 1.0)]);
    }

    #[test]
    fn empty_documents_get_uniform_rows() {
        let mut c = corpus(&["a b a", "b b a"]);
        c = c.with_counts(vec![vec![(0, 2), (1, 1)], vec![]]).unwrap();
        let mut cfg = LdaConfig::new(4);
        cfg.gibbs_iterations = 3;
        let m = train(&c, &cfg).unwrap();
        assert_eq!(m.doc_topic[1], SparseDistribution::uniform(4));
        m.validate().unwrap();
    }

    #[test]
    fn rejects_empty_corpus_and_bad_config() {
        let c = corpus(&["a"]).with_counts(vec![vec![]]).unwrap();
        assert!(matches!(train(&c, &LdaConfig::new(2)), Err(Error::EmptyCorpus)));
        let c = corpus(&["a"]);
        assert!(train(&c, &LdaConfig::new(0)).is_err());
        let mut cfg = LdaConfig::new(2);
        cfg.beta = 0.0;
        assert!(train(&c, &cfg).is_err());
    }

    #[test]
    fn empty_inference_is_uniform_and_flagged() {
        let c = corpus(&["a b", "b c"]);
        let mut cfg = LdaConfig::new(3);
        cfg.gibbs_iterations = 2;
        let m = train(&c, &cfg).unwrap();
        let inf = infer_doc_topics(&m, &CountVector::new(3, vec![]).unwrap(), 10, 0).unwrap();
        assert!(inf.empty);
        assert_eq!(inf.distribution, SparseDistribution::uniform(3));
        assert!(infer_doc_topics(&m, &CountVector::new(5, vec![]).unwrap(), 10, 0).is_err());
    }
}
