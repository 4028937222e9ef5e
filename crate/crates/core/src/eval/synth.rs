//! Seeded synthetic benchmark: grouped training documents plus diverse and
//! non-diverse pseudo-documents built by averaging pairs of documents.
//!
//! Every group owns a block of the vocabulary and has one planted theme
//! distribution that is Zipfian over its block, with a small leak onto the
//! other groups' blocks. A separate block of general words carries a few
//! general themes that every document mixes in with a random share, the
//! kind of collection-wide material re-estimation is meant to strip.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{default_stopwords, tokenize, RawDocument};
use crate::error::{Error, Result};
use crate::eval::metrics::Label;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub num_groups: usize,
    pub docs_per_group: usize,
    pub vocab_size: usize,
    pub topics_per_group: usize,
    /// Mean document length.
    pub doc_length: usize,
    /// Lengths are uniform in `[L(1 - s), L(1 + s)]` for this spread `s`.
    pub length_spread: f64,
    pub num_diverse_pairs: usize,
    pub diverse_docs_per_pair: usize,
    pub nondiverse_docs_per_group: usize,
    pub seed: u64,
    /// Fraction of the vocabulary reserved for general words.
    pub general_vocab_fraction: f64,
    pub general_topics: usize,
    /// Per-document share of general words, drawn uniformly from this range.
    pub general_share: (f64, f64),
    /// Mass of a group theme spread over the other groups' blocks.
    pub leak: f64,
    pub zipf_exponent: f64,
    /// Chance that a theme token repeats an earlier theme token of the same
    /// document instead of being drawn afresh (topical words are bursty).
    pub burstiness: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            num_groups: 10,
            docs_per_group: 100,
            vocab_size: 2000,
            topics_per_group: 1,
            doc_length: 250,
            length_spread: 0.1,
            num_diverse_pairs: 5,
            diverse_docs_per_pair: 10,
            nondiverse_docs_per_group: 5,
            seed: 42,
            general_vocab_fraction: 0.2,
            general_topics: 1,
            general_share: (0.5, 0.7),
            leak: 0.05,
            zipf_exponent: 1.0,
            burstiness: 0.3,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let infeasible = |m: String| Err(Error::ConfigInfeasible(m));
        if self.num_groups < 2 {
            return infeasible(format!("need at least 2 groups, got {}", self.num_groups));
        }
        if self.vocab_size < self.num_groups {
            return infeasible(format!(
                "vocab_size {} smaller than num_groups {}",
                self.vocab_size, self.num_groups
            ));
        }
        if self.topics_per_group != 1 {
            return infeasible("only one planted topic per group is supported".into());
        }
        if 2 * self.num_diverse_pairs > self.num_groups {
            return infeasible(format!(
                "{} disjoint pairs need {} groups, have {}",
                self.num_diverse_pairs,
                2 * self.num_diverse_pairs,
                self.num_groups
            ));
        }
        if self.docs_per_group < 2 || self.doc_length == 0 {
            return infeasible("need at least 2 documents per group and positive length".into());
        }
        if self.num_diverse_pairs == 0 || self.diverse_docs_per_pair == 0 || self.nondiverse_docs_per_group == 0 {
            return infeasible("both diverse and non-diverse pseudo-documents are required".into());
        }
        let (lo, hi) = self.general_share;
        if !(0.0 <= lo && lo <= hi && hi < 1.0) {
            return infeasible(format!("general_share range ({lo}, {hi}) not within [0, 1)"));
        }
        if !(0.0..1.0).contains(&self.burstiness) {
            return infeasible(format!("burstiness {} not in [0, 1)", self.burstiness));
        }
        if !(0.0..1.0).contains(&self.length_spread) {
            return infeasible(format!("length_spread {} not in [0, 1)", self.length_spread));
        }
        if !(0.0..1.0).contains(&self.general_vocab_fraction) || !(0.0..1.0).contains(&self.leak) {
            return infeasible("general_vocab_fraction and leak must be in [0, 1)".into());
        }
        if self.general_topics > 0 && self.general_block() == 0 {
            return infeasible("general topics need a nonempty general vocabulary".into());
        }
        if self.general_topics == 0 && hi > 0.0 {
            return infeasible("general_share needs at least one general topic".into());
        }
        if self.vocab_size - self.general_block() < self.num_groups {
            return infeasible("too few words left for the group blocks".into());
        }
        Ok(())
    }

    fn general_block(&self) -> usize {
        (self.vocab_size as f64 * self.general_vocab_fraction).round() as usize
    }
}

/// Cumulative distribution for inverse-CDF sampling.
struct Categorical {
    items: Vec<usize>,
    cumulative: Vec<f64>,
}

impl Categorical {
    fn new(weights: &[(usize, f64)]) -> Self {
        let mut total = 0.0;
        let mut cumulative = Vec::with_capacity(weights.len());
        for &(_, w) in weights {
            total += w;
            cumulative.push(total);
        }
        Categorical {
            items: weights.iter().map(|(i, _)| *i).collect(),
            cumulative,
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> usize {
        let total = *self.cumulative.last().unwrap();
        let u = rng.gen::<f64>() * total;
        let pos = self.cumulative.partition_point(|&c| c <= u).min(self.items.len() - 1);
        self.items[pos]
    }
}

/// Alphabetic surface forms built from consonant-vowel syllables.
fn word_forms(n: usize) -> Vec<String> {
    const CONSONANTS: &[u8] = b"bcdfghjklmnprstvz";
    const VOWELS: &[u8] = b"aeiou";
    let stop = default_stopwords();
    let syllable = |k: usize| -> [u8; 2] { [CONSONANTS[k / VOWELS.len()], VOWELS[k % VOWELS.len()]] };
    let base = CONSONANTS.len() * VOWELS.len();
    let mut out = Vec::with_capacity(n);
    let mut k = 0usize;
    while out.len() < n {
        let mut bytes = Vec::with_capacity(6);
        let mut rest = k;
        for _ in 0..3 {
            bytes.extend_from_slice(&syllable(rest % base));
            rest /= base;
        }
        let w = String::from_utf8(bytes).unwrap();
        if !stop.contains(&w) {
            out.push(w);
        }
        k += 1;
    }
    out
}

fn zipf(block: &[usize], exponent: f64, rng: &mut ChaCha8Rng) -> Vec<(usize, f64)> {
    let mut order = block.to_vec();
    order.shuffle(rng);
    let mut weights: Vec<(usize, f64)> = order
        .iter()
        .enumerate()
        .map(|(rank, &w)| (w, 1.0 / (rank as f64 + 1.0).powf(exponent)))
        .collect();
    let total: f64 = weights.iter().map(|(_, w)| w).sum();
    for w in &mut weights {
        w.1 /= total;
    }
    weights.sort_by_key(|(w, _)| *w);
    weights
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticDocument {
    pub id: String,
    pub group: usize,
    pub counts: BTreeMap<usize, u64>,
    /// Share of the group theme among the planted components.
    pub theme_share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudoDocument {
    pub id: String,
    pub label: Label,
    /// Source groups of the two averaged documents.
    pub groups: (usize, usize),
    pub counts: BTreeMap<usize, u64>,
    /// Planted weight of each group theme, normalized over themes.
    pub theme_mixture: Vec<(usize, f64)>,
}

impl PseudoDocument {
    /// Shannon entropy (nats) of the planted theme mixture.
    pub fn theme_entropy(&self) -> f64 {
        self.theme_mixture
            .iter()
            .filter(|(_, p)| *p > 0.0)
            .fold(0.0, |h, (_, p)| h - p * p.ln())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticBenchmark {
    pub config: SynthConfig,
    pub words: Vec<String>,
    pub training: Vec<SyntheticDocument>,
    pub pseudo: Vec<PseudoDocument>,
    pub diverse_pairs: Vec<(usize, usize)>,
}

fn render(words: &[String], counts: &BTreeMap<usize, u64>) -> String {
    let mut parts: Vec<&str> = Vec::new();
    for (&w, &c) in counts {
        parts.extend(std::iter::repeat_n(words[w].as_str(), c as usize));
    }
    parts.join(" ")
}

fn group_name(g: usize) -> String {
    format!("group{}", letters(g))
}

fn letters(mut n: usize) -> String {
    let mut s = Vec::new();
    loop {
        s.push(b'a' + (n % 26) as u8);
        n /= 26;
        if n == 0 {
            break;
        }
    }
    s.reverse();
    String::from_utf8(s).unwrap()
}

/// Element-wise average of two count maps, halves rounded up; never empty.
pub fn average_counts(a: &BTreeMap<usize, u64>, b: &BTreeMap<usize, u64>) -> BTreeMap<usize, u64> {
    let keys: BTreeSet<usize> = a.keys().chain(b.keys()).copied().collect();
    let mut out: BTreeMap<usize, u64> = keys
        .into_iter()
        .map(|k| {
            let sum = a.get(&k).copied().unwrap_or(0) + b.get(&k).copied().unwrap_or(0);
            (k, sum.div_ceil(2))
        })
        .filter(|(_, c)| *c > 0)
        .collect();
    if out.is_empty() {
        if let Some((&k, _)) = a.iter().chain(b.iter()).max_by_key(|(_, c)| **c) {
            out.insert(k, 1);
        }
    }
    out
}

impl SyntheticBenchmark {
    pub fn training_documents(&self) -> Vec<RawDocument> {
        self.training
            .iter()
            .map(|d| RawDocument::new(d.id.clone(), render(&self.words, &d.counts), Some(group_name(d.group))))
            .collect()
    }

    pub fn pseudo_documents(&self) -> Vec<RawDocument> {
        self.pseudo
            .iter()
            .map(|d| RawDocument::new(d.id.clone(), render(&self.words, &d.counts), Some(d.label.as_str().to_string())))
            .collect()
    }
}

/// Builds the benchmark; identical configs give identical output.
pub fn generate_synthetic(cfg: &SynthConfig) -> Result<SyntheticBenchmark> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let words = word_forms(cfg.vocab_size);

    let general_size = cfg.general_block();
    let group_words = cfg.vocab_size - general_size;
    let general_block: Vec<usize> = (group_words..cfg.vocab_size).collect();
    let blocks: Vec<Vec<usize>> = (0..cfg.num_groups)
        .map(|g| {
            let lo = g * group_words / cfg.num_groups;
            let hi = (g + 1) * group_words / cfg.num_groups;
            (lo..hi).collect()
        })
        .collect();

    let themes: Vec<Categorical> = (0..cfg.num_groups)
        .map(|g| {
            let own = zipf(&blocks[g], cfg.zipf_exponent, &mut rng);
            let others: Vec<usize> = (0..group_words).filter(|w| !blocks[g].contains(w)).collect();
            let mut weights: Vec<(usize, f64)> = own.into_iter().map(|(w, p)| (w, p * (1.0 - cfg.leak))).collect();
            if cfg.leak > 0.0 && !others.is_empty() {
                let each = cfg.leak / others.len() as f64;
                weights.extend(others.into_iter().map(|w| (w, each)));
            }
            weights.sort_by_key(|(w, _)| *w);
            Categorical::new(&weights)
        })
        .collect();
    let general: Vec<Categorical> = (0..cfg.general_topics)
        .map(|_| Categorical::new(&zipf(&general_block, cfg.zipf_exponent, &mut rng)))
        .collect();

    let min_len = ((cfg.doc_length as f64 * (1.0 - cfg.length_spread)).round() as u64).max(1);
    let max_len = ((cfg.doc_length as f64 * (1.0 + cfg.length_spread)).round() as u64).max(min_len);
    let mut training = Vec::with_capacity(cfg.num_groups * cfg.docs_per_group);
    for g in 0..cfg.num_groups {
        for i in 0..cfg.docs_per_group {
            let len = rng.gen_range(min_len..=max_len);
            let share = if cfg.general_share.1 > cfg.general_share.0 {
                rng.gen_range(cfg.general_share.0..cfg.general_share.1)
            } else {
                cfg.general_share.0
            };
            // Dirichlet(1, ..., 1) weights over the general themes.
            let mix: Vec<(usize, f64)> = (0..cfg.general_topics)
                .map(|k| (k, -(1.0 - rng.gen::<f64>()).ln()))
                .collect();
            let mix = Categorical::new(&mix);
            let mut counts = BTreeMap::new();
            let mut drawn: Vec<usize> = Vec::new();
            for _ in 0..len {
                let w = if cfg.general_topics > 0 && rng.gen::<f64>() < share {
                    general[mix.sample(&mut rng)].sample(&mut rng)
                } else if !drawn.is_empty() && rng.gen::<f64>() < cfg.burstiness {
                    let w = drawn[rng.gen_range(0..drawn.len())];
                    drawn.push(w);
                    w
                } else {
                    let w = themes[g].sample(&mut rng);
                    drawn.push(w);
                    w
                };
                *counts.entry(w).or_insert(0u64) += 1;
            }
            training.push(SyntheticDocument {
                id: format!("train-{g:03}-{i:04}"),
                group: g,
                counts,
                theme_share: 1.0 - share,
            });
        }
    }

    let mut order: Vec<usize> = (0..cfg.num_groups).collect();
    order.shuffle(&mut rng);
    let diverse_pairs: Vec<(usize, usize)> = order
        .chunks(2)
        .take(cfg.num_diverse_pairs)
        .map(|p| (p[0], p[1]))
        .collect();
    let doc_of = |g: usize, i: usize| &training[g * cfg.docs_per_group + i];
    let mixture = |a: &SyntheticDocument, b: &SyntheticDocument| -> Vec<(usize, f64)> {
        let total = a.theme_share + b.theme_share;
        if a.group == b.group {
            vec![(a.group, 1.0)]
        } else {
            let mut m = vec![(a.group, a.theme_share / total), (b.group, b.theme_share / total)];
            m.sort_by_key(|(g, _)| *g);
            m
        }
    };

    let mut pseudo = Vec::new();
    for (p, &(ga, gb)) in diverse_pairs.iter().enumerate() {
        for i in 0..cfg.diverse_docs_per_pair {
            let a = doc_of(ga, rng.gen_range(0..cfg.docs_per_group));
            let b = doc_of(gb, rng.gen_range(0..cfg.docs_per_group));
            pseudo.push(PseudoDocument {
                id: format!("diverse-{p:02}-{i:03}"),
                label: Label::Diverse,
                groups: (ga, gb),
                counts: average_counts(&a.counts, &b.counts),
                theme_mixture: mixture(a, b),
            });
        }
    }
    let chosen: Vec<usize> = diverse_pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    for &g in &chosen {
        for i in 0..cfg.nondiverse_docs_per_group {
            let x = rng.gen_range(0..cfg.docs_per_group);
            let mut y = rng.gen_range(0..cfg.docs_per_group - 1);
            if y >= x {
                y += 1;
            }
            let (a, b) = (doc_of(g, x), doc_of(g, y));
            pseudo.push(PseudoDocument {
                id: format!("nondiverse-{g:03}-{i:03}"),
                label: Label::NonDiverse,
                groups: (g, g),
                counts: average_counts(&a.counts, &b.counts),
                theme_mixture: mixture(a, b),
            });
        }
    }

    debug_assert!(words.iter().all(|w| tokenize(w) == vec![w.clone()]));
    Ok(SyntheticBenchmark {
        config: cfg.clone(),
        words,
        training,
        pseudo,
        diverse_pairs,
    })
}
