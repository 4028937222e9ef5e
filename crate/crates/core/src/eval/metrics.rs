use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::lda::TopicModel;
use crate::sparse::SparseDistribution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "diverse")]
    Diverse,
    #[serde(rename = "non-diverse")]
    NonDiverse,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Diverse => "diverse",
            Label::NonDiverse => "non-diverse",
        }
    }

    pub fn parse(s: &str) -> Result<Label> {
        match s {
            "diverse" => Ok(Label::Diverse),
            "non-diverse" => Ok(Label::NonDiverse),
            other => Err(Error::InvalidData(format!("unknown diversity label {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledScore {
    pub id: String,
    pub score: f64,
    pub label: Label,
}

/// ROC curve with the score threshold that produced each point.
#[derive(Debug, Clone, PartialEq)]
pub struct Roc {
    /// `(fpr, tpr)` from `(0, 0)` to `(1, 1)`.
    pub points: Vec<(f64, f64)>,
    /// Threshold per point; the first is `+inf` (nothing predicted diverse).
    pub thresholds: Vec<f64>,
    pub auc: f64,
}

impl Roc {
    /// `threshold,fpr,tpr` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("threshold,fpr,tpr\n");
        for (t, (fpr, tpr)) in self.thresholds.iter().zip(&self.points) {
            out.push_str(&format!("{t},{fpr},{tpr}\n"));
        }
        out
    }
}

/// ROC curve and AUC, with "diverse" as the positive class.
///
/// AUC is the probability that a random diverse document outscores a random
/// non-diverse one, ties counting one half.
pub fn roc_auc(scores: &[LabeledScore]) -> Result<Roc> {
    if let Some(s) = scores.iter().find(|s| !s.score.is_finite()) {
        return Err(Error::InvalidData(format!("score of {} is not finite", s.id)));
    }
    let pos = scores.iter().filter(|s| s.label == Label::Diverse).count();
    let neg = scores.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::SingleClass);
    }
    let mut sorted: Vec<&LabeledScore> = scores.iter().collect();
    sorted.sort_by(|a, b| b.score.total_cmp(&a.score));

    let mut points = vec![(0.0, 0.0)];
    let mut thresholds = vec![f64::INFINITY];
    let (mut tp, mut fp) = (0usize, 0usize);
    // Twice the count of (diverse, non-diverse) pairs ordered correctly, ties counting once.
    let mut doubled = 0u64;
    let mut i = 0;
    while i < sorted.len() {
        let score = sorted[i].score;
        let (mut gp, mut gn) = (0usize, 0usize);
        while i < sorted.len() && sorted[i].score == score {
            match sorted[i].label {
                Label::Diverse => gp += 1,
                Label::NonDiverse => gn += 1,
            }
            i += 1;
        }
        // Diverse docs in this group beat every non-diverse doc below it.
        doubled += (2 * gp * (neg - fp - gn) + gp * gn) as u64;
        tp += gp;
        fp += gn;
        points.push((fp as f64 / neg as f64, tp as f64 / pos as f64));
        thresholds.push(score);
    }
    let auc = (doubled as f64 / 2.0) / (pos as f64 * neg as f64);
    Ok(Roc { points, thresholds, auc })
}

/// Mean number of topics per document with probability at least `tau`.
pub fn sparsity(doc_topic: &[SparseDistribution], tau: f64) -> f64 {
    if doc_topic.is_empty() {
        return 0.0;
    }
    doc_topic.iter().map(|r| r.count_at_least(tau) as f64).sum::<f64>() / doc_topic.len() as f64
}

/// Document-frequency statistics over a reference corpus.
pub struct CooccurrenceIndex {
    num_docs: usize,
    postings: HashMap<usize, Vec<u32>>,
}

impl CooccurrenceIndex {
    /// Indexes only the listed terms.
    pub fn new(reference: &Corpus, terms: impl IntoIterator<Item = usize>) -> Self {
        let mut postings: HashMap<usize, Vec<u32>> = terms.into_iter().map(|t| (t, Vec::new())).collect();
        for (d, doc) in reference.docs().iter().enumerate() {
            for &(w, _) in &doc.counts {
                if let Some(p) = postings.get_mut(&w) {
                    p.push(d as u32);
                }
            }
        }
        CooccurrenceIndex {
            num_docs: reference.len(),
            postings,
        }
    }

    pub fn doc_frequency(&self, w: usize) -> usize {
        self.postings.get(&w).map_or(0, Vec::len)
    }

    pub fn co_frequency(&self, a: usize, b: usize) -> usize {
        let (Some(pa), Some(pb)) = (self.postings.get(&a), self.postings.get(&b)) else {
            return 0;
        };
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < pa.len() && j < pb.len() {
            match pa[i].cmp(&pb[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }

    /// NPMI of a word pair from document counts.
    ///
    /// `P(a, b) = (co + 1) / (N + 1)` and `P(w) = df / N`. The pair scores 0
    /// when `P(a, b) = 1` or either word never occurs, and the result is
    /// clamped to `[-1, 1]`.
    pub fn npmi(&self, a: usize, b: usize) -> f64 {
        npmi_from_counts(
            self.co_frequency(a, b),
            self.doc_frequency(a),
            self.doc_frequency(b),
            self.num_docs,
        )
    }
}

pub fn npmi_from_counts(co: usize, df_a: usize, df_b: usize, num_docs: usize) -> f64 {
    if df_a == 0 || df_b == 0 || num_docs == 0 {
        return 0.0;
    }
    let n = num_docs as f64;
    let p_ab = (co as f64 + 1.0) / (n + 1.0);
    if p_ab >= 1.0 {
        return 0.0;
    }
    let p_a = df_a as f64 / n;
    let p_b = df_b as f64 / n;
    let value = (p_ab / (p_a * p_b)).ln() / -p_ab.ln();
    value.clamp(-1.0, 1.0)
}

/// Sum over topics of the NPMI summed over pairs of each topic's `top_n` words.
pub fn npmi_coherence(model: &TopicModel, reference: &Corpus, top_n: usize) -> Result<f64> {
    if top_n < 2 {
        return Err(Error::InvalidConfig("coherence needs top_n >= 2".into()));
    }
    if reference.is_empty() {
        return Err(Error::EmptyInput);
    }
    if reference.vocab_size() != model.vocab_size {
        return Err(Error::ShapeMismatch(format!(
            "reference vocabulary has {} terms, model has {}",
            reference.vocab_size(),
            model.vocab_size
        )));
    }
    let tops: Vec<Vec<usize>> = model
        .topic_word
        .iter()
        .map(|row| row.top_n(top_n).into_iter().map(|(w, _)| w).collect())
        .collect();
    let index = CooccurrenceIndex::new(reference, tops.iter().flatten().copied());
    let per_topic: Vec<f64> = tops
        .par_iter()
        .map(|words| {
            let mut sum = 0.0;
            for i in 0..words.len() {
                for j in i + 1..words.len() {
                    sum += index.npmi(words[i], words[j]);
                }
            }
            sum
        })
        .collect();
    Ok(per_topic.iter().sum())
}

/// Purity and NMI of argmax-topic clusters against gold labels.
///
/// NMI is `2·I / (H(cluster) + H(class))`, and 1 when both entropies vanish.
pub fn cluster_purity_nmi(doc_topic: &[SparseDistribution], labels: &[String]) -> Result<(f64, f64)> {
    if doc_topic.len() != labels.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} topic rows for {} labels",
            doc_topic.len(),
            labels.len()
        )));
    }
    if doc_topic.is_empty() {
        return Err(Error::EmptyInput);
    }
    let clusters: Vec<usize> = doc_topic.iter().map(SparseDistribution::argmax).collect();
    Ok(purity_nmi(&clusters, labels))
}

/// Purity and NMI of an explicit cluster assignment.
pub fn purity_nmi<C: Ord + Clone, L: Ord + Clone>(clusters: &[C], classes: &[L]) -> (f64, f64) {
    let n = clusters.len() as f64;
    let mut table: BTreeMap<(C, L), usize> = BTreeMap::new();
    let mut cluster_sizes: BTreeMap<C, usize> = BTreeMap::new();
    let mut class_sizes: BTreeMap<L, usize> = BTreeMap::new();
    for (c, l) in clusters.iter().zip(classes) {
        *table.entry((c.clone(), l.clone())).or_default() += 1;
        *cluster_sizes.entry(c.clone()).or_default() += 1;
        *class_sizes.entry(l.clone()).or_default() += 1;
    }
    let mut best: BTreeMap<&C, usize> = BTreeMap::new();
    for ((c, _), &m) in &table {
        let b = best.entry(c).or_default();
        *b = (*b).max(m);
    }
    let purity = best.values().sum::<usize>() as f64 / n;

    let entropy = |sizes: &mut dyn Iterator<Item = usize>| -> f64 {
        sizes
            .map(|s| {
                let p = s as f64 / n;
                -p * p.ln()
            })
            .sum()
    };
    let h_cluster = entropy(&mut cluster_sizes.values().copied());
    let h_class = entropy(&mut class_sizes.values().copied());
    let mut mi = 0.0;
    for ((c, l), &m) in &table {
        let p = m as f64 / n;
        let pc = cluster_sizes[c] as f64 / n;
        let pl = class_sizes[l] as f64 / n;
        mi += p * (p / (pc * pl)).ln();
    }
    let nmi = if h_cluster + h_class == 0.0 {
        1.0
    } else {
        (2.0 * mi / (h_cluster + h_class)).clamp(0.0, 1.0)
    };
    (purity, nmi)
}

/// Gini coefficient of non-negative values; 0 means perfectly even.
pub fn gini(values: &[f64]) -> f64 {
    let n = values.len();
    let total: f64 = values.iter().sum();
    if n == 0 || total <= 0.0 {
        return 0.0;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let weighted: f64 = sorted
        .iter()
        .enumerate()
        .map(|(i, x)| (2.0 * (i as f64 + 1.0) - n as f64 - 1.0) * x)
        .sum();
    weighted / (n as f64 * total)
}

/// `Σ_d P(t|d)` for every topic.
pub fn topic_mass(doc_topic: &[SparseDistribution]) -> Vec<f64> {
    let k = doc_topic.first().map_or(0, SparseDistribution::dim);
    let mut mass = vec![0.0; k];
    for row in doc_topic {
        for &(t, p) in row.entries() {
            mass[t] += p;
        }
    }
    mass
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub auc: f64,
    pub roc: Vec<(f64, f64)>,
    pub sparsity: f64,
    pub coherence: f64,
    pub purity: Option<f64>,
    pub nmi: Option<f64>,
}
