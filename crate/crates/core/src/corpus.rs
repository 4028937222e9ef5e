//! Text ingestion: tokenization, frequency filtering and the sparse
//! document-term count matrix.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparse::{CountVector, SparseDistribution};

const BUNDLED_STOPWORDS: &str = include_str!("stopwords.txt");

/// The bundled English stopword list, one word per line.
pub fn default_stopwords() -> BTreeSet<String> {
    parse_stopwords(BUNDLED_STOPWORDS)
}

/// Parses a one-word-per-line list; blank lines and `#` comments are skipped.
pub fn parse_stopwords(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawDocument {
    pub id: String,
    pub text: String,
    #[serde(default)]
    pub label: Option<String>,
}

impl RawDocument {
    pub fn new(id: impl Into<String>, text: impl Into<String>, label: Option<String>) -> Self {
        RawDocument {
            id: id.into(),
            text: text.into(),
            label,
        }
    }
}

/// Checks the corpus-file invariants: ids nonempty and unique.
pub fn check_ids(docs: &[RawDocument]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for d in docs {
        if d.id.is_empty() {
            return Err(Error::InvalidData("document with empty id".into()));
        }
        if !seen.insert(d.id.as_str()) {
            return Err(Error::InvalidData(format!("duplicate document id {:?}", d.id)));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreprocessConfig {
    pub lowercase: bool,
    pub stopwords: BTreeSet<String>,
    pub top_k_frequent_removed: usize,
    pub min_collection_frequency: u64,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        PreprocessConfig {
            lowercase: true,
            stopwords: default_stopwords(),
            top_k_frequent_removed: 100,
            min_collection_frequency: 5,
        }
    }
}

impl PreprocessConfig {
    /// No stopwords and no frequency filtering.
    pub fn passthrough() -> Self {
        PreprocessConfig {
            lowercase: true,
            stopwords: BTreeSet::new(),
            top_k_frequent_removed: 0,
            min_collection_frequency: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_collection_frequency < 1 {
            return Err(Error::InvalidConfig("min_collection_frequency must be at least 1".into()));
        }
        Ok(())
    }
}

/// Lowercases and splits into maximal runs of alphabetic characters.
pub fn tokenize(text: &str) -> Vec<String> {
    tokenize_with(text, true)
}

pub fn tokenize_with(text: &str, lowercase: bool) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in text.chars() {
        if ch.is_alphabetic() {
            if lowercase {
                current.extend(ch.to_lowercase());
            } else {
                current.push(ch);
            }
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// Ordered term list with its inverse index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    pub fn from_terms(terms: Vec<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(terms.len());
        for (i, t) in terms.iter().enumerate() {
            if index.insert(t.clone(), i).is_some() {
                return Err(Error::InvalidData(format!("duplicate vocabulary term {t:?}")));
            }
        }
        Ok(Vocabulary { terms, index })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, index: usize) -> &str {
        &self.terms[index]
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }
}

impl Serialize for Vocabulary {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Vocabulary {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<String>::deserialize(d)?;
        Vocabulary::from_terms(terms).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub label: Option<String>,
    /// `(term index, count)` sorted by index, counts positive.
    pub counts: Vec<(usize, u64)>,
}

impl Document {
    /// Document length `|d|`.
    pub fn len(&self) -> u64 {
        self.counts.iter().map(|(_, c)| c).sum()
    }

    /// Set on documents that lost every token during preprocessing.
    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn count_vector(&self, dim: usize) -> CountVector {
        CountVector::from_counts(dim, &self.counts).expect("document counts are sorted and in range")
    }
}

/// Sparse document-term matrix over a shared vocabulary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CorpusRepr", into = "CorpusRepr")]
pub struct Corpus {
    vocab: Vocabulary,
    docs: Vec<Document>,
    total_tokens: u64,
}

#[derive(Serialize, Deserialize)]
struct CorpusRepr {
    vocab: Vocabulary,
    docs: Vec<Document>,
}

impl TryFrom<CorpusRepr> for Corpus {
    type Error = Error;

    fn try_from(r: CorpusRepr) -> Result<Self> {
        Corpus::new(r.vocab, r.docs)
    }
}

impl From<Corpus> for CorpusRepr {
    fn from(c: Corpus) -> Self {
        CorpusRepr {
            vocab: c.vocab,
            docs: c.docs,
        }
    }
}

impl Corpus {
    pub fn new(vocab: Vocabulary, docs: Vec<Document>) -> Result<Self> {
        let v = vocab.len();
        let mut total = 0;
        for d in &docs {
            for w in d.counts.windows(2) {
                if w[0].0 >= w[1].0 {
                    return Err(Error::InvalidData(format!("document {}: counts not sorted", d.id)));
                }
            }
            for &(i, c) in &d.counts {
                if i >= v {
                    return Err(Error::InvalidData(format!("document {}: term index {i} out of range", d.id)));
                }
                if c == 0 {
                    return Err(Error::InvalidData(format!("document {}: zero count", d.id)));
                }
                total += c;
            }
        }
        Ok(Corpus {
            vocab,
            docs,
            total_tokens: total,
        })
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn docs(&self) -> &[Document] {
        &self.docs
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab.len()
    }

    /// Collection frequency of every term.
    pub fn term_counts(&self) -> Vec<u64> {
        let mut counts = vec![0; self.vocab.len()];
        for d in &self.docs {
            for &(i, c) in &d.counts {
                counts[i] += c;
            }
        }
        counts
    }

    /// Same vocabulary and ids, new counts.
    pub fn with_counts(&self, counts: Vec<Vec<(usize, u64)>>) -> Result<Corpus> {
        if counts.len() != self.docs.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} count rows for {} documents",
                counts.len(),
                self.docs.len()
            )));
        }
        let docs = self
            .docs
            .iter()
            .zip(counts)
            .map(|(d, counts)| Document {
                id: d.id.clone(),
                label: d.label.clone(),
                counts,
            })
            .collect();
        Corpus::new(self.vocab.clone(), docs)
    }

    /// Maps raw documents onto this vocabulary; unknown terms are dropped.
    pub fn project(&self, docs: &[RawDocument], lowercase: bool) -> Vec<Document> {
        docs.iter()
            .map(|raw| {
                let mut counts = BTreeMap::new();
                for tok in tokenize_with(&raw.text, lowercase) {
                    if let Some(i) = self.vocab.index_of(&tok) {
                        *counts.entry(i).or_insert(0u64) += 1;
                    }
                }
                Document {
                    id: raw.id.clone(),
                    label: raw.label.clone(),
                    counts: counts.into_iter().collect(),
                }
            })
            .collect()
    }

    /// Space-joined text reproducing each document's surviving tokens.
    pub fn detokenize(&self) -> Vec<RawDocument> {
        self.docs
            .iter()
            .map(|d| {
                let words: Vec<&str> = d
                    .counts
                    .iter()
                    .flat_map(|&(i, c)| std::iter::repeat_n(self.vocab.term(i), c as usize))
                    .collect();
                RawDocument::new(d.id.clone(), words.join(" "), d.label.clone())
            })
            .collect()
    }
}

/// Applies stopword removal, top-k frequent-term removal and the minimum
/// collection-frequency filter, in that order.
///
/// Documents emptied by the filters are kept with no counts.
pub fn build_corpus(docs: &[RawDocument], cfg: &PreprocessConfig) -> Result<Corpus> {
    cfg.validate()?;
    if docs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let tokenized: Vec<Vec<String>> = docs
        .iter()
        .map(|d| {
            tokenize_with(&d.text, cfg.lowercase)
                .into_iter()
                .filter(|t| !cfg.stopwords.contains(t))
                .collect()
        })
        .collect();

    let mut collection: BTreeMap<&str, u64> = BTreeMap::new();
    for toks in &tokenized {
        for t in toks {
            *collection.entry(t.as_str()).or_insert(0) += 1;
        }
    }

    let mut by_frequency: Vec<(&str, u64)> = collection.iter().map(|(t, c)| (*t, *c)).collect();
    by_frequency.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    let removed: BTreeSet<&str> = by_frequency
        .iter()
        .take(cfg.top_k_frequent_removed)
        .map(|(t, _)| *t)
        .collect();

    // BTreeMap iteration keeps the vocabulary in lexicographic order.
    let terms: Vec<String> = collection
        .iter()
        .filter(|(t, c)| !removed.contains(*t) && **c >= cfg.min_collection_frequency)
        .map(|(t, _)| t.to_string())
        .collect();
    let vocab = Vocabulary::from_terms(terms)?;

    let mut out = Vec::with_capacity(docs.len());
    for (raw, toks) in docs.iter().zip(&tokenized) {
        let mut counts = BTreeMap::new();
        for t in toks {
            if let Some(i) = vocab.index_of(t) {
                *counts.entry(i).or_insert(0u64) += 1;
            }
        }
        out.push(Document {
            id: raw.id.clone(),
            label: raw.label.clone(),
            counts: counts.into_iter().collect(),
        });
    }
    if out.iter().all(Document::is_empty) {
        return Err(Error::AllDocumentsEmpty);
    }
    Corpus::new(vocab, out)
}

/// Maximum-likelihood unigram model of the whole collection.
pub fn collection_language_model(corpus: &Corpus) -> Result<SparseDistribution> {
    if corpus.total_tokens() == 0 {
        return Err(Error::EmptyCorpus);
    }
    let total = corpus.total_tokens() as f64;
    let counts = corpus.term_counts();
    SparseDistribution::from_weights(
        corpus.vocab_size(),
        counts.iter().enumerate().map(|(i, &c)| (i, c as f64 / total)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(texts: &[&str]) -> Vec<RawDocument> {
        texts
            .iter()
            .enumerate()
            .map(|(i, t)| RawDocument::new(format!("d{i}"), *t, None))
            .collect()
    }

    #[test]
    fn tokenize_examples() {
        assert_eq!(tokenize("Brain, anterior neurons."), vec!["brain", "anterior", "neurons"]);
        assert!(tokenize("").is_empty());
        assert_eq!(tokenize("A-B 12 cd"), vec!["a", "b", "cd"]);
        assert_eq!(tokenize("x1y"), vec!["x", "y"]);
        assert_eq!(tokenize_with("Mixed Case", false), vec!["Mixed", "Case"]);
    }

    #[test]
    fn stopwords_are_removed() {
        let cfg = PreprocessConfig::default_with(|c| {
            c.top_k_frequent_removed = 0;
            c.min_collection_frequency = 1;
        });
        let c = build_corpus(&raw(&["the cat", "the dog", "the bird"]), &cfg).unwrap();
        assert!(c.vocab().index_of("the").is_none());
        assert_eq!(c.vocab().terms(), &["bird", "cat", "dog"]);
    }

    #[test]
    fn rare_terms_are_removed() {
        let mut cfg = PreprocessConfig::passthrough();
        cfg.min_collection_frequency = 5;
        let c = build_corpus(&raw(&["rare rare common common common", "rare rare common common"]), &cfg).unwrap();
        assert!(c.vocab().index_of("rare").is_none());
        assert!(c.vocab().index_of("common").is_some());
    }

    #[test]
    fn emptied_documents_are_kept() {
        let mut cfg = PreprocessConfig::passthrough();
        cfg.stopwords.insert("the".into());
        let c = build_corpus(&raw(&["the the", "apple"]), &cfg).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.docs()[0].is_empty());
        assert!(!c.docs()[1].is_empty());
        assert!(matches!(build_corpus(&raw(&["the", "12"]), &cfg), Err(Error::AllDocumentsEmpty)));
        assert!(matches!(build_corpus(&[], &cfg), Err(Error::EmptyInput)));
    }

    #[test]
    fn collection_model_examples() {
        let cfg = PreprocessConfig::passthrough();
        let c = build_corpus(&raw(&["a a a b"]), &cfg).unwrap();
        let lm = collection_language_model(&c).unwrap();
        assert_eq!(lm.to_dense(), vec![0.75, 0.25]);

        let c = build_corpus(&raw(&["a a a a a a a a b b", "a a b b b b b b b b"]), &cfg).unwrap();
        assert_eq!(collection_language_model(&c).unwrap().to_dense(), vec![0.5, 0.5]);

        let c = build_corpus(&raw(&["a b c d e"]), &cfg).unwrap();
        assert!(collection_language_model(&c).unwrap().to_dense().iter().all(|&p| p == 0.2));
    }

    #[test]
    fn corpus_json_form() {
        let c = build_corpus(&raw(&["b a b", "c"]), &PreprocessConfig::passthrough()).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(
            s,
            r#"{"vocab":["a","b","c"],"docs":[{"id":"d0","label":null,"counts":[[0,1],[1,2]]},{"id":"d1","label":null,"counts":[[2,1]]}]}"#
        );
        let back: Corpus = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.total_tokens(), 4);
        assert!(serde_json::from_str::<Corpus>(r#"{"vocab":["a"],"docs":[{"id":"x","label":null,"counts":[[1,1]]}]}"#).is_err());
    }

    #[test]
    fn duplicate_ids_rejected() {
        let docs = vec![RawDocument::new("a", "x", None), RawDocument::new("a", "y", None)];
        assert!(check_ids(&docs).is_err());
        assert!(check_ids(&[RawDocument::new("", "x", None)]).is_err());
    }

    impl PreprocessConfig {
        fn default_with(f: impl FnOnce(&mut PreprocessConfig)) -> Self {
            let mut c = PreprocessConfig::default();
            f(&mut c);
            c
        }
    }
}
