use std::collections::{BTreeMap, BTreeSet};

use hitr::{build_corpus, collection_language_model, tokenize, PreprocessConfig, RawDocument};
use proptest::prelude::*;

const WORDS: &[&str] = &[
    "apple", "river", "stone", "cloud", "the", "of", "Maple", "orbit", "delta", "quartz", "amber", "pine",
];

fn raw_docs() -> impl Strategy<Value = Vec<RawDocument>> {
    prop::collection::vec(
        prop::collection::vec((0..WORDS.len(), prop_oneof![Just(" "), Just(", "), Just(".\n"), Just(" 42 ")]), 1..30),
        1..12,
    )
    .prop_map(|docs| {
        docs.into_iter()
            .enumerate()
            .map(|(i, toks)| {
                let text: String = toks.iter().map(|&(w, sep)| format!("{}{}", WORDS[w], sep)).collect();
                RawDocument::new(format!("doc{i}"), text, None)
            })
            .collect()
    })
}

fn config() -> impl Strategy<Value = PreprocessConfig> {
    (any::<bool>(), 0usize..4, 1u64..4).prop_map(|(stop, top_k, min_freq)| PreprocessConfig {
        lowercase: true,
        stopwords: if stop { ["the", "of"].iter().map(|s| s.to_string()).collect() } else { BTreeSet::new() },
        top_k_frequent_removed: top_k,
        min_collection_frequency: min_freq,
    })
}

fn raw_frequencies(docs: &[RawDocument]) -> BTreeMap<String, u64> {
    let mut freq = BTreeMap::new();
    for d in docs {
        for t in tokenize(&d.text) {
            *freq.entry(t).or_insert(0) += 1;
        }
    }
    freq
}

proptest! {
    #[test]
    fn collection_model_sums_to_one(docs in raw_docs(), cfg in config()) {
        if let Ok(corpus) = build_corpus(&docs, &cfg) {
            let lm = collection_language_model(&corpus).unwrap();
            prop_assert!((lm.total() - 1.0).abs() < 1e-9);
            prop_assert_eq!(lm.len(), corpus.vocab_size());
        }
    }

    #[test]
    fn surviving_terms_respect_every_filter(docs in raw_docs(), cfg in config()) {
        let Ok(corpus) = build_corpus(&docs, &cfg) else { return Ok(()); };
        let freq = raw_frequencies(&docs);
        // Oracle for the top-k set: sort by descending count, then term.
        let mut ranked: Vec<(&String, &u64)> = freq.iter().filter(|(t, _)| !cfg.stopwords.contains(*t)).collect();
        ranked.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
        let top: BTreeSet<&str> = ranked.iter().take(cfg.top_k_frequent_removed).map(|(t, _)| t.as_str()).collect();

        let counts = corpus.term_counts();
        for (i, term) in corpus.vocab().terms().iter().enumerate() {
            prop_assert!(!cfg.stopwords.contains(term));
            prop_assert!(!top.contains(term.as_str()));
            prop_assert!(counts[i] >= cfg.min_collection_frequency);
            prop_assert_eq!(counts[i], freq[term]);
        }
        for (t, &c) in &ranked {
            if !top.contains(t.as_str()) && c >= cfg.min_collection_frequency {
                prop_assert!(corpus.vocab().index_of(t).is_some(), "{} dropped", t);
            }
        }
        prop_assert!(corpus.vocab().terms().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn preprocessing_is_idempotent_without_top_k(docs in raw_docs(), mut cfg in config()) {
        // Removing the k most frequent terms again would strip the next k,
        // so idempotence only holds with top-k removal off.
        cfg.top_k_frequent_removed = 0;
        let Ok(first) = build_corpus(&docs, &cfg) else { return Ok(()); };
        let second = build_corpus(&first.detokenize(), &cfg).unwrap();
        prop_assert_eq!(first.vocab().terms(), second.vocab().terms());
        for (a, b) in first.docs().iter().zip(second.docs()) {
            prop_assert_eq!(&a.counts, &b.counts);
            prop_assert_eq!(&a.id, &b.id);
        }
    }
}

#[test]
fn tokenizer_examples() {
    assert_eq!(tokenize("Hello, World!"), vec!["hello", "world"]);
    assert_eq!(tokenize("state-of-the-art 2024"), vec!["state", "of", "the", "art"]);
    assert_eq!(tokenize("Ünïcode straße"), vec!["ünïcode", "straße"]);
    assert!(tokenize("  123 ... ").is_empty());
}

#[test]
fn emptied_documents_are_kept() {
    let docs = vec![
        RawDocument::new("a", "the the the", None),
        RawDocument::new("b", "river stone river", None),
    ];
    let cfg = PreprocessConfig {
        stopwords: ["the".to_string()].into_iter().collect(),
        ..PreprocessConfig::passthrough()
    };
    let corpus = build_corpus(&docs, &cfg).unwrap();
    assert_eq!(corpus.len(), 2);
    assert!(corpus.docs()[0].is_empty());
    assert_eq!(corpus.total_tokens(), 3);
}

#[test]
fn fully_filtered_collection_is_rejected() {
    let docs = vec![RawDocument::new("a", "one two", None)];
    let cfg = PreprocessConfig {
        min_collection_frequency: 2,
        ..PreprocessConfig::passthrough()
    };
    assert!(build_corpus(&docs, &cfg).is_err());
    assert!(build_corpus(&[], &PreprocessConfig::passthrough()).is_err());
}
