//! Tokenizes a few documents, applies stopword and frequency filters, and
//! prints the resulting vocabulary and collection language model.
//!
//!     cargo run --example preprocess

use hitr::{build_corpus, collection_language_model, PreprocessConfig, RawDocument};

fn main() -> hitr::Result<()> {
    let docs = vec![
        RawDocument::new("a", "The neurons of the brain fire in bursts.", None),
        RawDocument::new("b", "Brain imaging shows neurons and glia.", None),
        RawDocument::new("c", "Stock markets fell; the markets recovered by noon.", None),
    ];
    let cfg = PreprocessConfig {
        top_k_frequent_removed: 0,
        min_collection_frequency: 2,
        ..PreprocessConfig::default()
    };
    let corpus = build_corpus(&docs, &cfg)?;
    println!("vocabulary: {:?}", corpus.vocab().terms());
    for d in corpus.docs() {
        let words: Vec<String> = d
            .counts
            .iter()
            .map(|&(w, c)| format!("{}x{c}", corpus.vocab().term(w)))
            .collect();
        println!("{}: {}", d.id, words.join(" "));
    }
    let lm = collection_language_model(&corpus)?;
    for &(w, p) in lm.entries() {
        println!("P({}) = {p:.3}", corpus.vocab().term(w));
    }
    Ok(())
}
