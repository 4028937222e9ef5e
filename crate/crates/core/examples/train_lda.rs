//! Trains collapsed-Gibbs LDA on a synthetic corpus and folds in a new document.
//!
//!     cargo run --release --example train_lda

use hitr::eval::{generate_synthetic, SynthConfig};
use hitr::{build_corpus, infer_doc_topics, train, LdaConfig, PreprocessConfig};

fn main() -> hitr::Result<()> {
    let data = generate_synthetic(&SynthConfig {
        num_groups: 4,
        num_diverse_pairs: 2,
        docs_per_group: 50,
        vocab_size: 500,
        ..SynthConfig::default()
    })?;
    let corpus = build_corpus(&data.training_documents(), &PreprocessConfig::default())?;
    let cfg = LdaConfig {
        gibbs_iterations: 200,
        seed: 1,
        ..LdaConfig::new(5)
    };
    let model = train(&corpus, &cfg)?;
    for (t, row) in model.topic_word.iter().enumerate() {
        let words: Vec<&str> = row.top_n(6).iter().map(|&(w, _)| corpus.vocab().term(w)).collect();
        println!("topic {t}: {}", words.join(" "));
    }
    let unseen = corpus.project(&data.pseudo_documents()[..1], true);
    let inferred = infer_doc_topics(&model, &unseen[0].count_vector(corpus.vocab_size()), 100, 1)?;
    let top: Vec<String> = inferred.distribution.top_n(3).iter().map(|(t, p)| format!("{t}:{p:.2}")).collect();
    println!("{} -> {}", unseen[0].id, top.join(" "));
    Ok(())
}
