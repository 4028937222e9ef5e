//! Shows how topic re-estimation sharpens topics: top words before and after TR.
//!
//!     cargo run --release --example inspect_topics

use hitr::eval::{generate_synthetic, SynthConfig};
use hitr::pipeline::topic_reestimate;
use hitr::{build_corpus, train, LdaConfig, PreprocessConfig, StageConfig};

fn main() -> hitr::Result<()> {
    let data = generate_synthetic(&SynthConfig {
        num_groups: 4,
        num_diverse_pairs: 2,
        docs_per_group: 60,
        vocab_size: 600,
        ..SynthConfig::default()
    })?;
    // Keep frequent words so the general vocabulary shows up in topics.
    let corpus = build_corpus(
        &data.training_documents(),
        &PreprocessConfig {
            top_k_frequent_removed: 0,
            ..PreprocessConfig::default()
        },
    )?;
    let model = train(
        &corpus,
        &LdaConfig {
            gibbs_iterations: 200,
            seed: 2,
            ..LdaConfig::new(6)
        },
    )?;
    let (sharpened, record) = topic_reestimate(&model, &StageConfig::with_lambda(0.7))?;
    println!(
        "words per topic: {:.1} -> {:.1}",
        record.mean_support_before, record.mean_support_after
    );
    let show = |row: &hitr::SparseDistribution| -> String {
        row.top_n(5)
            .iter()
            .map(|&(w, p)| format!("{}({p:.3})", corpus.vocab().term(w)))
            .collect::<Vec<_>>()
            .join(" ")
    };
    for t in 0..model.num_topics() {
        println!("topic {t}\n  before: {}\n  after:  {}", show(&model.topic_word[t]), show(&sharpened.topic_word[t]));
    }
    Ok(())
}
