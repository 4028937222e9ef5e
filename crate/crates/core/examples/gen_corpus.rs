//! Generates a small synthetic benchmark and summarizes it.
//!
//!     cargo run --example gen_corpus

use hitr::eval::{generate_synthetic, Label, SynthConfig};

fn main() -> hitr::Result<()> {
    let cfg = SynthConfig {
        docs_per_group: 20,
        ..SynthConfig::default()
    };
    let data = generate_synthetic(&cfg)?;
    println!("{} training docs over {} words", data.training.len(), data.words.len());
    let first = &data.training[0];
    let len: u64 = first.counts.values().sum();
    println!("{} (group {}): {len} tokens, theme share {:.2}", first.id, first.group, first.theme_share);
    println!("diverse group pairs: {:?}", data.diverse_pairs);
    for label in [Label::Diverse, Label::NonDiverse] {
        let docs: Vec<_> = data.pseudo.iter().filter(|p| p.label == label).collect();
        let entropy = docs.iter().map(|p| p.theme_entropy()).sum::<f64>() / docs.len() as f64;
        println!("{:<12} {} pseudo-docs, mean theme entropy {entropy:.3}", label.as_str(), docs.len());
    }
    let sample = &data.pseudo_documents()[0];
    println!("{} [{}]: {}...", sample.id, sample.label.as_deref().unwrap_or(""), &sample.text[..60.min(sample.text.len())]);
    Ok(())
}
