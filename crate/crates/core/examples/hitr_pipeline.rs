//! Runs plain LDA and the full DR → LDA → TR → TAR pipeline side by side and
//! prints what each stage removed.
//!
//!     cargo run --release --example hitr_pipeline

use hitr::eval::{generate_synthetic, sparsity, SynthConfig};
use hitr::{build_corpus, run_pipeline, LdaConfig, PipelineConfig, PreprocessConfig};

fn main() -> hitr::Result<()> {
    let data = generate_synthetic(&SynthConfig {
        docs_per_group: 30,
        ..SynthConfig::default()
    })?;
    let corpus = build_corpus(&data.training_documents(), &PreprocessConfig::default())?;
    let lda = LdaConfig {
        gibbs_iterations: 300,
        seed: 3,
        ..LdaConfig::new(20)
    };
    let mut full = PipelineConfig {
        lda: lda.clone(),
        ..PipelineConfig::default()
    };
    full.tar.lambda = hitr::pipeline::rescale_tar_lambda(full.tar.lambda, 100, 20);

    for cfg in [PipelineConfig::lda_only(lda), full] {
        let result = run_pipeline(&corpus, &cfg)?;
        println!("{}: {:.2} topics per document", cfg.label(), sparsity(&result.final_doc_topic, 0.01));
        for rec in &result.stage_log {
            println!(
                "  {:<6} support {:>7.2} -> {:>7.2}, removed mass {:.3}",
                rec.stage, rec.mean_support_before, rec.mean_support_after, rec.removed_mass
            );
        }
    }
    Ok(())
}
