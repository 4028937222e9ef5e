//! Runs the seeded synthetic benchmark for the main pipeline variants and
//! prints AUC, sparsity, coherence, purity, NMI and topic-mass Gini.
//!
//!     cargo run --release --example evaluate_benchmark

use std::time::Instant;

use hitr::eval::benchmark::{Benchmark, BenchmarkConfig};

fn main() -> hitr::Result<()> {
    let started = Instant::now();
    let bench = Benchmark::prepare(BenchmarkConfig::default())?;
    println!(
        "{} training docs, {} terms, {} pseudo-docs",
        bench.corpus.docs().len(),
        bench.corpus.vocab().len(),
        bench.pseudo_docs.len()
    );

    let cfg = &bench.config;
    let variants = [
        cfg.variant(false, false, false),
        cfg.variant(false, false, true),
        cfg.variant(true, true, false),
        cfg.variant(true, true, true),
    ];
    println!("{:<16} {:>6} {:>8} {:>10} {:>7} {:>6} {:>13}", "variant", "auc", "sparsity", "coherence", "purity", "nmi", "gini");
    for v in &variants {
        let out = bench.run_variant(v)?;
        let r = &out.report;
        println!(
            "{:<16} {:>6.3} {:>8.3} {:>10.3} {:>7.3} {:>6.3} {:>6.3}->{:.3}",
            out.name,
            r.auc,
            r.sparsity,
            r.coherence,
            r.purity.unwrap_or(f64::NAN),
            r.nmi.unwrap_or(f64::NAN),
            out.gini_before_tar,
            out.gini_after_tar
        );
    }
    println!("elapsed {:.1}s", started.elapsed().as_secs_f64());
    Ok(())
}
