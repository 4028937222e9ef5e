//! Synthetic benchmark construction and evaluation metrics.

pub mod benchmark;
pub mod metrics;
pub mod synth;

pub use metrics::{
    cluster_purity_nmi, gini, npmi_coherence, roc_auc, sparsity, topic_mass, EvalReport, Label, LabeledScore, Roc,
};
pub use synth::{generate_synthetic, PseudoDocument, SynthConfig, SyntheticBenchmark};
