//! Hierarchical topic model re-estimation.
//!
//! The crate trains LDA on a document collection and sharpens it at three
//! levels with parsimonious language models: documents (DR), topics (TR) and
//! document-topic assignments (TAR). Topical diversity of documents is scored
//! with Rao's coefficient over angular topic distances, and the [`eval`]
//! module provides the synthetic diverse/non-diverse benchmark together with
//! AUC, sparsity, NPMI coherence, purity and NMI.
//!
//! Runnable examples live in `examples/`; the `hitr` binary exposes the same
//! pipeline as file-based subcommands.

pub mod cli;
pub mod config;
pub mod corpus;
pub mod diversity;
pub mod error;
pub mod eval;
pub mod io;
pub mod lda;
pub mod parsimony;
pub mod pipeline;
pub mod sparse;

pub use corpus::{build_corpus, collection_language_model, tokenize, Corpus, PreprocessConfig, RawDocument};
pub use diversity::{angular_distance, rao_diversity, score_corpus, DiversityScore, TopicDistanceMatrix};
pub use error::{Error, Result};
pub use lda::{infer_doc_topics, train, LdaConfig, TopicModel};
pub use parsimony::{em_step, initialize, parsimonize, EmConfig};
pub use pipeline::{run_pipeline, PipelineConfig, PipelineResult, StageConfig};
pub use sparse::{CountVector, SparseDistribution};
