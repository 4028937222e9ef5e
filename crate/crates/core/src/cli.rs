//! The `hitr` command line: file-based subcommands over the library.
//!
//! Each subcommand resolves its flags (over an optional `--config` file and
//! built-in defaults) into a serializable run description, executes it, and
//! writes a [`RunManifest`] next to its output. `hitr replay` re-executes a
//! run from a manifest.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::config::{load_stopwords, FileConfig};
use crate::corpus::{build_corpus, check_ids, Corpus, PreprocessConfig, RawDocument, Vocabulary};
use crate::diversity::{score_with, DiversityScore, TopicDistanceMatrix};
use crate::error::{Error, Result};
use crate::eval::metrics::{cluster_purity_nmi, npmi_coherence, roc_auc, sparsity, EvalReport, Label, LabeledScore};
use crate::eval::{generate_synthetic, SynthConfig};
use crate::io::{atomic_write, read_json, read_jsonl, write_json, write_jsonl, RunManifest};
use crate::lda::{self, LdaConfig, TopicModel};
use crate::pipeline::{run_pipeline, PipelineConfig, PipelineResult};

#[derive(Debug, Parser)]
#[command(name = "hitr", version, about = "Hierarchical topic model re-estimation toolkit")]
pub struct Cli {
    /// Worker threads for parallel stages (falls back to HITR_THREADS).
    #[arg(long, global = true, env = "HITR_THREADS")]
    pub threads: Option<usize>,

    /// Log progress to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate the synthetic training corpus and labelled pseudo-documents.
    GenCorpus(GenCorpusArgs),
    /// Preprocess a JSONL corpus and train LDA.
    Train(TrainArgs),
    /// Run the DR → LDA → TR → TAR pipeline.
    Hitr(HitrArgs),
    /// Score documents with Rao's diversity coefficient.
    Diversity(DiversityArgs),
    /// Compute AUC, sparsity, coherence, purity and NMI.
    Evaluate(EvaluateArgs),
    /// Print the top words of every topic, optionally next to a second model.
    InspectTopics(InspectArgs),
    /// Re-run a command from its manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct GenCorpusArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub groups: Option<usize>,
    #[arg(long)]
    pub docs_per_group: Option<usize>,
    #[arg(long)]
    pub vocab_size: Option<usize>,
    #[arg(long)]
    pub doc_length: Option<usize>,
    /// Number of diverse group pairs.
    #[arg(long)]
    pub pairs: Option<usize>,
    #[arg(long)]
    pub docs_per_pair: Option<usize>,
    #[arg(long)]
    pub nondiverse_per_group: Option<usize>,
    /// Relative spread of document lengths around the mean, in [0, 1).
    #[arg(long)]
    pub length_spread: Option<f64>,
    /// Chance that a theme token repeats an earlier one, in [0, 1).
    #[arg(long)]
    pub burstiness: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PreprocessArgs {
    /// Stopword list, one word per line (default: bundled English list).
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    /// Number of most frequent terms to drop.
    #[arg(long)]
    pub top_k_removed: Option<usize>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub min_frequency: Option<u64>,
    #[arg(long)]
    pub no_lowercase: bool,
}

#[derive(Debug, Args)]
pub struct LdaArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub topics: Option<u64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Gibbs sweeps.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub iterations: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Corpus in JSON Lines ({"id", "text", "label"}).
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub lda: LdaArgs,
    #[command(flatten)]
    pub preprocess: PreprocessArgs,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HitrArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub lda: LdaArgs,
    #[command(flatten)]
    pub preprocess: PreprocessArgs,
    #[arg(long, overrides_with = "no_dr")]
    pub dr: bool,
    #[arg(long)]
    pub no_dr: bool,
    #[arg(long, overrides_with = "no_tr")]
    pub tr: bool,
    #[arg(long)]
    pub no_tr: bool,
    #[arg(long, overrides_with = "no_tar")]
    pub tar: bool,
    #[arg(long)]
    pub no_tar: bool,
    #[arg(long)]
    pub lambda_dr: Option<f64>,
    #[arg(long)]
    pub lambda_tr: Option<f64>,
    #[arg(long)]
    pub lambda_tar: Option<f64>,
    /// Pruning threshold for every stage.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Gibbs sweeps when assigning topics with a fixed model.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub infer_iterations: Option<u64>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DiversityArgs {
    /// Output of `hitr hitr`.
    #[arg(long)]
    pub result: PathBuf,
    /// Documents to score (JSONL); defaults to the training documents.
    #[arg(long)]
    pub docs: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write `id,diversity` CSV here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Diversity scores (JSONL from `hitr diversity`).
    #[arg(long)]
    pub scores: PathBuf,
    /// Documents carrying "diverse" / "non-diverse" labels (JSONL).
    #[arg(long)]
    pub labels: PathBuf,
    /// Pipeline result for sparsity, coherence and purity.
    #[arg(long)]
    pub result: PathBuf,
    /// Training corpus (JSONL): coherence reference and class labels.
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub roc_csv: Option<PathBuf>,
    /// Sparsity threshold.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Words per topic for coherence.
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    pub top_n: Option<u64>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    /// Model or pipeline result file.
    #[arg(long)]
    pub model: PathBuf,
    /// Second model printed alongside, e.g. the result after TR.
    #[arg(long)]
    pub compare: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    pub top_n: usize,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
}

/// Resolved `gen-corpus` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenCorpusRun {
    pub out: PathBuf,
    pub synth: SynthConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainRun {
    pub input: PathBuf,
    pub out: PathBuf,
    pub preprocess: PreprocessConfig,
    pub lda: LdaConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HitrRun {
    pub input: PathBuf,
    pub out: PathBuf,
    pub preprocess: PreprocessConfig,
    pub pipeline: PipelineConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiversityRun {
    pub result: PathBuf,
    pub docs: Option<PathBuf>,
    pub out: PathBuf,
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluateRun {
    pub scores: PathBuf,
    pub labels: PathBuf,
    pub result: PathBuf,
    pub corpus: PathBuf,
    pub out: PathBuf,
    pub roc_csv: Option<PathBuf>,
    pub tau: f64,
    pub top_n: usize,
}

/// Model file written by `train`: the topic model plus what is needed to read it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    #[serde(flatten)]
    pub model: TopicModel,
    pub vocab: Vocabulary,
    pub doc_ids: Vec<String>,
    pub preprocess: PreprocessConfig,
}

/// Result file written by `hitr`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    #[serde(flatten)]
    pub result: PipelineResult,
    pub vocab: Vocabulary,
    pub preprocess: PreprocessConfig,
}

fn preprocess_config(args: &PreprocessArgs, file: &FileConfig) -> Result<PreprocessConfig> {
    let mut cfg = PreprocessConfig::default();
    file.preprocess.apply(&mut cfg)?;
    if let Some(path) = &args.stopwords {
        cfg.stopwords = load_stopwords(path).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    }
    if let Some(v) = args.top_k_removed {
        cfg.top_k_frequent_removed = v;
    }
    if let Some(v) = args.min_frequency {
        cfg.min_collection_frequency = v;
    }
    if args.no_lowercase {
        cfg.lowercase = false;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn apply_lda_args(args: &LdaArgs, lda: &mut LdaConfig) {
    if let Some(t) = args.topics {
        lda.num_topics = t as usize;
        lda.alpha = 1.0 / t as f64;
    }
    if let Some(v) = args.alpha {
        lda.alpha = v;
    }
    if let Some(v) = args.beta {
        lda.beta = v;
    }
    if let Some(v) = args.iterations {
        lda.gibbs_iterations = v as usize;
    }
    if let Some(v) = args.seed {
        lda.seed = v;
    }
}

fn toggle(on: bool, off: bool, current: bool) -> bool {
    if off {
        false
    } else if on {
        true
    } else {
        current
    }
}

impl GenCorpusArgs {
    pub fn resolve(&self) -> Result<GenCorpusRun> {
        let file = FileConfig::load_optional(self.config.as_deref())?;
        let mut synth = SynthConfig::default();
        file.synth.apply(&mut synth);
        macro_rules! set {
            ($($field:ident => $target:ident),*) => {
                $(if let Some(v) = self.$field { synth.$target = v; })*
            };
        }
        set!(groups => num_groups, docs_per_group => docs_per_group, vocab_size => vocab_size,
             doc_length => doc_length, pairs => num_diverse_pairs, docs_per_pair => diverse_docs_per_pair,
             nondiverse_per_group => nondiverse_docs_per_group, length_spread => length_spread,
             burstiness => burstiness, seed => seed);
        Ok(GenCorpusRun {
            out: self.out.clone(),
            synth,
        })
    }
}

impl TrainArgs {
    pub fn resolve(&self) -> Result<TrainRun> {
        let file = FileConfig::load_optional(self.config.as_deref())?;
        let mut lda = LdaConfig::default();
        file.lda.apply(&mut lda);
        apply_lda_args(&self.lda, &mut lda);
        lda.validate()?;
        Ok(TrainRun {
            input: self.input.clone(),
            out: self.out.clone(),
            preprocess: preprocess_config(&self.preprocess, &file)?,
            lda,
        })
    }
}

impl HitrArgs {
    pub fn resolve(&self) -> Result<HitrRun> {
        let file = FileConfig::load_optional(self.config.as_deref())?;
        let mut pipeline = file.pipeline();
        apply_lda_args(&self.lda, &mut pipeline.lda);
        pipeline.dr.enabled = toggle(self.dr, self.no_dr, pipeline.dr.enabled);
        pipeline.tr.enabled = toggle(self.tr, self.no_tr, pipeline.tr.enabled);
        pipeline.tar.enabled = toggle(self.tar, self.no_tar, pipeline.tar.enabled);
        for (flag, stage) in [
            (self.lambda_dr, &mut pipeline.dr),
            (self.lambda_tr, &mut pipeline.tr),
            (self.lambda_tar, &mut pipeline.tar),
        ] {
            if let Some(l) = flag {
                stage.lambda = l;
            }
            if let Some(t) = self.threshold {
                stage.prune_threshold = t;
            }
        }
        if let Some(v) = self.infer_iterations {
            pipeline.infer_iterations = v as usize;
        }
        pipeline.validate()?;
        Ok(HitrRun {
            input: self.input.clone(),
            out: self.out.clone(),
            preprocess: preprocess_config(&self.preprocess, &file)?,
            pipeline,
        })
    }
}

impl DiversityArgs {
    pub fn resolve(&self) -> DiversityRun {
        DiversityRun {
            result: self.result.clone(),
            docs: self.docs.clone(),
            out: self.out.clone(),
            csv: self.csv.clone(),
        }
    }
}

impl EvaluateArgs {
    pub fn resolve(&self) -> Result<EvaluateRun> {
        let file = FileConfig::load_optional(self.config.as_deref())?;
        let tau = self.tau.or(file.eval.tau).unwrap_or(0.01);
        let top_n = self.top_n.map(|v| v as usize).or(file.eval.top_n).unwrap_or(10);
        if !(0.0..=1.0).contains(&tau) {
            return Err(Error::InvalidConfig(format!("tau {tau} not in [0, 1]")));
        }
        if top_n < 2 {
            return Err(Error::InvalidConfig("top_n must be at least 2".into()));
        }
        Ok(EvaluateRun {
            scores: self.scores.clone(),
            labels: self.labels.clone(),
            result: self.result.clone(),
            corpus: self.corpus.clone(),
            out: self.out.clone(),
            roc_csv: self.roc_csv.clone(),
            tau,
            top_n,
        })
    }
}

fn read_documents(path: &Path) -> Result<Vec<RawDocument>> {
    let docs: Vec<RawDocument> = read_jsonl(path)?;
    check_ids(&docs)?;
    Ok(docs)
}

fn manifest(command: &str, snapshot: &impl Serialize, seed: u64, inputs: Vec<PathBuf>, outputs: Vec<PathBuf>, started: Instant) -> Result<RunManifest> {
    Ok(RunManifest {
        command: command.into(),
        config_snapshot: serde_json::to_value(snapshot).map_err(|e| Error::json("manifest", e))?,
        seed,
        inputs,
        outputs,
        toolkit_version: env!("CARGO_PKG_VERSION").into(),
        wall_time_seconds: started.elapsed().as_secs_f64(),
    })
}

impl GenCorpusRun {
    pub fn execute(&self) -> Result<RunManifest> {
        let started = Instant::now();
        let bench = generate_synthetic(&self.synth)?;
        let train = self.out.join("train.jsonl");
        let pseudo = self.out.join("pseudo.jsonl");
        write_jsonl(&train, &bench.training_documents())?;
        write_jsonl(&pseudo, &bench.pseudo_documents())?;
        let m = manifest("gen-corpus", self, self.synth.seed, vec![], vec![train, pseudo], started)?;
        m.write(&RunManifest::path_for(&self.out, true))?;
        Ok(m)
    }
}

impl TrainRun {
    pub fn execute(&self) -> Result<RunManifest> {
        let started = Instant::now();
        let docs = read_documents(&self.input)?;
        let corpus = build_corpus(&docs, &self.preprocess)?;
        let model = lda::train(&corpus, &self.lda)?;
        let file = ModelFile {
            model,
            vocab: corpus.vocab().clone(),
            doc_ids: corpus.docs().iter().map(|d| d.id.clone()).collect(),
            preprocess: self.preprocess.clone(),
        };
        write_json(&self.out, &file)?;
        let m = manifest("train", self, self.lda.seed, vec![self.input.clone()], vec![self.out.clone()], started)?;
        m.write(&RunManifest::path_for(&self.out, false))?;
        Ok(m)
    }
}

impl HitrRun {
    pub fn execute(&self) -> Result<RunManifest> {
        let started = Instant::now();
        let docs = read_documents(&self.input)?;
        let corpus = build_corpus(&docs, &self.preprocess)?;
        let result = run_pipeline(&corpus, &self.pipeline)?;
        for rec in &result.stage_log {
            log::info!(
                "{}: removed mass {:.4}, support {:.2} -> {:.2}",
                rec.stage,
                rec.removed_mass,
                rec.mean_support_before,
                rec.mean_support_after
            );
        }
        let file = ResultFile {
            vocab: corpus.vocab().clone(),
            result,
            preprocess: self.preprocess.clone(),
        };
        write_json(&self.out, &file)?;
        let m = manifest("hitr", self, self.pipeline.lda.seed, vec![self.input.clone()], vec![self.out.clone()], started)?;
        m.write(&RunManifest::path_for(&self.out, false))?;
        Ok(m)
    }
}

fn load_result(path: &Path) -> Result<ResultFile> {
    let file: ResultFile = read_json(path)?;
    file.result.validate()?;
    if file.vocab.len() != file.result.model.vocab_size {
        return Err(Error::ShapeMismatch(format!(
            "result vocabulary has {} terms, model has {}",
            file.vocab.len(),
            file.result.model.vocab_size
        )));
    }
    Ok(file)
}

impl DiversityRun {
    pub fn execute(&self) -> Result<RunManifest> {
        let started = Instant::now();
        let file = load_result(&self.result)?;
        let result = &file.result;
        let delta = TopicDistanceMatrix::from_doc_topic(&result.final_doc_topic)?;
        let mut inputs = vec![self.result.clone()];
        let scores: Vec<DiversityScore> = match &self.docs {
            Some(path) => {
                let raw = read_documents(path)?;
                inputs.push(path.clone());
                let projected = result.reestimated_corpus.project(&raw, file.preprocess.lowercase);
                let rows = result.transform(&projected)?;
                let ids: Vec<String> = raw.iter().map(|d| d.id.clone()).collect();
                score_with(&delta, &rows, &ids)?
            }
            None => score_with(&delta, &result.final_doc_topic, &result.doc_ids)?,
        };
        write_jsonl(&self.out, &scores)?;
        let mut outputs = vec![self.out.clone()];
        if let Some(csv) = &self.csv {
            let mut text = String::from("id,diversity\n");
            for s in &scores {
                text.push_str(&format!("{},{}\n", s.doc_id, s.score));
            }
            atomic_write(csv, text.as_bytes())?;
            outputs.push(csv.clone());
        }
        let m = manifest("diversity", self, result.config.lda.seed, inputs, outputs, started)?;
        m.write(&RunManifest::path_for(&self.out, false))?;
        Ok(m)
    }
}

impl EvaluateRun {
    pub fn execute(&self) -> Result<RunManifest> {
        let started = Instant::now();
        let scores: Vec<DiversityScore> = read_jsonl(&self.scores)?;
        let labelled = read_documents(&self.labels)?;
        let labels: std::collections::HashMap<&str, Label> = labelled
            .iter()
            .map(|d| {
                let l = d
                    .label
                    .as_deref()
                    .ok_or_else(|| Error::InvalidData(format!("document {} has no label", d.id)))?;
                Ok((d.id.as_str(), Label::parse(l)?))
            })
            .collect::<Result<_>>()?;
        let labeled: Vec<LabeledScore> = scores
            .iter()
            .map(|s| {
                let label = *labels
                    .get(s.doc_id.as_str())
                    .ok_or_else(|| Error::InvalidData(format!("no label for scored document {}", s.doc_id)))?;
                Ok(LabeledScore {
                    id: s.doc_id.clone(),
                    score: s.score,
                    label,
                })
            })
            .collect::<Result<_>>()?;
        let roc = roc_auc(&labeled)?;

        let file = load_result(&self.result)?;
        let result = &file.result;
        let reference: Corpus = build_corpus(&read_documents(&self.corpus)?, &file.preprocess)?;
        if reference.vocab() != &file.vocab {
            return Err(Error::ShapeMismatch("reference corpus vocabulary differs from the result's".into()));
        }
        let (purity, nmi) = if reference.docs().iter().all(|d| d.label.is_some()) {
            let classes: Vec<String> = reference.docs().iter().map(|d| d.label.clone().unwrap_or_default()).collect();
            let (p, n) = cluster_purity_nmi(&result.final_doc_topic, &classes)?;
            (Some(p), Some(n))
        } else {
            (None, None)
        };
        let report = EvalReport {
            auc: roc.auc,
            roc: roc.points.clone(),
            sparsity: sparsity(&result.final_doc_topic, self.tau),
            coherence: npmi_coherence(&result.model, &reference, self.top_n)?,
            purity,
            nmi,
        };
        write_json(&self.out, &report)?;
        let mut outputs = vec![self.out.clone()];
        if let Some(path) = &self.roc_csv {
            atomic_write(path, roc.to_csv().as_bytes())?;
            outputs.push(path.clone());
        }
        let inputs = vec![self.scores.clone(), self.labels.clone(), self.result.clone(), self.corpus.clone()];
        let m = manifest("evaluate", self, result.config.lda.seed, inputs, outputs, started)?;
        m.write(&RunManifest::path_for(&self.out, false))?;
        Ok(m)
    }
}

/// Topic rows and vocabulary from either a model file or a result file.
#[derive(Deserialize)]
struct TopicsView {
    topic_word: Vec<crate::sparse::SparseDistribution>,
    vocab: Vocabulary,
}

fn topic_lines(view: &TopicsView, top_n: usize) -> Vec<String> {
    view.topic_word
        .iter()
        .map(|row| {
            row.top_n(top_n)
                .into_iter()
                .map(|(w, _)| view.vocab.term(w).to_string())
                .collect::<Vec<_>>()
                .join(", ")
        })
        .collect()
}

fn inspect(args: &InspectArgs) -> Result<String> {
    let first: TopicsView = read_json(&args.model)?;
    let mut out = String::new();
    let lines = topic_lines(&first, args.top_n);
    match &args.compare {
        None => {
            for (t, l) in lines.iter().enumerate() {
                out.push_str(&format!("{t}\t{l}\n"));
            }
        }
        Some(path) => {
            let second: TopicsView = read_json(path)?;
            if second.topic_word.len() != first.topic_word.len() {
                return Err(Error::ShapeMismatch("models have different topic counts".into()));
            }
            let other = topic_lines(&second, args.top_n);
            for (t, (a, b)) in lines.iter().zip(&other).enumerate() {
                out.push_str(&format!("{t}\tbefore: {a}\n{t}\tafter:  {b}\n"));
            }
        }
    }
    Ok(out)
}

fn replay(path: &Path) -> Result<RunManifest> {
    let m: RunManifest = read_json(path)?;
    let snapshot = m.config_snapshot;
    let bad = |e: serde_json::Error| Error::json(format!("{} config_snapshot", path.display()), e);
    match m.command.as_str() {
        "gen-corpus" => serde_json::from_value::<GenCorpusRun>(snapshot).map_err(bad)?.execute(),
        "train" => serde_json::from_value::<TrainRun>(snapshot).map_err(bad)?.execute(),
        "hitr" => serde_json::from_value::<HitrRun>(snapshot).map_err(bad)?.execute(),
        "diversity" => serde_json::from_value::<DiversityRun>(snapshot).map_err(bad)?.execute(),
        "evaluate" => serde_json::from_value::<EvaluateRun>(snapshot).map_err(bad)?.execute(),
        other => Err(Error::InvalidConfig(format!("manifest names unknown command {other:?}"))),
    }
}

/// Runs a parsed command line; printed output goes to stdout.
pub fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::InvalidConfig("--threads must be positive".into()));
        }
        // Fails only when a pool already exists, which is fine to ignore.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match cli.command {
        Command::GenCorpus(a) => a.resolve()?.execute().map(drop),
        Command::Train(a) => a.resolve()?.execute().map(drop),
        Command::Hitr(a) => a.resolve()?.execute().map(drop),
        Command::Diversity(a) => a.resolve().execute().map(drop),
        Command::Evaluate(a) => {
            let run = a.resolve()?;
            run.execute()?;
            let report: EvalReport = read_json(&run.out)?;
            println!(
                "auc={:.4} sparsity={:.3} coherence={:.3} purity={} nmi={}",
                report.auc,
                report.sparsity,
                report.coherence,
                report.purity.map_or("-".into(), |v| format!("{v:.3}")),
                report.nmi.map_or("-".into(), |v| format!("{v:.3}"))
            );
            Ok(())
        }
        Command::InspectTopics(a) => {
            print!("{}", inspect(&a)?);
            Ok(())
        }
        Command::Replay(a) => replay(&a.manifest).map(drop),
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with_args(args: impl IntoIterator<Item = std::ffi::OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("INVALID_ARGUMENT: {}", first.trim_start_matches("error: "));
            return 2;
        }
    };
    let level = if cli.verbose { "info" } else { "warn" };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            let line = e.to_string().replace('\n', " ");
            eprintln!("{}: {line}", e.code());
            e.class().exit_code()
        }
    }
}
