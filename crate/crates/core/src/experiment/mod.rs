//! Repeated random-topic clustering experiments.
//!
//! For every `k` and repetition a seed is derived from the master seed; `k`
//! topics are sampled, a tf-idf matrix is built from just those documents,
//! and every selected solver factorizes that same matrix from the same
//! initialization before K-means clusters the coefficient columns.

mod report;
mod synth;

use std::path::PathBuf;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use report::{emit_report, ReportFiles};
pub use synth::{corrupt_rows, make_synthetic_corpus, synthetic_term, SyntheticSpec};

use crate::error::{Error, Result};
use crate::eval::{evaluate, kmeans, EvalReport, KMeansConfig, LabelAssignment};
use crate::matrix::DataMatrix;
use crate::solver::{factorize, FitResult, Objective, SolverConfig};
use crate::text::{build_tfidf, filter_topics, load_corpus, Corpus, CorpusFormat};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub corpus_path: PathBuf,
    /// Inferred from the path when absent.
    #[serde(default)]
    pub corpus_format: Option<CorpusFormat>,
    pub k_values: Vec<usize>,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<Objective>,
    #[serde(default)]
    pub master_seed: u64,
    /// Solver settings; `objective` and `seed` are overridden per run.
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub kmeans: KMeansConfig,
    #[serde(default = "default_min_docs")]
    pub min_docs_per_topic: usize,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Record wall-clock seconds per run. When off the column is written as
    /// zero so reports are byte-for-byte reproducible.
    #[serde(default = "default_true")]
    pub record_timing: bool,
}

fn default_repetitions() -> usize {
    20
}

fn default_algorithms() -> Vec<Objective> {
    Objective::ALL.to_vec()
}

fn default_min_docs() -> usize {
    5
}

fn default_true() -> bool {
    true
}

impl ExperimentConfig {
    pub fn new(corpus_path: impl Into<PathBuf>, k_values: Vec<usize>) -> Self {
        ExperimentConfig {
            corpus_path: corpus_path.into(),
            corpus_format: None,
            k_values,
            repetitions: default_repetitions(),
            algorithms: default_algorithms(),
            master_seed: 0,
            solver: SolverConfig::default(),
            kmeans: KMeansConfig::default(),
            min_docs_per_topic: default_min_docs(),
            output_dir: None,
            record_timing: true,
        }
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::InvalidConfig(
                "repetitions must be at least 1".into(),
            ));
        }
        if self.k_values.is_empty() || self.k_values.contains(&0) {
            return Err(Error::InvalidConfig(
                "k_values must be non-empty and positive".into(),
            ));
        }
        if self.algorithms.is_empty() {
            return Err(Error::InvalidConfig("no algorithms selected".into()));
        }
        self.solver.validate()
    }
}

/// One (k, algorithm, repetition) result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub k: usize,
    pub algorithm: Objective,
    pub rep: usize,
    pub seed: u64,
    pub topics: Vec<String>,
    pub accuracy: f64,
    pub iterations: usize,
    pub converged: bool,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunFailure {
    pub k: usize,
    /// `None` when the failure happened before any solver ran.
    pub algorithm: Option<Objective>,
    pub rep: usize,
    pub message: String,
}

/// Mean accuracy per k (rows) and algorithm (columns).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AveragedTable {
    pub algorithms: Vec<Objective>,
    pub rows: Vec<AveragedRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AveragedRow {
    pub k: usize,
    /// `None` when every run of that algorithm failed.
    pub mean_accuracy: Vec<Option<f64>>,
    pub runs: Vec<usize>,
}

impl AveragedTable {
    pub fn from_records(
        records: &[RunRecord],
        k_values: &[usize],
        algorithms: &[Objective],
    ) -> Self {
        let rows = k_values
            .iter()
            .map(|&k| {
                let (means, runs) = algorithms
                    .iter()
                    .map(|&alg| {
                        let accs: Vec<f64> = records
                            .iter()
                            .filter(|r| r.k == k && r.algorithm == alg)
                            .map(|r| r.accuracy)
                            .collect();
                        let mean = (!accs.is_empty())
                            .then(|| accs.iter().sum::<f64>() / accs.len() as f64);
                        (mean, accs.len())
                    })
                    .unzip();
                AveragedRow {
                    k,
                    mean_accuracy: means,
                    runs,
                }
            })
            .collect();
        AveragedTable {
            algorithms: algorithms.to_vec(),
            rows,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    /// Sorted by (k, algorithm, repetition).
    pub records: Vec<RunRecord>,
    pub failures: Vec<RunFailure>,
    pub table: AveragedTable,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of repetition `rep` at `k`; depends only on the triple, so adding
/// k-values or repetitions leaves other runs untouched.
pub fn derive_seed(master: u64, k: usize, rep: usize) -> u64 {
    splitmix64(master ^ splitmix64(((k as u64) << 32) ^ rep as u64))
}

const KMEANS_STREAM: u64 = 0x6B6D_6561_6E73;

/// Uniformly random `k`-subset of the corpus topics; returns the documents
/// of those topics in their original order together with the topic names.
pub fn sample_topics(corpus: &Corpus, k: usize, seed: u64) -> Result<(Corpus, Vec<String>)> {
    let topics = corpus.topics();
    if k > topics.len() {
        return Err(Error::TooFewTopics {
            requested: k,
            available: topics.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = rand::seq::index::sample(&mut rng, topics.len(), k).into_vec();
    picked.sort_unstable();
    let chosen: Vec<String> = picked.into_iter().map(|i| topics[i].clone()).collect();
    Ok((corpus.restrict_to(&chosen), chosen))
}

/// Factorization plus clustering score for one matrix.
#[derive(Debug, Clone)]
pub struct ScoredRun {
    pub fit: FitResult,
    pub eval: EvalReport,
}

/// Factorizes `x` at rank `k`, clusters the columns of `W` into `k`
/// groups and scores them against `truth`.
pub fn cluster_and_score(
    x: &DataMatrix,
    truth: &[usize],
    k: usize,
    solver: &SolverConfig,
    kmeans_cfg: &KMeansConfig,
    kmeans_seed: u64,
) -> Result<ScoredRun> {
    let fit = factorize(x, k, solver)?;
    let km = kmeans(&fit.factors.w, k, kmeans_seed, kmeans_cfg)?;
    let eval = evaluate(&LabelAssignment::new(km.labels, truth.to_vec(), k)?)?;
    Ok(ScoredRun { fit, eval })
}

/// Runs every algorithm on the same corpus with the same seeds.
pub fn run_paired(
    corpus: &Corpus,
    k: usize,
    seed: u64,
    algorithms: &[Objective],
    solver: &SolverConfig,
    kmeans_cfg: &KMeansConfig,
) -> Result<Vec<(Objective, Result<ScoredRun>)>> {
    let (x, _) = build_tfidf(corpus)?;
    let truth = corpus.label_indices();
    Ok(algorithms
        .iter()
        .map(|&alg| {
            let cfg = solver.clone().with_objective(alg).with_seed(seed);
            let kseed = splitmix64(seed ^ KMEANS_STREAM);
            (
                alg,
                cluster_and_score(&x, &truth, k, &cfg, kmeans_cfg, kseed),
            )
        })
        .collect())
}

/// Loads the configured corpus and runs the experiment.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let format = cfg
        .corpus_format
        .unwrap_or_else(|| CorpusFormat::infer(&cfg.corpus_path));
    let corpus = load_corpus(&cfg.corpus_path, format)?;
    run_on_corpus(&corpus, cfg)
}

/// Runs the experiment on an already loaded corpus. Individual run failures
/// are collected rather than aborting the experiment.
pub fn run_on_corpus(corpus: &Corpus, cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let corpus = filter_topics(corpus, cfg.min_docs_per_topic)?;
    let available = corpus.topics().len();
    if let Some(&k) = cfg.k_values.iter().find(|&&k| k > available) {
        return Err(Error::TooFewTopics {
            requested: k,
            available,
        });
    }
    let jobs: Vec<(usize, usize)> = cfg
        .k_values
        .iter()
        .flat_map(|&k| (0..cfg.repetitions).map(move |rep| (k, rep)))
        .collect();
    let results: Vec<(Vec<RunRecord>, Vec<RunFailure>)> = jobs
        .par_iter()
        .map(|&(k, rep)| run_job(&corpus, cfg, k, rep))
        .collect();

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (r, f) in results {
        records.extend(r);
        failures.extend(f);
    }
    records.sort_by_key(|a| (a.k, a.algorithm, a.rep));
    failures.sort_by_key(|a| (a.k, a.algorithm, a.rep));
    let table = AveragedTable::from_records(&records, &cfg.k_values, &cfg.algorithms);
    Ok(ExperimentOutcome {
        records,
        failures,
        table,
    })
}

fn run_job(
    corpus: &Corpus,
    cfg: &ExperimentConfig,
    k: usize,
    rep: usize,
) -> (Vec<RunRecord>, Vec<RunFailure>) {
    let seed = derive_seed(cfg.master_seed, k, rep);
    let fail = |algorithm, e: Error| RunFailure {
        k,
        algorithm,
        rep,
        message: e.to_string(),
    };
    let (sub, topics) = match sample_topics(corpus, k, seed) {
        Ok(s) => s,
        Err(e) => return (Vec::new(), vec![fail(None, e)]),
    };
    let (x, _) = match build_tfidf(&sub) {
        Ok(m) => m,
        Err(e) => return (Vec::new(), vec![fail(None, e)]),
    };
    let truth = sub.label_indices();
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for &alg in &cfg.algorithms {
        let solver = cfg.solver.clone().with_objective(alg).with_seed(seed);
        let kseed = splitmix64(seed ^ KMEANS_STREAM);
        let start = Instant::now();
        match cluster_and_score(&x, &truth, k, &solver, &cfg.kmeans, kseed) {
            Ok(run) => records.push(RunRecord {
                k,
                algorithm: alg,
                rep,
                seed,
                topics: topics.clone(),
                accuracy: run.eval.accuracy,
                iterations: run.fit.iterations_run,
                converged: run.fit.converged,
                seconds: if cfg.record_timing {
                    start.elapsed().as_secs_f64()
                } else {
                    0.0
                },
            }),
            Err(e) => failures.push(fail(Some(alg), e)),
        }
    }
    (records, failures)
}
