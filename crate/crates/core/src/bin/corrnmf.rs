use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use corrnmf::eval::{evaluate, LabelAssignment};
use corrnmf::experiment::{
    emit_report, make_synthetic_corpus, run_experiment, ExperimentConfig, SyntheticSpec,
};
use corrnmf::text::{build_tfidf, load_corpus, CorpusFormat};
use corrnmf::{factorize, DataMatrix, Error, Objective, Result, SolverConfig};

#[derive(Parser)]
#[command(
    name = "corrnmf",
    version,
    about = "Max-correntropy NMF and document clustering experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a repeated clustering experiment described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Report directory; overrides `output_dir` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Factorize one matrix snapshot or corpus (.jsonl or directory).
    Factorize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "mcc")]
        objective: Objective,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        max_iters: Option<usize>,
        /// Write H and W as matrix snapshots into this directory.
        #[arg(long)]
        dump_factors: Option<PathBuf>,
    },
    /// Generate a synthetic labeled corpus as JSON lines.
    Synth {
        #[arg(long)]
        topics: usize,
        /// Documents per topic.
        #[arg(long)]
        docs: usize,
        #[arg(long)]
        noise: f64,
        #[arg(long, default_value_t = 300)]
        vocab: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score predicted labels against the truth, one label per line.
    Eval {
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        truth: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run { config, out } => run(&config, out),
        Command::Factorize {
            input,
            k,
            objective,
            seed,
            max_iters,
            dump_factors,
        } => {
            let mut cfg = SolverConfig::default()
                .with_objective(objective)
                .with_seed(seed);
            if let Some(m) = max_iters {
                cfg.max_iters = m;
            }
            factorize_cmd(&input, k, &cfg, dump_factors.as_deref())
        }
        Command::Synth {
            topics,
            docs,
            noise,
            vocab,
            seed,
            out,
        } => synth(
            &SyntheticSpec {
                topics,
                docs_per_topic: docs,
                noise_level: noise,
                vocab_size: vocab,
                seed,
                ..SyntheticSpec::default()
            },
            out.as_deref(),
        ),
        Command::Eval { pred, truth } => eval(&pred, &truth),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(config: &Path, out: Option<PathBuf>) -> Result<ExitCode> {
    let cfg = ExperimentConfig::load(config)?;
    let outcome = run_experiment(&cfg)?;
    let dir = out
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("results"));
    let files = emit_report(&outcome, &cfg, &dir)?;

    let mut header = String::from("k");
    for a in &outcome.table.algorithms {
        header.push_str(&format!("\t{a}"));
    }
    println!("{header}");
    for row in &outcome.table.rows {
        let cells: Vec<String> = row
            .mean_accuracy
            .iter()
            .map(|m| m.map_or("-".to_string(), |v| format!("{v:.4}")))
            .collect();
        println!("{}\t{}", row.k, cells.join("\t"));
    }
    println!("wrote {}", files.runs_csv.display());

    if outcome.failures.is_empty() {
        return Ok(ExitCode::SUCCESS);
    }
    eprintln!("{} run(s) failed:", outcome.failures.len());
    for f in &outcome.failures {
        let alg = f.algorithm.map_or("-".to_string(), |a| a.to_string());
        eprintln!("  k={} rep={} {}: {}", f.k, f.rep, alg, f.message);
    }
    Ok(ExitCode::FAILURE)
}

fn load_input(input: &Path) -> Result<DataMatrix> {
    let is_corpus = input.is_dir() || input.extension().is_some_and(|e| e == "jsonl");
    if is_corpus {
        let corpus = load_corpus(input, CorpusFormat::infer(input))?;
        Ok(build_tfidf(&corpus)?.0)
    } else {
        DataMatrix::load_snapshot(input)
    }
}

fn factorize_cmd(
    input: &Path,
    k: usize,
    cfg: &SolverConfig,
    dump: Option<&Path>,
) -> Result<ExitCode> {
    let x = load_input(input)?;
    let fit = factorize(&x, k, cfg)?;
    println!("{}", fit.to_json()?);
    if let Some(dir) = dump {
        std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
        DataMatrix::from_dense(fit.factors.h.clone())?.save_snapshot(dir.join("H.txt"))?;
        DataMatrix::from_dense(fit.factors.w.clone())?.save_snapshot(dir.join("W.txt"))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn synth(spec: &SyntheticSpec, out: Option<&Path>) -> Result<ExitCode> {
    let corpus = make_synthetic_corpus(spec)?;
    match out {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(|e| io_error(path, e))?;
            let mut w = std::io::BufWriter::new(file);
            corpus.write_jsonl(&mut w)?;
            w.flush().map_err(|e| io_error(path, e))?;
        }
        None => corpus.write_jsonl(std::io::stdout().lock())?,
    }
    Ok(ExitCode::SUCCESS)
}

fn read_labels(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(String::from)
        .collect())
}

fn eval(pred: &Path, truth: &Path) -> Result<ExitCode> {
    let assignment = LabelAssignment::from_names(&read_labels(pred)?, &read_labels(truth)?)?;
    let report = evaluate(&assignment)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(ExitCode::SUCCESS)
}

fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}
