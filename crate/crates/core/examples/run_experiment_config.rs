//! Run the repeated random-topic experiment from a JSON config and write
//! the CSV reports. Without arguments a synthetic corpus and a small config
//! are generated in a temporary directory.
//!
//! cargo run --release --example run_experiment_config [config.json]

use corrnmf::experiment::{
    emit_report, make_synthetic_corpus, run_experiment, ExperimentConfig, SyntheticSpec,
};

fn main() -> corrnmf::Result<()> {
    let cfg = match std::env::args().nth(1) {
        Some(path) => ExperimentConfig::load(path)?,
        None => demo_config()?,
    };
    let out = run_experiment(&cfg)?;
    let dir = cfg
        .output_dir
        .clone()
        .unwrap_or_else(|| std::env::temp_dir().join("corrnmf-results"));
    let files = emit_report(&out, &cfg, &dir)?;

    for row in &out.table.rows {
        let cells: Vec<String> = out
            .table
            .algorithms
            .iter()
            .zip(&row.mean_accuracy)
            .map(|(a, m)| format!("{a} {}", m.map_or("-".into(), |v| format!("{v:.3}"))))
            .collect();
        println!("k={:<3} {}", row.k, cells.join("  "));
    }
    for f in &out.failures {
        eprintln!("failed: k={} rep={} {}", f.k, f.rep, f.message);
    }
    println!(
        "reports in {}",
        files.runs_csv.parent().unwrap_or(&dir).display()
    );
    Ok(())
}

fn demo_config() -> corrnmf::Result<ExperimentConfig> {
    let dir = std::env::temp_dir().join("corrnmf-demo");
    std::fs::create_dir_all(&dir).map_err(|e| corrnmf::Error::Io {
        path: dir.clone(),
        source: e,
    })?;
    let corpus = make_synthetic_corpus(&SyntheticSpec {
        topics: 6,
        docs_per_topic: 20,
        noise_level: 0.3,
        ..SyntheticSpec::default()
    })?;
    let path = dir.join("corpus.jsonl");
    let mut buf = Vec::new();
    corpus.write_jsonl(&mut buf)?;
    std::fs::write(&path, buf).map_err(|e| corrnmf::Error::Io {
        path: path.clone(),
        source: e,
    })?;
    Ok(ExperimentConfig {
        repetitions: 5,
        output_dir: Some(dir.join("results")),
        ..ExperimentConfig::new(path, vec![2, 3, 4, 6])
    })
}
