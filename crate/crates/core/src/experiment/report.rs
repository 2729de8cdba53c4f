use std::path::{Path, PathBuf};

use super::{ExperimentConfig, ExperimentOutcome};
use crate::error::{Error, Result};

/// Paths written by [`emit_report`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportFiles {
    pub runs_csv: PathBuf,
    pub summary_csv: PathBuf,
    pub config_json: PathBuf,
    pub failures_csv: Option<PathBuf>,
}

/// Writes into `dir`:
///
/// * `runs.csv`: `k,algorithm,rep,accuracy,iters,seconds`, one row per run;
/// * `summary.csv`: one row per k, one mean-accuracy column per algorithm;
/// * `config.json`: the configuration echo;
/// * `failures.csv`, only when some run failed.
pub fn emit_report(
    outcome: &ExperimentOutcome,
    cfg: &ExperimentConfig,
    dir: impl AsRef<Path>,
) -> Result<ReportFiles> {
    if outcome.records.is_empty() && outcome.failures.is_empty() {
        return Err(Error::NoRecords);
    }
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let files = ReportFiles {
        runs_csv: dir.join("runs.csv"),
        summary_csv: dir.join("summary.csv"),
        config_json: dir.join("config.json"),
        failures_csv: (!outcome.failures.is_empty()).then(|| dir.join("failures.csv")),
    };

    let mut w = csv_writer(&files.runs_csv)?;
    w.write_record(["k", "algorithm", "rep", "accuracy", "iters", "seconds"])?;
    for r in &outcome.records {
        w.write_record([
            r.k.to_string(),
            r.algorithm.label().to_string(),
            r.rep.to_string(),
            r.accuracy.to_string(),
            r.iterations.to_string(),
            format!("{:.6}", r.seconds),
        ])?;
    }
    w.flush().map_err(|e| Error::io(&files.runs_csv, e))?;

    let mut w = csv_writer(&files.summary_csv)?;
    let mut header = vec!["k".to_string()];
    header.extend(
        outcome
            .table
            .algorithms
            .iter()
            .map(|a| a.label().to_string()),
    );
    w.write_record(&header)?;
    for row in &outcome.table.rows {
        let mut rec = vec![row.k.to_string()];
        rec.extend(
            row.mean_accuracy
                .iter()
                .map(|m| m.map(|v| v.to_string()).unwrap_or_default()),
        );
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io(&files.summary_csv, e))?;

    let json = serde_json::to_string_pretty(cfg)?;
    std::fs::write(&files.config_json, json + "\n")
        .map_err(|e| Error::io(&files.config_json, e))?;

    if let Some(path) = &files.failures_csv {
        let mut w = csv_writer(path)?;
        w.write_record(["k", "algorithm", "rep", "message"])?;
        for f in &outcome.failures {
            w.write_record([
                f.k.to_string(),
                f.algorithm
                    .map(|a| a.label().to_string())
                    .unwrap_or_default(),
                f.rep.to_string(),
                f.message.clone(),
            ])?;
        }
        w.flush().map_err(|e| Error::io(path, e))?;
    }
    Ok(files)
}

fn csv_writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}
