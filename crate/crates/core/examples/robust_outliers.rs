//! Corrupt a tenth of the feature rows with heavy-tailed noise, cluster with
//! each objective and show the correntropy row weights on corrupted and
//! clean rows.
//!
//! cargo run --release --example robust_outliers

use corrnmf::eval::KMeansConfig;
use corrnmf::experiment::{cluster_and_score, corrupt_rows, make_synthetic_corpus, SyntheticSpec};
use corrnmf::text::build_tfidf;
use corrnmf::{Objective, SolverConfig};

fn main() -> corrnmf::Result<()> {
    let corpus = make_synthetic_corpus(&SyntheticSpec::default())?;
    let (clean, _) = build_tfidf(&corpus)?;
    let (x, rows) = corrupt_rows(&clean, 0.1, 0.05, 3)?;
    let truth = corpus.label_indices();
    println!("{} of {} rows corrupted", rows.len(), x.nrows());

    for objective in Objective::ALL {
        let cfg = SolverConfig::default()
            .with_objective(objective)
            .with_seed(3);
        let run = cluster_and_score(&x, &truth, 3, &cfg, &KMeansConfig::default(), 3)?;
        println!("{objective:>3}: accuracy {:.3}", run.eval.accuracy);
        if let Some(state) = &run.fit.final_state {
            let weights = state.weights();
            let mean = |idx: &mut dyn Iterator<Item = usize>| {
                let v: Vec<f64> = idx.map(|d| weights[d]).collect();
                v.iter().sum::<f64>() / v.len() as f64
            };
            let corrupted = mean(&mut rows.iter().copied());
            let kept = mean(&mut (0..x.nrows()).filter(|d| rows.binary_search(d).is_err()));
            println!(
                "     mean row weight: corrupted {corrupted:.3}, clean {kept:.3}, sigma {:.3e}",
                state.sigma
            );
        }
    }
    Ok(())
}
