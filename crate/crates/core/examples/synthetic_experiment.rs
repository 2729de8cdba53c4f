//! Planted-topic recovery on synthetic corpora, clean and with outlier rows.
//!
//! cargo run --release --example synthetic_experiment

use corrnmf::eval::{evaluate, kmeans, KMeansConfig, LabelAssignment};
use corrnmf::experiment::{cluster_and_score, corrupt_rows, make_synthetic_corpus, SyntheticSpec};
use corrnmf::text::build_tfidf;
use corrnmf::{Objective, SolverConfig};

fn main() -> corrnmf::Result<()> {
    let seeds = 20u64;
    for (noise, outliers) in [(0.0, 0.0), (0.1, 0.0), (0.1, 0.1)] {
        let mut totals = [0.0; 3];
        for seed in 0..seeds {
            let spec = SyntheticSpec {
                noise_level: noise,
                seed,
                ..SyntheticSpec::default()
            };
            let corpus = make_synthetic_corpus(&spec)?;
            let (mut x, _) = build_tfidf(&corpus)?;
            if outliers > 0.0 {
                x = corrupt_rows(&x, outliers, 1.0, seed)?.0;
            }
            let truth = corpus.label_indices();
            for (i, alg) in Objective::ALL.into_iter().enumerate() {
                let cfg = SolverConfig::default().with_objective(alg).with_seed(seed);
                let run = cluster_and_score(
                    &x,
                    &truth,
                    spec.topics,
                    &cfg,
                    &KMeansConfig::default(),
                    seed,
                )?;
                totals[i] += run.eval.accuracy;
            }
        }
        print!("noise {noise:.1} outliers {outliers:.1}:");
        for (alg, t) in Objective::ALL.iter().zip(totals) {
            print!("  {alg} {:.4}", t / seeds as f64);
        }
        println!();
    }

    // Clustering the raw tf-idf columns directly, for comparison.
    let corpus = make_synthetic_corpus(&SyntheticSpec::default())?;
    let (x, _) = build_tfidf(&corpus)?;
    let km = kmeans(&x.to_dense(), 3, 0, &KMeansConfig::default())?;
    let report = evaluate(&LabelAssignment::new(km.labels, corpus.label_indices(), 3)?)?;
    println!("k-means on tf-idf columns: {:.4}", report.accuracy);
    Ok(())
}
