//! K-means on 2-D points, then align clusters to topics with the
//! Kuhn-Munkres matching and report accuracy.
//!
//! cargo run --example cluster_eval

use corrnmf::eval::{evaluate, hungarian_match, kmeans, KMeansConfig, LabelAssignment};
use ndarray::Array2;

fn main() -> corrnmf::Result<()> {
    let centers = [(0.0, 0.0), (5.0, 0.0), (0.0, 5.0)];
    let points = Array2::from_shape_fn((2, 30), |(dim, n)| {
        let (cx, cy) = centers[n % 3];
        let jitter = ((n * 7 + dim * 3) % 10) as f64 / 10.0;
        if dim == 0 {
            cx + jitter
        } else {
            cy + jitter
        }
    });
    let truth: Vec<usize> = (0..30).map(|n| n % 3).collect();

    let km = kmeans(&points, 3, 11, &KMeansConfig::default())?;
    println!(
        "wcss {:.3} (restart {}), trace {:?}",
        km.wcss, km.restart, km.wcss_trace
    );

    let report = evaluate(&LabelAssignment::new(km.labels, truth, 3)?)?;
    println!(
        "accuracy {:.3}, cluster -> topic {:?}",
        report.accuracy, report.mapping
    );
    for row in &report.confusion {
        println!("  {row:?}");
    }

    let m = hungarian_match(&[vec![0, 10], vec![10, 0]])?;
    println!(
        "anti-diagonal: mapping {:?}, matched {}",
        m.mapping, m.total
    );
    Ok(())
}
