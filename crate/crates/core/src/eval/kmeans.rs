//! Lloyd's K-means with k-means++ seeding and best-of-restarts selection.

use ndarray::{Array2, ArrayView1};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KMeansConfig {
    pub restarts: usize,
    pub max_iters: usize,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        KMeansConfig {
            restarts: 10,
            max_iters: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    pub labels: Vec<usize>,
    /// One centroid per row.
    pub centroids: Array2<f64>,
    /// Within-cluster sum of squares.
    pub wcss: f64,
    /// WCSS after each Lloyd iteration of the winning restart.
    pub wcss_trace: Vec<f64>,
    pub restart: usize,
}

fn sq_dist(a: ArrayView1<f64>, b: ArrayView1<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Clusters the columns of `points` (dim × N) into `k` groups.
///
/// Each restart draws its own k-means++ seeding from `seed`; the restart
/// with the lowest WCSS wins, ties going to the lower restart index.
/// Nearest-centroid ties go to the lowest centroid index.
pub fn kmeans(
    points: &Array2<f64>,
    k: usize,
    seed: u64,
    cfg: &KMeansConfig,
) -> Result<KMeansResult> {
    let n = points.ncols();
    if k == 0 {
        return Err(Error::InvalidConfig("k-means needs k >= 1".into()));
    }
    if k > n {
        return Err(Error::TooManyClusters { k, points: n });
    }
    if cfg.restarts == 0 || cfg.max_iters == 0 {
        return Err(Error::InvalidConfig(
            "k-means restarts and max_iters must be at least 1".into(),
        ));
    }
    if points.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidConfig(
            "k-means input has non-finite values".into(),
        ));
    }
    let data: Array2<f64> = points.t().to_owned();
    let runs: Vec<KMeansResult> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            let init = plus_plus(&data, k, &mut rng);
            let mut run = lloyd(&data, init, cfg.max_iters);
            run.restart = r;
            run
        })
        .collect();
    Ok(runs
        .into_iter()
        .min_by(|a, b| a.wcss.total_cmp(&b.wcss).then(a.restart.cmp(&b.restart)))
        .expect("at least one restart"))
}

fn plus_plus(data: &Array2<f64>, k: usize, rng: &mut ChaCha8Rng) -> Array2<f64> {
    let n = data.nrows();
    let mut centroids = Array2::zeros((k, data.ncols()));
    let first = rng.gen_range(0..n);
    centroids.row_mut(0).assign(&data.row(first));
    let mut d2: Vec<f64> = (0..n)
        .map(|i| sq_dist(data.row(i), data.row(first)))
        .collect();
    for c in 1..k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.gen::<f64>() * total;
            let mut chosen = None;
            for (i, &w) in d2.iter().enumerate() {
                if w > 0.0 {
                    chosen = Some(i);
                    if target < w {
                        break;
                    }
                    target -= w;
                }
            }
            chosen.expect("positive total weight")
        } else {
            rng.gen_range(0..n)
        };
        centroids.row_mut(c).assign(&data.row(pick));
        for (i, d) in d2.iter_mut().enumerate() {
            *d = d.min(sq_dist(data.row(i), data.row(pick)));
        }
    }
    centroids
}

fn assign(data: &Array2<f64>, centroids: &Array2<f64>) -> Vec<usize> {
    data.rows()
        .into_iter()
        .map(|p| {
            let mut best = (0, f64::INFINITY);
            for (c, centroid) in centroids.rows().into_iter().enumerate() {
                let d = sq_dist(p, centroid);
                if d < best.1 {
                    best = (c, d);
                }
            }
            best.0
        })
        .collect()
}

fn means(data: &Array2<f64>, labels: &[usize], k: usize) -> (Array2<f64>, Vec<usize>) {
    let mut sums = Array2::zeros((k, data.ncols()));
    let mut counts = vec![0usize; k];
    for (p, &l) in data.rows().into_iter().zip(labels) {
        let mut row = sums.row_mut(l);
        row += &p;
        counts[l] += 1;
    }
    for (mut row, &c) in sums.rows_mut().into_iter().zip(&counts) {
        if c > 0 {
            row.mapv_inplace(|v| v / c as f64);
        }
    }
    (sums, counts)
}

/// Moves the point farthest from its centroid into each empty cluster.
fn repair_empty(data: &Array2<f64>, labels: &mut [usize], k: usize) -> Array2<f64> {
    loop {
        let (centroids, counts) = means(data, labels, k);
        let Some(empty) = counts.iter().position(|&c| c == 0) else {
            return centroids;
        };
        let mut far = None;
        let mut far_d = -1.0;
        for (i, p) in data.rows().into_iter().enumerate() {
            if counts[labels[i]] < 2 {
                continue;
            }
            let d = sq_dist(p, centroids.row(labels[i]));
            if d > far_d {
                far_d = d;
                far = Some(i);
            }
        }
        // k <= N guarantees some cluster has two or more members
        labels[far.expect("a cluster with spare points")] = empty;
    }
}

fn wcss(data: &Array2<f64>, labels: &[usize], centroids: &Array2<f64>) -> f64 {
    data.rows()
        .into_iter()
        .zip(labels)
        .map(|(p, &l)| sq_dist(p, centroids.row(l)))
        .sum()
}

fn lloyd(data: &Array2<f64>, init: Array2<f64>, max_iters: usize) -> KMeansResult {
    let k = init.nrows();
    let mut labels = assign(data, &init);
    let mut centroids = repair_empty(data, &mut labels, k);
    let mut trace = vec![wcss(data, &labels, &centroids)];
    for _ in 1..max_iters {
        let mut next = assign(data, &centroids);
        if next == labels {
            break;
        }
        let c = repair_empty(data, &mut next, k);
        let cost = wcss(data, &next, &c);
        // a repair can undo a tie-broken reassignment; stop once nothing improves
        if cost >= trace[trace.len() - 1] {
            break;
        }
        labels = next;
        centroids = c;
        trace.push(cost);
    }
    KMeansResult {
        wcss: trace[trace.len() - 1],
        labels,
        centroids,
        wcss_trace: trace,
        restart: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn recovers_separated_groups() {
        let pts = array![
            [0.0, 0.1, 0.2, 5.0, 5.1, 5.2],
            [0.0, 0.2, 0.1, 5.0, 4.9, 5.1]
        ];
        let r = kmeans(&pts, 2, 1, &KMeansConfig::default()).unwrap();
        assert_eq!(r.labels[0], r.labels[1]);
        assert_eq!(r.labels[0], r.labels[2]);
        assert_eq!(r.labels[3], r.labels[4]);
        assert_eq!(r.labels[3], r.labels[5]);
        assert_ne!(r.labels[0], r.labels[3]);
    }

    #[test]
    fn k_equals_n_gives_zero_wcss() {
        let pts = array![[0.0, 1.0, 2.0, 3.5], [1.0, 0.0, 2.0, 0.5]];
        let r = kmeans(&pts, 4, 3, &KMeansConfig::default()).unwrap();
        assert_eq!(r.wcss, 0.0);
        let mut l = r.labels.clone();
        l.sort();
        assert_eq!(l, [0, 1, 2, 3]);
    }

    #[test]
    fn duplicate_points_still_fill_every_cluster() {
        let pts = array![[1.0, 1.0, 1.0, 2.0]];
        let r = kmeans(&pts, 3, 0, &KMeansConfig::default()).unwrap();
        let mut seen = r.labels.clone();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 3);
    }

    #[test]
    fn errors() {
        let pts = array![[1.0, 2.0]];
        assert!(matches!(
            kmeans(&pts, 3, 0, &KMeansConfig::default()),
            Err(Error::TooManyClusters { k: 3, points: 2 })
        ));
        assert!(kmeans(&array![[1.0, f64::NAN]], 1, 0, &KMeansConfig::default()).is_err());
    }
}
