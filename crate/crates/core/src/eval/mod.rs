//! Clustering evaluation: K-means on the coefficient columns, Kuhn–Munkres
//! label alignment and matched accuracy.

mod hungarian;
mod kmeans;

use serde::{Deserialize, Serialize};

pub use hungarian::{hungarian_match, Matching};
pub use kmeans::{kmeans, KMeansConfig, KMeansResult};

use crate::error::{Error, Result};

/// Predicted cluster and true topic index for each of N documents, both in
/// `[0, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelAssignment {
    predicted: Vec<usize>,
    truth: Vec<usize>,
    k: usize,
}

impl LabelAssignment {
    pub fn new(predicted: Vec<usize>, truth: Vec<usize>, k: usize) -> Result<Self> {
        if predicted.len() != truth.len() {
            return Err(Error::LabelLengthMismatch {
                predicted: predicted.len(),
                truth: truth.len(),
            });
        }
        if let Some(&label) = predicted.iter().chain(&truth).find(|&&l| l >= k) {
            return Err(Error::LabelOutOfRange { label, k });
        }
        Ok(LabelAssignment {
            predicted,
            truth,
            k,
        })
    }

    /// Builds an assignment from arbitrary string labels. The class count is
    /// the larger of the two distinct-label counts.
    pub fn from_names<S: AsRef<str>>(predicted: &[S], truth: &[S]) -> Result<Self> {
        fn index<S: AsRef<str>>(labels: &[S]) -> (Vec<usize>, usize) {
            let mut names: Vec<&str> = labels.iter().map(AsRef::as_ref).collect();
            names.sort_unstable();
            names.dedup();
            let idx = labels
                .iter()
                .map(|l| names.binary_search(&l.as_ref()).expect("present"))
                .collect();
            (idx, names.len())
        }
        let (p, kp) = index(predicted);
        let (t, kt) = index(truth);
        Self::new(p, t, kp.max(kt).max(1))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.truth.len()
    }

    pub fn is_empty(&self) -> bool {
        self.truth.is_empty()
    }

    /// `confusion[cluster][topic]` counts.
    pub fn confusion(&self) -> Vec<Vec<u64>> {
        let mut m = vec![vec![0u64; self.k]; self.k];
        for (&p, &t) in self.predicted.iter().zip(&self.truth) {
            m[p][t] += 1;
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub accuracy: f64,
    /// `mapping[cluster] = topic`.
    pub mapping: Vec<usize>,
    pub confusion: Vec<Vec<u64>>,
}

/// Aligns clusters to topics with Kuhn–Munkres and scores the matched
/// fraction of documents.
pub fn evaluate(assignment: &LabelAssignment) -> Result<EvalReport> {
    let confusion = assignment.confusion();
    let m = hungarian_match(&confusion)?;
    let accuracy = if assignment.is_empty() {
        0.0
    } else {
        m.total as f64 / assignment.len() as f64
    };
    Ok(EvalReport {
        accuracy,
        mapping: m.mapping,
        confusion,
    })
}

pub fn accuracy(assignment: &LabelAssignment) -> Result<f64> {
    evaluate(assignment).map(|r| r.accuracy)
}
