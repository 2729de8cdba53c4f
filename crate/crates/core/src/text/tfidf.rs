use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use super::{preprocess, Corpus};
use crate::error::{Error, Result};
use crate::matrix::{CscBuilder, DataMatrix};

/// Sorted, unique terms with their document frequencies. Term `i` is row
/// `i` of the tf-idf matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    pub terms: Vec<String>,
    pub doc_freq: Vec<usize>,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.terms.binary_search_by(|t| t.as_str().cmp(term)).ok()
    }

    /// One term per line, in row order.
    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for t in &self.terms {
            writeln!(out, "{t}")?;
        }
        out.flush()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write(std::io::BufWriter::new(file))
            .map_err(|e| Error::io(path, e))
    }
}

/// Term-document tf-idf matrix: raw counts times `ln(N / df)`, each
/// document column scaled to unit L2 norm (all-zero columns stay zero).
pub fn build_tfidf(corpus: &Corpus) -> Result<(DataMatrix, Vocabulary)> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let counts: Vec<BTreeMap<String, usize>> = corpus
        .documents()
        .par_iter()
        .map(|d| {
            let mut tf = BTreeMap::new();
            for t in preprocess(&d.text) {
                *tf.entry(t).or_insert(0) += 1;
            }
            tf
        })
        .collect();

    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for tf in &counts {
        for term in tf.keys() {
            *df.entry(term.as_str()).or_insert(0) += 1;
        }
    }
    if df.is_empty() {
        return Err(Error::NoTokens);
    }
    let vocab = Vocabulary {
        terms: df.keys().map(|t| t.to_string()).collect(),
        doc_freq: df.values().copied().collect(),
    };

    let n_docs = corpus.len() as f64;
    let idf: Vec<f64> = vocab
        .doc_freq
        .iter()
        .map(|&d| (n_docs / d as f64).ln())
        .collect();
    let mut builder = CscBuilder::new(vocab.len());
    for tf in &counts {
        let mut column: Vec<(usize, f64)> = tf
            .iter()
            .map(|(term, &c)| {
                let row = vocab.index_of(term).expect("term in vocabulary");
                (row, c as f64 * idf[row])
            })
            .filter(|&(_, v)| v > 0.0)
            .collect();
        let norm = column.iter().map(|(_, v)| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            for (_, v) in column.iter_mut() {
                *v /= norm;
            }
        }
        builder.push_column(column)?;
    }
    Ok((DataMatrix::Sparse(builder.build()), vocab))
}
