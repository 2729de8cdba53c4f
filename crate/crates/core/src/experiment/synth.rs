//! Synthetic labeled corpora with planted, disjoint topic vocabularies.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;
use crate::text::{Corpus, Document};

/// Consonants other than `s` and `y`: words built from them pass through
/// the stopword filter and the Porter stemmer unchanged.
const LETTERS: &[u8] = b"bcdfghjklmnpqrtvwxz";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticSpec {
    pub topics: usize,
    pub docs_per_topic: usize,
    pub vocab_size: usize,
    /// Fraction of each document's tokens drawn from the shared background.
    pub noise_level: f64,
    /// Tokens per document.
    pub doc_length: usize,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            topics: 3,
            docs_per_topic: 40,
            vocab_size: 300,
            noise_level: 0.1,
            doc_length: 60,
            seed: 0,
        }
    }
}

/// Term `index` of a synthetic vocabulary of `size` terms.
pub fn synthetic_term(index: usize, size: usize) -> String {
    let base = LETTERS.len();
    let mut width = 1;
    while base.pow(width as u32) < size {
        width += 1;
    }
    let mut word = b"zq".to_vec();
    let mut rest = index;
    let mut digits = vec![0u8; width];
    for d in digits.iter_mut().rev() {
        *d = LETTERS[rest % base];
        rest /= base;
    }
    word.extend(digits);
    String::from_utf8(word).expect("ascii")
}

/// Splits the vocabulary into a background block (a third, rounded down)
/// and equal disjoint signature blocks, one per topic. Documents draw
/// `noise_level` of their tokens from the background and the rest from
/// their topic's signature, uniformly.
pub fn make_synthetic_corpus(spec: &SyntheticSpec) -> Result<Corpus> {
    if spec.topics == 0 || spec.docs_per_topic == 0 || spec.vocab_size == 0 || spec.doc_length == 0
    {
        return Err(Error::InvalidConfig(
            "synthetic corpus counts must be at least 1".into(),
        ));
    }
    if !(0.0..1.0).contains(&spec.noise_level) {
        return Err(Error::InvalidConfig(format!(
            "noise_level must lie in [0, 1), got {}",
            spec.noise_level
        )));
    }
    let background = spec.vocab_size / 3;
    let per_topic = (spec.vocab_size - background) / spec.topics;
    if per_topic < 2 {
        return Err(Error::VocabularyTooSmall {
            vocab: spec.vocab_size,
            topics: spec.topics,
        });
    }
    let term = |i: usize| synthetic_term(i, spec.vocab_size);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut docs = Vec::with_capacity(spec.topics * spec.docs_per_topic);
    let width = spec.topics.to_string().len();
    for t in 0..spec.topics {
        let sig_start = background + t * per_topic;
        for i in 0..spec.docs_per_topic {
            let words: Vec<String> = (0..spec.doc_length)
                .map(|_| {
                    if background > 0 && rng.gen::<f64>() < spec.noise_level {
                        term(rng.gen_range(0..background))
                    } else {
                        term(sig_start + rng.gen_range(0..per_topic))
                    }
                })
                .collect();
            docs.push(Document {
                id: format!("t{t:0width$}-d{i}"),
                label: format!("topic{t:0width$}"),
                text: words.join(" "),
            });
        }
    }
    Corpus::new(docs)
}

/// Replaces `fraction` of the feature rows of `x` with half-Cauchy noise of
/// scale `magnitude`. Returns the corrupted matrix and the chosen rows.
pub fn corrupt_rows(
    x: &DataMatrix,
    fraction: f64,
    magnitude: f64,
    seed: u64,
) -> Result<(DataMatrix, Vec<usize>)> {
    if !(0.0..=1.0).contains(&fraction) || magnitude.is_nan() || magnitude <= 0.0 {
        return Err(Error::InvalidConfig(
            "corruption fraction must lie in [0, 1] and magnitude be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = (fraction * x.nrows() as f64).round() as usize;
    let mut rows = rand::seq::index::sample(&mut rng, x.nrows(), count).into_vec();
    rows.sort_unstable();
    let mut dense = x.to_dense();
    for &r in &rows {
        for v in dense.row_mut(r).iter_mut() {
            let u: f64 = rng.gen::<f64>().min(1.0 - 1e-9);
            *v = magnitude * (std::f64::consts::FRAC_PI_2 * u).tan();
        }
    }
    let corrupted = DataMatrix::from_dense(dense)?;
    Ok((
        if x.is_sparse() {
            corrupted.to_sparse()
        } else {
            corrupted
        },
        rows,
    ))
}
