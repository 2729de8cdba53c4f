//! Corpus ingestion and tf-idf feature extraction.

mod corpus;
pub mod porter;
mod tfidf;

use std::collections::HashSet;
use std::sync::OnceLock;

pub use corpus::{filter_topics, load_corpus, Corpus, CorpusFormat, Document};
pub use tfidf::{build_tfidf, Vocabulary};

const STOPWORDS: &str = include_str!("stopwords.txt");

/// The embedded English stopword list.
pub fn stopwords() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| {
        STOPWORDS
            .lines()
            .map(str::trim)
            .filter(|w| !w.is_empty())
            .collect()
    })
}

pub fn is_stopword(word: &str) -> bool {
    stopwords().contains(word)
}

/// Lowercases, splits on non-alphabetic characters, removes stopwords and
/// Porter-stems what is left. Tokens shorter than two characters are dropped
/// both before and after stemming.
pub fn preprocess(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphabetic())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .filter(|t| t.chars().count() >= 2 && !is_stopword(t))
        .map(|t| porter::stem(&t))
        .filter(|t| t.chars().count() >= 2)
        .collect()
}
