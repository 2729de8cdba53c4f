use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub label: String,
    pub text: String,
}

/// Labeled documents with unique ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    documents: Vec<Document>,
}

impl Corpus {
    pub fn new(documents: Vec<Document>) -> Result<Self> {
        let mut seen = HashSet::new();
        for doc in &documents {
            if !seen.insert(doc.id.as_str()) {
                return Err(Error::DuplicateId(doc.id.clone()));
            }
        }
        Ok(Corpus { documents })
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// Distinct labels, sorted.
    pub fn topics(&self) -> Vec<String> {
        self.documents
            .iter()
            .map(|d| d.label.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// Document count per topic.
    pub fn topic_sizes(&self) -> BTreeMap<String, usize> {
        let mut sizes = BTreeMap::new();
        for d in &self.documents {
            *sizes.entry(d.label.clone()).or_insert(0) += 1;
        }
        sizes
    }

    /// Each document's label as an index into [`Corpus::topics`].
    pub fn label_indices(&self) -> Vec<usize> {
        let topics = self.topics();
        self.documents
            .iter()
            .map(|d| topics.binary_search(&d.label).expect("label is a topic"))
            .collect()
    }

    /// Keeps only documents whose label is in `topics`, in original order.
    pub fn restrict_to(&self, topics: &[String]) -> Corpus {
        let keep: HashSet<&str> = topics.iter().map(String::as_str).collect();
        Corpus {
            documents: self
                .documents
                .iter()
                .filter(|d| keep.contains(d.label.as_str()))
                .cloned()
                .collect(),
        }
    }

    pub fn from_jsonl<R: BufRead>(input: R, origin: &Path) -> Result<Self> {
        let mut docs = Vec::new();
        for (i, line) in input.lines().enumerate() {
            let line = line.map_err(|e| Error::io(origin, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let doc: Document = serde_json::from_str(&line).map_err(|e| Error::Parse {
                path: origin.to_path_buf(),
                line: i + 1,
                message: e.to_string(),
            })?;
            docs.push(doc);
        }
        Corpus::new(docs)
    }

    pub fn write_jsonl<W: std::io::Write>(&self, mut out: W) -> Result<()> {
        for doc in &self.documents {
            serde_json::to_writer(&mut out, doc)?;
            out.write_all(b"\n").map_err(|e| Error::io("<output>", e))?;
        }
        Ok(())
    }

    /// One subdirectory per topic, one text file per document; the id is
    /// `topic/file name`. Entries are read in name order; dot-files are skipped.
    pub fn from_dir(root: &Path) -> Result<Self> {
        let mut docs = Vec::new();
        for topic_dir in sorted_entries(root)? {
            if !topic_dir.is_dir() {
                continue;
            }
            let label = file_name(&topic_dir);
            for file in sorted_entries(&topic_dir)? {
                if !file.is_file() {
                    continue;
                }
                let text = std::fs::read_to_string(&file).map_err(|e| Error::io(&file, e))?;
                docs.push(Document {
                    id: format!("{label}/{}", file_name(&file)),
                    label: label.clone(),
                    text,
                });
            }
        }
        Corpus::new(docs)
    }
}

fn file_name(p: &Path) -> String {
    p.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn sorted_entries(dir: &Path) -> Result<Vec<std::path::PathBuf>> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if !file_name(&path).starts_with('.') {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusFormat {
    Jsonl,
    Dir,
}

impl CorpusFormat {
    /// Directories use the topic-folder layout, anything else is jsonl.
    pub fn infer(path: &Path) -> Self {
        if path.is_dir() {
            CorpusFormat::Dir
        } else {
            CorpusFormat::Jsonl
        }
    }
}

pub fn load_corpus(path: impl AsRef<Path>, format: CorpusFormat) -> Result<Corpus> {
    let path = path.as_ref();
    match format {
        CorpusFormat::Jsonl => {
            let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
            Corpus::from_jsonl(std::io::BufReader::new(file), path)
        }
        CorpusFormat::Dir => Corpus::from_dir(path),
    }
}

/// Drops topics with fewer than `min_docs` documents.
pub fn filter_topics(corpus: &Corpus, min_docs: usize) -> Result<Corpus> {
    if min_docs == 0 {
        return Err(Error::InvalidConfig("min_docs must be at least 1".into()));
    }
    let keep: Vec<String> = corpus
        .topic_sizes()
        .into_iter()
        .filter(|&(_, n)| n >= min_docs)
        .map(|(t, _)| t)
        .collect();
    if keep.is_empty() {
        return Err(Error::NoTopicsLeft { min_docs });
    }
    Ok(corpus.restrict_to(&keep))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(id: &str, label: &str) -> Document {
        Document {
            id: id.into(),
            label: label.into(),
            text: format!("text of {id}"),
        }
    }

    #[test]
    fn jsonl_single_record() {
        let src = r#"{"id":"d1","label":"trade","text":"oil exports"}"#;
        let c = Corpus::from_jsonl(src.as_bytes(), Path::new("c.jsonl")).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.topics(), ["trade"]);
    }

    #[test]
    fn jsonl_errors() {
        let src = "{\"id\":\"a\",\"label\":\"x\",\"text\":\"\"}\n\n{\"id\":\"b\",\"label\":";
        match Corpus::from_jsonl(src.as_bytes(), Path::new("c.jsonl")) {
            Err(Error::Parse { line: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        let src = "{\"id\":\"a\",\"label\":\"x\",\"text\":\"\"}\n{\"id\":\"a\",\"label\":\"y\",\"text\":\"\"}";
        match Corpus::from_jsonl(src.as_bytes(), Path::new("c.jsonl")) {
            Err(Error::DuplicateId(id)) => assert_eq!(id, "a"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn filter_examples() {
        let mut docs: Vec<Document> = (0..6).map(|i| doc(&format!("a{i}"), "A")).collect();
        docs.extend((0..3).map(|i| doc(&format!("b{i}"), "B")));
        let c = Corpus::new(docs).unwrap();
        assert_eq!(filter_topics(&c, 5).unwrap().topics(), ["A"]);
        assert_eq!(filter_topics(&c, 1).unwrap(), c);
        assert!(matches!(
            filter_topics(&c, 7),
            Err(Error::NoTopicsLeft { min_docs: 7 })
        ));
    }

    #[test]
    fn label_indices_follow_sorted_topics() {
        let c = Corpus::new(vec![doc("1", "z"), doc("2", "a"), doc("3", "z")]).unwrap();
        assert_eq!(c.label_indices(), [1, 0, 1]);
    }
}
