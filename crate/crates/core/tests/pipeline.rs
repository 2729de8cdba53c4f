use std::fs;

use corrnmf::eval::{evaluate, kmeans, KMeansConfig, LabelAssignment};
use corrnmf::text::{
    build_tfidf, filter_topics, load_corpus, preprocess, Corpus, CorpusFormat, Document,
};
use corrnmf::{factorize, Error, SolverConfig};
use ndarray::Array2;

fn doc(id: &str, label: &str, text: &str) -> Document {
    Document {
        id: id.into(),
        label: label.into(),
        text: text.into(),
    }
}

#[test]
fn single_jsonl_record() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.jsonl");
    fs::write(
        &path,
        "{\"id\":\"d1\",\"label\":\"trade\",\"text\":\"tariffs on steel\"}\n",
    )
    .unwrap();
    let c = load_corpus(&path, CorpusFormat::infer(&path)).unwrap();
    assert_eq!(c.len(), 1);
    assert_eq!(c.documents()[0], doc("d1", "trade", "tariffs on steel"));
}

#[test]
fn duplicate_ids_are_named() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.jsonl");
    fs::write(
        &path,
        "{\"id\":\"x7\",\"label\":\"a\",\"text\":\"one\"}\n{\"id\":\"x7\",\"label\":\"b\",\"text\":\"two\"}\n",
    )
    .unwrap();
    match load_corpus(&path, CorpusFormat::Jsonl) {
        Err(e @ Error::DuplicateId(_)) => assert!(e.to_string().contains("x7")),
        other => panic!("expected duplicate id error, got {other:?}"),
    }
}

#[test]
fn directory_layout() {
    let dir = tempfile::tempdir().unwrap();
    for topic in ["grain", "crude"] {
        fs::create_dir(dir.path().join(topic)).unwrap();
        for i in 0..3 {
            fs::write(
                dir.path().join(topic).join(format!("{i}.txt")),
                format!("{topic} report {i}"),
            )
            .unwrap();
        }
    }
    let c = load_corpus(dir.path(), CorpusFormat::infer(dir.path())).unwrap();
    assert_eq!(c.len(), 6);
    assert_eq!(c.topics(), ["crude", "grain"]);
    assert_eq!(c.documents()[0].id, "crude/0.txt");
}

#[test]
fn topic_filter_examples() {
    let mut docs = Vec::new();
    for i in 0..6 {
        docs.push(doc(&format!("a{i}"), "A", "x"));
    }
    for i in 0..3 {
        docs.push(doc(&format!("b{i}"), "B", "x"));
    }
    let c = Corpus::new(docs).unwrap();
    assert_eq!(filter_topics(&c, 5).unwrap().topics(), ["A"]);
    assert_eq!(filter_topics(&c, 1).unwrap(), c);
    assert!(matches!(
        filter_topics(&c, 7),
        Err(Error::NoTopicsLeft { .. })
    ));
}

#[test]
fn preprocessing_examples() {
    assert_eq!(
        preprocess("The connected connections"),
        ["connect", "connect"]
    );
    assert!(preprocess("the a an").is_empty());
    assert_eq!(preprocess("Running RUNS"), ["run", "run"]);
}

#[test]
fn kmeans_recovers_separated_groups_deterministically() {
    let points = Array2::from_shape_fn((2, 10), |(d, n)| {
        if n < 5 {
            d as f64 * 0.1 + n as f64 * 0.01
        } else {
            10.0 + n as f64 * 0.01
        }
    });
    let a = kmeans(&points, 2, 4, &KMeansConfig::default()).unwrap();
    let b = kmeans(&points, 2, 4, &KMeansConfig::default()).unwrap();
    assert_eq!(a, b);
    let truth: Vec<usize> = (0..10).map(|n| usize::from(n >= 5)).collect();
    let report = evaluate(&LabelAssignment::new(a.labels, truth, 2).unwrap()).unwrap();
    assert_eq!(report.accuracy, 1.0);
}

#[test]
fn text_to_accuracy() {
    let topics = [
        ("wheat", "wheat harvest grain farmers export bushel"),
        ("oil", "crude barrel refinery opec pipeline petroleum"),
    ];
    let mut docs = Vec::new();
    for (label, vocab) in topics {
        let words: Vec<&str> = vocab.split(' ').collect();
        for i in 0..8 {
            let text: Vec<&str> = (0..12)
                .map(|j| words[(i * 5 + j * 7) % words.len()])
                .collect();
            docs.push(doc(&format!("{label}{i}"), label, &text.join(" ")));
        }
    }
    let corpus = Corpus::new(docs).unwrap();
    let (x, vocab) = build_tfidf(&corpus).unwrap();
    assert!(x.is_sparse());
    assert_eq!(x.nrows(), vocab.len());
    let fit = factorize(&x, 2, &SolverConfig::default()).unwrap();
    let km = kmeans(&fit.factors.w, 2, 0, &KMeansConfig::default()).unwrap();
    let report =
        evaluate(&LabelAssignment::new(km.labels, corpus.label_indices(), 2).unwrap()).unwrap();
    assert_eq!(report.accuracy, 1.0);
}

#[test]
fn accuracy_hand_cases() {
    let acc = |p: Vec<usize>, t: Vec<usize>| {
        evaluate(&LabelAssignment::new(p, t, 2).unwrap())
            .unwrap()
            .accuracy
    };
    assert_eq!(acc(vec![0, 0, 1, 1], vec![0, 0, 1, 1]), 1.0);
    assert_eq!(acc(vec![1, 1, 0, 0], vec![0, 0, 1, 1]), 1.0);
    assert_eq!(acc(vec![0, 1, 0, 1], vec![0, 0, 1, 1]), 0.5);
    assert!(LabelAssignment::new(vec![0], vec![0, 1], 2).is_err());
}
