//! Tokenize, stem and weight a tiny labeled corpus.
//!
//! cargo run --example text_pipeline

use corrnmf::text::{build_tfidf, porter, preprocess, Corpus};

const JSONL: &str = r#"{"id":"r1","label":"grain","text":"Wheat exports rose as farmers shipped more grain."}
{"id":"r2","label":"grain","text":"Grain traders expect record wheat harvests."}
{"id":"r3","label":"crude","text":"Crude oil prices fell after the refinery outage."}
{"id":"r4","label":"crude","text":"OPEC members discussed crude production quotas."}
"#;

fn main() -> corrnmf::Result<()> {
    for word in ["connections", "harvests", "generalization", "quotas"] {
        println!("{word} -> {}", porter::stem(word));
    }
    println!("{:?}", preprocess("The connected connections were running"));

    let corpus = Corpus::from_jsonl(JSONL.as_bytes(), "inline".as_ref())?;
    println!(
        "\n{} documents, topics {:?}",
        corpus.len(),
        corpus.topic_sizes()
    );

    let (x, vocab) = build_tfidf(&corpus)?;
    println!("vocabulary of {} terms, {} nonzeros", vocab.len(), x.nnz());
    for (n, doc) in corpus.documents().iter().enumerate() {
        let mut top: Vec<(f64, &str)> = x
            .column_entries(n)
            .map(|(d, v)| (v, vocab.terms[d].as_str()))
            .collect();
        top.sort_by(|a, b| b.0.total_cmp(&a.0));
        let shown: Vec<String> = top
            .iter()
            .take(3)
            .map(|(v, t)| format!("{t}:{v:.2}"))
            .collect();
        println!("{} [{}] {}", doc.id, doc.label, shown.join(" "));
    }
    Ok(())
}
