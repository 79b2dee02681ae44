//! Parse a pipe-format corpus and summarize it.
//!
//! ```text
//! cargo run --example parse_corpus                      # bundled fixture
//! cargo run --example parse_corpus -- /path/to/pdtb     # a PDTB-2.0 tree
//! ```

use std::path::PathBuf;

use pdtb_windows::corpus::{CorpusFormat, RelationKind};
use pdtb_windows::pipeline::load_corpus;

fn main() -> pdtb_windows::Result<()> {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/conformance.pipe").into()
        });
    let corpus = load_corpus(&path, CorpusFormat::Pipe)?;

    println!("{}", path.display());
    println!("  documents  {}", corpus.documents().len());
    println!("  sentences  {}", corpus.sentence_count());
    for kind in RelationKind::ALL {
        println!("  {:<10} {}", kind.name(), corpus.count_kind(kind));
    }
    println!(
        "  relations whose senses disagree on the class: {}",
        corpus.sense_conflicts()
    );

    let (id, doc) = corpus.documents().iter().next().expect("non-empty corpus");
    println!("\nfirst implicit relations of {id}:");
    for rel in doc.implicit_relations().take(3) {
        println!(
            "  [{}] {:?} -> {:?}",
            rel.class().map(|c| c.name()).unwrap_or("?"),
            rel.arg1.text,
            rel.arg2.text
        );
    }
    Ok(())
}
