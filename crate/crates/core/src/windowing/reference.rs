//! Brute-force reference builders.
//!
//! Each example is built by scanning every sentence and every relation of
//! its document, with no precomputed indices. The production builders in
//! the parent module must agree with these exactly.

use rand::Rng;

use super::{example_rng, Dataset, Example, Origin, WindowStrategy};
use crate::corpus::{Corpus, Document, RelationKind};
use crate::error::Result;

fn text_of(doc: &Document, number: usize) -> String {
    doc.sentences
        .iter()
        .find(|s| s.sentence_number == number)
        .map(|s| s.text.clone())
        .expect("sentence exists")
}

fn exists(doc: &Document, number: usize) -> bool {
    doc.sentences.iter().any(|s| s.sentence_number == number)
}

fn participates(doc: &Document, number: usize) -> bool {
    doc.relations.iter().any(|r| {
        matches!(
            r.kind,
            RelationKind::Implicit | RelationKind::Explicit | RelationKind::EntRel
        ) && (r.arg1.span.contains(number) || r.arg2.span.contains(number))
    })
}

pub fn build_reference(strategy: WindowStrategy, corpus: &Corpus) -> Result<Dataset> {
    strategy.validate()?;
    let mut examples = Vec::new();
    let mut excluded = 0;
    let mut ordinal = 0u64;
    for (id, doc) in corpus.documents() {
        for rel in &doc.relations {
            if rel.kind != RelationKind::Implicit {
                continue;
            }
            let first = rel.arg1.span.first;
            let last = rel.arg2.span.last;
            let mut before = Vec::new();
            let mut after = Vec::new();
            match strategy {
                WindowStrategy::Baseline => {}
                WindowStrategy::DirectNeighbors { n } => {
                    let left = first > 0 && exists(doc, first - 1) && participates(doc, first - 1);
                    let right = exists(doc, last + 1) && participates(doc, last + 1);
                    let keep = if n == 1 { left || right } else { left && right };
                    if !keep {
                        excluded += 1;
                        continue;
                    }
                    if left {
                        before.push(text_of(doc, first - 1));
                    }
                    if right {
                        after.push(text_of(doc, last + 1));
                    }
                }
                WindowStrategy::ExpandedWindow { n } => {
                    let side = usize::from(n) / 2;
                    for s in &doc.sentences {
                        let k = s.sentence_number;
                        if k < first && first - k <= side {
                            before.push(s.text.clone());
                        }
                        if k > last && k - last <= side {
                            after.push(s.text.clone());
                        }
                    }
                }
                WindowStrategy::RandomNeighbors { seed } => {
                    let prior: Vec<&str> = doc
                        .sentences
                        .iter()
                        .filter(|s| s.sentence_number < first)
                        .map(|s| s.text.as_str())
                        .collect();
                    let next: Vec<&str> = doc
                        .sentences
                        .iter()
                        .filter(|s| s.sentence_number > last)
                        .map(|s| s.text.as_str())
                        .collect();
                    let mut rng = example_rng(seed, ordinal);
                    if !prior.is_empty() {
                        before.push(prior[rng.random_range(0..prior.len())].to_string());
                    }
                    if !next.is_empty() {
                        after.push(next[rng.random_range(0..next.len())].to_string());
                    }
                }
            }
            ordinal += 1;
            examples.push(Example {
                context_before: before,
                arg1: rel.arg1.text.clone(),
                arg2: rel.arg2.text.clone(),
                context_after: after,
                label: rel.class().expect("implicit relations carry a class"),
                origin: Origin {
                    section: id.section,
                    file: id.file,
                    sentence: rel.arg2.span.first,
                },
            });
        }
    }
    Ok(Dataset {
        strategy,
        examples,
        excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{generate_synthetic, SyntheticConfig};
    use crate::windowing::build;

    #[test]
    fn matches_production_on_a_default_corpus() {
        let corpus = generate_synthetic(&SyntheticConfig::default()).unwrap();
        for strategy in [
            WindowStrategy::Baseline,
            WindowStrategy::DirectNeighbors { n: 1 },
            WindowStrategy::DirectNeighbors { n: 2 },
            WindowStrategy::ExpandedWindow { n: 2 },
            WindowStrategy::ExpandedWindow { n: 4 },
            WindowStrategy::RandomNeighbors { seed: 42 },
        ] {
            assert_eq!(
                build(&corpus, strategy).unwrap(),
                build_reference(strategy, &corpus).unwrap(),
                "{strategy}"
            );
        }
    }
}
