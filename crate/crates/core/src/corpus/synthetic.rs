//! Seeded synthetic corpora with PDTB-like structure.
//!
//! The generator places relations over sentence pairs of several shapes
//! (same sentence, adjacent, one sentence apart, two-sentence Arg1) so
//! that every window strategy has non-trivial neighbors to work with.
//! Labeled relations optionally plant a class cue word at the start of
//! Arg2, which gives the classifier something to learn.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Argument, Corpus, CorpusBuilder, DocId, RelationKind, RelationRecord, SentenceSpan};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticConfig {
    pub documents: usize,
    /// Inclusive range of sentences per document, drawn uniformly.
    pub sentences_per_doc: (usize, usize),
    /// Inclusive range of relations per document, drawn uniformly.
    pub relations_per_doc: (usize, usize),
    /// Probabilities in [`RelationKind::ALL`] order.
    pub kind_mix: [f64; 5],
    /// Probabilities in [`ClassLabel::ALL`](super::ClassLabel::ALL) order.
    pub class_mix: [f64; 4],
    /// Chance that a labeled relation gets a second sense.
    pub double_sense_rate: f64,
    /// Chance that a labeled relation plants a cue word for its class.
    pub cue_rate: f64,
    /// Documents are dealt to these sections round-robin.
    pub sections: Vec<u8>,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            documents: 100,
            sentences_per_doc: (8, 30),
            relations_per_doc: (5, 20),
            kind_mix: [0.40, 0.41, 0.12, 0.02, 0.05],
            class_mix: [0.05, 0.25, 0.15, 0.55],
            double_sense_rate: 0.05,
            cue_rate: 0.7,
            sections: (0..=24).collect(),
            seed: 42,
        }
    }
}

/// Number of distinct relation placements available in a document of
/// `sentences` sentences.
pub fn placement_capacity(sentences: usize) -> usize {
    placements(sentences).len()
}

fn placements(sentences: usize) -> Vec<(SentenceSpan, SentenceSpan, f64)> {
    let mut out = Vec::new();
    for a in 0..sentences {
        out.push((SentenceSpan::single(a), SentenceSpan::single(a), 0.1));
        if a + 1 < sentences {
            out.push((SentenceSpan::single(a), SentenceSpan::single(a + 1), 0.7));
        }
        if a + 2 < sentences {
            out.push((SentenceSpan::single(a), SentenceSpan::single(a + 2), 0.1));
            out.push((
                SentenceSpan::new(a, a + 1),
                SentenceSpan::single(a + 2),
                0.1,
            ));
        }
    }
    out
}

impl SyntheticConfig {
    pub fn validate(&self) -> Result<()> {
        let distribution = |name: &str, ps: &[f64]| {
            if ps.iter().any(|p| !p.is_finite() || *p < 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name} has a negative or non-finite entry"
                )));
            }
            let total: f64 = ps.iter().sum();
            if (total - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidConfig(format!(
                    "{name} sums to {total}, not 1"
                )));
            }
            Ok(())
        };
        distribution("kind_mix", &self.kind_mix)?;
        distribution("class_mix", &self.class_mix)?;
        for (name, p) in [
            ("double_sense_rate", self.double_sense_rate),
            ("cue_rate", self.cue_rate),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidConfig(format!(
                    "{name} = {p} is not a probability"
                )));
            }
        }
        let (smin, smax) = self.sentences_per_doc;
        let (rmin, rmax) = self.relations_per_doc;
        if smin > smax || rmin > rmax {
            return Err(Error::InvalidConfig("empty range".into()));
        }
        if smin == 0 {
            return Err(Error::InvalidConfig(
                "documents need at least one sentence".into(),
            ));
        }
        if self.sections.is_empty() || self.sections.iter().any(|&s| s > 24) {
            return Err(Error::InvalidConfig(
                "sections must be a non-empty subset of 0-24".into(),
            ));
        }
        if self.documents > self.sections.len() * 10_000 {
            return Err(Error::InvalidConfig(
                "too many documents per section".into(),
            ));
        }
        let capacity = placement_capacity(smin);
        if rmax > capacity {
            return Err(Error::Infeasible(format!(
                "{rmax} relations requested but a {smin}-sentence document has only {capacity} argument pairs"
            )));
        }
        Ok(())
    }
}

const FILLER: &[&str] = &[
    "the",
    "company",
    "said",
    "its",
    "shares",
    "rose",
    "in",
    "trading",
    "market",
    "investors",
    "bank",
    "profit",
    "quarter",
    "a",
    "of",
    "to",
    "and",
    "analysts",
    "expected",
    "sales",
    "prices",
    "fell",
    "year",
    "new",
    "plan",
    "board",
    "officials",
    "government",
    "bonds",
    "rates",
    "was",
    "were",
    "on",
    "for",
    "with",
    "by",
    "that",
    "it",
    "they",
    "is",
    "not",
    "more",
    "than",
    "last",
    "week",
    "million",
    "billion",
    "dollars",
    "stock",
    "exchange",
    "interest",
    "federal",
    "yields",
    "earnings",
    "orders",
    "factory",
    "workers",
    "contract",
    "deal",
    "merger",
];

const CUES: [&[&str]; 4] = [
    &["then", "later", "afterward", "meanwhile"],
    &["because", "so", "consequently", "thus"],
    &["but", "however", "although", "yet"],
    &["also", "moreover", "indeed", "specifically"],
];

const SUBSENSES: [&[&str]; 4] = [
    &[
        "Temporal.Asynchronous.Precedence",
        "Temporal.Asynchronous.Succession",
        "Temporal.Synchrony",
    ],
    &[
        "Contingency.Cause.Reason",
        "Contingency.Cause.Result",
        "Contingency.Pragmatic Cause.Justification",
        "Contingency.Condition.Hypothetical",
    ],
    &[
        "Comparison.Contrast.Juxtaposition",
        "Comparison.Contrast.Opposition",
        "Comparison.Concession.Expectation",
        "Comparison.Concession.Contra-expectation",
    ],
    &[
        "Expansion.Conjunction",
        "Expansion.Instantiation",
        "Expansion.Restatement.Specification",
        "Expansion.List",
        "Expansion.Alternative.Chosen alternative",
    ],
];

fn categorical<R: Rng>(rng: &mut R, weights: &[f64]) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    // Rounding can leave `acc` a hair below 1.
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(0)
}

fn sentence<R: Rng>(rng: &mut R) -> Vec<String> {
    let len = rng.random_range(5..=15);
    (0..len)
        .map(|_| FILLER[rng.random_range(0..FILLER.len())].to_string())
        .collect()
}

fn render(words: &[String]) -> String {
    let mut text = words.join(" ");
    if let Some(first) = text.get(..1) {
        let upper = first.to_uppercase();
        text.replace_range(..1, &upper);
    }
    text.push('.');
    text
}

/// Generate a corpus from `config`. Identical configs give identical corpora.
pub fn generate_synthetic(config: &SyntheticConfig) -> Result<Corpus> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut builder = CorpusBuilder::default();
    let mut files_in_section = [0u16; 25];

    for d in 0..config.documents {
        let section = config.sections[d % config.sections.len()];
        let file = files_in_section[section as usize];
        files_in_section[section as usize] += 1;
        let id = DocId::new(section, file);

        let (smin, smax) = config.sentences_per_doc;
        let n_sentences = rng.random_range(smin..=smax);
        let mut words: Vec<Vec<String>> = (0..n_sentences).map(|_| sentence(&mut rng)).collect();

        let (rmin, rmax) = config.relations_per_doc;
        let n_relations = rng.random_range(rmin..=rmax);

        // Weighted sampling without replacement (exponential keys).
        let all = placements(n_sentences);
        let mut keyed: Vec<(f64, usize)> = all
            .iter()
            .enumerate()
            .map(|(i, (_, _, w))| {
                let u: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
                (u.ln() / w, i)
            })
            .collect();
        keyed.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut chosen: Vec<(SentenceSpan, SentenceSpan)> = keyed
            .iter()
            .take(n_relations)
            .map(|&(_, i)| (all[i].0, all[i].1))
            .collect();
        chosen.sort_by_key(|(a1, a2)| (a2.first, a1.first, a1.last, a2.last));

        let mut pending = Vec::with_capacity(chosen.len());
        for (arg1, arg2) in chosen {
            let kind = RelationKind::ALL[categorical(&mut rng, &config.kind_mix)];
            let mut senses = Vec::new();
            if kind.keeps_senses() {
                let class = categorical(&mut rng, &config.class_mix);
                let subs = SUBSENSES[class];
                senses.push(subs[rng.random_range(0..subs.len())].to_string());
                if rng.random::<f64>() < config.double_sense_rate {
                    let second = categorical(&mut rng, &config.class_mix);
                    let subs = SUBSENSES[second];
                    senses.push(subs[rng.random_range(0..subs.len())].to_string());
                }
                if kind.is_labeled() && rng.random::<f64>() < config.cue_rate {
                    let cues = CUES[class];
                    let cue = cues[rng.random_range(0..cues.len())].to_string();
                    words[arg2.first].insert(0, cue);
                }
            }
            pending.push((kind, senses, arg1, arg2));
        }

        let texts: Vec<String> = words.iter().map(|w| render(w)).collect();
        for (i, text) in texts.iter().enumerate() {
            builder.add_sentence(0, id, i, text.clone())?;
        }
        let span_text = |span: SentenceSpan| texts[span.first..=span.last].join(" ");
        for (kind, senses, arg1, arg2) in pending {
            let relation = RelationRecord {
                kind,
                senses,
                arg1: Argument {
                    text: span_text(arg1),
                    span: arg1,
                },
                arg2: Argument {
                    text: span_text(arg2),
                    span: arg2,
                },
            };
            builder.add_relation(0, id, relation)?;
        }
    }
    builder.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{write_corpus, CorpusFormat};

    #[test]
    fn same_seed_same_bytes() {
        let config = SyntheticConfig {
            documents: 20,
            seed: 7,
            ..Default::default()
        };
        let a = write_corpus(
            &generate_synthetic(&config).unwrap(),
            CorpusFormat::RecordJson,
        )
        .unwrap();
        let b = write_corpus(
            &generate_synthetic(&config).unwrap(),
            CorpusFormat::RecordJson,
        )
        .unwrap();
        assert_eq!(a, b);
        let other = SyntheticConfig { seed: 8, ..config };
        let c = write_corpus(
            &generate_synthetic(&other).unwrap(),
            CorpusFormat::RecordJson,
        )
        .unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn zero_relations_gives_sentences_only() {
        let config = SyntheticConfig {
            documents: 5,
            relations_per_doc: (0, 0),
            ..Default::default()
        };
        let corpus = generate_synthetic(&config).unwrap();
        assert_eq!(corpus.relation_count(), 0);
        assert_eq!(corpus.documents().len(), 5);
        assert!(corpus.sentence_count() >= 5 * 8);
    }

    #[test]
    fn infeasible_relation_count() {
        let config = SyntheticConfig {
            sentences_per_doc: (3, 10),
            relations_per_doc: (1, 8),
            ..Default::default()
        };
        assert_eq!(placement_capacity(3), 7);
        assert!(matches!(
            generate_synthetic(&config),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn bad_distribution_is_rejected() {
        let config = SyntheticConfig {
            class_mix: [0.5, 0.5, 0.5, 0.0],
            ..Default::default()
        };
        assert!(matches!(
            generate_synthetic(&config),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn placements_cover_adjacent_and_non_adjacent_pairs() {
        let corpus = generate_synthetic(&SyntheticConfig::default()).unwrap();
        let rels: Vec<_> = corpus
            .documents()
            .values()
            .flat_map(|d| &d.relations)
            .collect();
        let gap = |r: &&RelationRecord| r.arg2.span.first as isize - r.arg1.span.last as isize;
        assert!(rels.iter().any(|r| gap(r) == 1));
        assert!(rels.iter().any(|r| gap(r) == 2));
        assert!(rels.iter().any(|r| gap(r) == 0));
        assert!(rels.iter().any(|r| r.arg1.span.len() == 2));
    }

    #[test]
    fn kind_frequencies_follow_the_mix() {
        let config = SyntheticConfig::default();
        let corpus = generate_synthetic(&config).unwrap();
        let n = corpus.relation_count() as f64;
        for (kind, p) in RelationKind::ALL.into_iter().zip(config.kind_mix) {
            let observed = corpus.count_kind(kind) as f64;
            let sigma = (n * p * (1.0 - p)).sqrt();
            assert!(
                (observed - n * p).abs() <= 3.0 * sigma,
                "{kind:?}: {observed} of {n}, expected {}",
                n * p
            );
        }
    }
}
