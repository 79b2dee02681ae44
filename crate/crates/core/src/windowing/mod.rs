//! Context-window dataset builders.
//!
//! Every builder emits one [`Example`] per implicit relation it keeps, in
//! document order and then relation order. The strategies differ only in
//! which same-document sentences they attach around the argument pair:
//!
//! * **Baseline**: none.
//! * **Direct neighbors (DN)**: the sentence right before Arg1 and the one
//!   right after Arg2, when that sentence is itself an argument of an
//!   Implicit, Explicit or EntRel relation. `n = 1` keeps pairs with at
//!   least one such neighbor, `n = 2` requires both; other pairs are dropped.
//! * **Expanded window (EWN)**: the `n / 2` nearest sentences on each side,
//!   never dropping a pair.
//! * **Random neighbors (PSRN)**: one sentence drawn uniformly from those
//!   before Arg1 and one from those after Arg2.
//!
//! Builders first compute a [`WindowPlan`] of sentence indices and then
//! materialize texts, so position invariants can be checked on plans.
//! [`reference`] holds an unoptimized re-implementation used as an oracle.

pub mod reference;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{ClassLabel, Corpus, DocId, Document, RelationKind, RelationRecord};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "lowercase")]
pub enum WindowStrategy {
    Baseline,
    #[serde(rename = "dn")]
    DirectNeighbors {
        n: u8,
    },
    #[serde(rename = "ewn")]
    ExpandedWindow {
        n: u8,
    },
    #[serde(rename = "psrn")]
    RandomNeighbors {
        seed: u64,
    },
}

impl WindowStrategy {
    pub fn validate(&self) -> Result<()> {
        match *self {
            WindowStrategy::DirectNeighbors { n } if !(1..=2).contains(&n) => Err(
                Error::InvalidConfig(format!("DN window size must be 1 or 2, got {n}")),
            ),
            WindowStrategy::ExpandedWindow { n } if n != 2 && n != 4 => Err(Error::InvalidConfig(
                format!("EWN window size must be 2 or 4, got {n}"),
            )),
            _ => Ok(()),
        }
    }

    /// Short lowercase name as used on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            WindowStrategy::Baseline => "baseline",
            WindowStrategy::DirectNeighbors { .. } => "dn",
            WindowStrategy::ExpandedWindow { .. } => "ewn",
            WindowStrategy::RandomNeighbors { .. } => "psrn",
        }
    }

    /// Resolve a command-line style `(name, n, seed)` triple.
    pub fn from_parts(name: &str, n: Option<u8>, seed: u64) -> Result<Self> {
        let need_n = |default: Option<u8>| {
            n.or(default)
                .ok_or_else(|| Error::InvalidConfig(format!("strategy {name} needs a window size")))
        };
        let strategy = match name {
            "baseline" => WindowStrategy::Baseline,
            "dn" => WindowStrategy::DirectNeighbors { n: need_n(None)? },
            "ewn" => WindowStrategy::ExpandedWindow { n: need_n(None)? },
            "psrn" => WindowStrategy::RandomNeighbors { seed },
            other => return Err(Error::InvalidConfig(format!("unknown strategy {other:?}"))),
        };
        if n.is_some()
            && matches!(
                strategy,
                WindowStrategy::Baseline | WindowStrategy::RandomNeighbors { .. }
            )
        {
            return Err(Error::InvalidConfig(format!(
                "strategy {name} takes no window size"
            )));
        }
        strategy.validate()?;
        Ok(strategy)
    }
}

impl fmt::Display for WindowStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WindowStrategy::Baseline => write!(f, "Baseline"),
            WindowStrategy::DirectNeighbors { n } => write!(f, "DN (N={n})"),
            WindowStrategy::ExpandedWindow { n } => write!(f, "EWN (N={n})"),
            WindowStrategy::RandomNeighbors { .. } => write!(f, "PSRN"),
        }
    }
}

impl FromStr for WindowStrategy {
    type Err = Error;

    /// Accepts `baseline`, `dn1`, `dn2`, `ewn2`, `ewn4` and `psrn` / `psrn:SEED`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "baseline" => Ok(WindowStrategy::Baseline),
            "psrn" => Ok(WindowStrategy::RandomNeighbors { seed: 42 }),
            _ => {
                if let Some(seed) = s.strip_prefix("psrn:") {
                    let seed = seed
                        .parse()
                        .map_err(|_| Error::InvalidConfig(format!("bad PSRN seed in {s:?}")))?;
                    return Ok(WindowStrategy::RandomNeighbors { seed });
                }
                let (name, n) = s.split_at(s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len()));
                let n: u8 = n
                    .parse()
                    .map_err(|_| Error::InvalidConfig(format!("unknown strategy {s:?}")))?;
                WindowStrategy::from_parts(name, Some(n), 0)
            }
        }
    }
}

/// `(section, file, first sentence of Arg2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Origin {
    pub section: u8,
    pub file: u16,
    pub sentence: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example {
    pub context_before: Vec<String>,
    pub arg1: String,
    pub arg2: String,
    pub context_after: Vec<String>,
    pub label: ClassLabel,
    pub origin: Origin,
}

impl Example {
    /// The same example with its context dropped.
    pub fn without_context(&self) -> Example {
        Example {
            context_before: Vec::new(),
            context_after: Vec::new(),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub strategy: WindowStrategy,
    pub examples: Vec<Example>,
    /// Implicit relations the strategy filtered out.
    pub excluded: usize,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }
}

/// Sentence indices chosen for one implicit relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowPlan {
    pub doc: DocId,
    /// Index into the document's relation list.
    pub relation: usize,
    pub before: Vec<usize>,
    pub after: Vec<usize>,
}

/// Deterministic per-example generator for PSRN: the stream depends only
/// on the global seed and the example's ordinal among implicit relations.
pub(crate) fn example_rng(seed: u64, ordinal: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(ordinal);
    rng
}

/// Draw one index uniformly from `start..start + count`, if non-empty.
pub(crate) fn draw(rng: &mut ChaCha8Rng, start: usize, count: usize) -> Option<usize> {
    (count > 0).then(|| start + rng.random_range(0..count))
}

fn implicit(doc: &Document) -> impl Iterator<Item = (usize, &RelationRecord)> {
    doc.relations
        .iter()
        .enumerate()
        .filter(|(_, r)| r.kind == RelationKind::Implicit)
}

/// Compute window plans for every implicit relation kept by `strategy`.
/// Returns the plans and the number of implicit relations excluded.
pub fn plan(corpus: &Corpus, strategy: WindowStrategy) -> Result<(Vec<WindowPlan>, usize)> {
    strategy.validate()?;
    let mut plans = Vec::new();
    let mut excluded = 0;
    let mut ordinal = 0u64;
    for (&id, doc) in corpus.documents() {
        let len = doc.sentences.len();
        let annotated = match strategy {
            WindowStrategy::DirectNeighbors { .. } => annotated_sentences(doc),
            _ => Vec::new(),
        };
        for (index, rel) in implicit(doc) {
            let first = rel.arg1.span.first;
            let last = rel.arg2.span.last;
            let (before, after) = match strategy {
                WindowStrategy::Baseline => (Vec::new(), Vec::new()),
                WindowStrategy::DirectNeighbors { n } => {
                    let left = first.checked_sub(1).filter(|&s| annotated[s]);
                    let right = Some(last + 1).filter(|&s| s < len && annotated[s]);
                    let keep = match n {
                        1 => left.is_some() || right.is_some(),
                        _ => left.is_some() && right.is_some(),
                    };
                    if !keep {
                        excluded += 1;
                        continue;
                    }
                    (left.into_iter().collect(), right.into_iter().collect())
                }
                WindowStrategy::ExpandedWindow { n } => {
                    let side = usize::from(n / 2);
                    (
                        (first.saturating_sub(side)..first).collect(),
                        (last + 1..len.min(last + 1 + side)).collect(),
                    )
                }
                WindowStrategy::RandomNeighbors { seed } => {
                    let mut rng = example_rng(seed, ordinal);
                    let before = draw(&mut rng, 0, first);
                    let after = draw(&mut rng, last + 1, len.saturating_sub(last + 1));
                    (before.into_iter().collect(), after.into_iter().collect())
                }
            };
            ordinal += 1;
            plans.push(WindowPlan {
                doc: id,
                relation: index,
                before,
                after,
            });
        }
    }
    Ok((plans, excluded))
}

fn annotated_sentences(doc: &Document) -> Vec<bool> {
    let mut annotated = vec![false; doc.sentences.len()];
    for rel in &doc.relations {
        if matches!(
            rel.kind,
            RelationKind::Implicit | RelationKind::Explicit | RelationKind::EntRel
        ) {
            for s in rel.arg1.span.indices().chain(rel.arg2.span.indices()) {
                annotated[s] = true;
            }
        }
    }
    annotated
}

/// Turn a plan into an example with texts.
pub fn materialize(corpus: &Corpus, plan: &WindowPlan) -> Example {
    let doc = corpus
        .document(plan.doc)
        .expect("plan refers to a document of this corpus");
    let rel = &doc.relations[plan.relation];
    let texts = |idx: &[usize]| {
        idx.iter()
            .map(|&i| doc.sentence_text(i).to_string())
            .collect()
    };
    Example {
        context_before: texts(&plan.before),
        arg1: rel.arg1.text.clone(),
        arg2: rel.arg2.text.clone(),
        context_after: texts(&plan.after),
        label: rel.class().expect("implicit relations carry a class"),
        origin: Origin {
            section: plan.doc.section,
            file: plan.doc.file,
            sentence: rel.arg2.span.first,
        },
    }
}

pub fn build(corpus: &Corpus, strategy: WindowStrategy) -> Result<Dataset> {
    let (plans, excluded) = plan(corpus, strategy)?;
    Ok(Dataset {
        strategy,
        examples: plans.iter().map(|p| materialize(corpus, p)).collect(),
        excluded,
    })
}

pub fn build_baseline(corpus: &Corpus) -> Dataset {
    build(corpus, WindowStrategy::Baseline).expect("baseline is always valid")
}

pub fn build_dn(corpus: &Corpus, n: u8) -> Result<Dataset> {
    build(corpus, WindowStrategy::DirectNeighbors { n })
}

pub fn build_ewn(corpus: &Corpus, n: u8) -> Result<Dataset> {
    build(corpus, WindowStrategy::ExpandedWindow { n })
}

pub fn build_psrn(corpus: &Corpus, seed: u64) -> Dataset {
    build(corpus, WindowStrategy::RandomNeighbors { seed }).expect("PSRN is always valid")
}
