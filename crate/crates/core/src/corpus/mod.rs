//! Discourse-annotated corpora.
//!
//! A [`Corpus`] is a set of documents keyed by `(section, file)`. Each
//! [`Document`] holds its sentences in order and the discourse relations
//! annotated over them. Argument spans are stored at sentence granularity:
//! a sub-sentential argument is widened to the sentences it touches.
//!
//! Two interchange formats are supported, see [`pipe`] and [`record_json`],
//! and [`synthetic`] generates corpora with the same structure for tests.

pub mod pipe;
pub mod record_json;
pub mod synthetic;

use std::collections::BTreeMap;
use std::fmt;
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use synthetic::{generate_synthetic, SyntheticConfig};

/// Top-level (Class) sense of a discourse relation.
///
/// The declaration order is the class index order used everywhere else
/// (label ids, confusion matrix rows, model outputs).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClassLabel {
    Temporal,
    Contingency,
    Comparison,
    Expansion,
}

impl ClassLabel {
    pub const ALL: [ClassLabel; 4] = [
        ClassLabel::Temporal,
        ClassLabel::Contingency,
        ClassLabel::Comparison,
        ClassLabel::Expansion,
    ];
    pub const COUNT: usize = 4;

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<ClassLabel> {
        Self::ALL.get(index).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            ClassLabel::Temporal => "Temporal",
            ClassLabel::Contingency => "Contingency",
            ClassLabel::Comparison => "Comparison",
            ClassLabel::Expansion => "Expansion",
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownSense(s.to_string()))
    }
}

/// Map a dotted sense string (`Class.Type.Subtype`) to its Class.
///
/// ```
/// use pdtb_windows::corpus::{extract_class, ClassLabel};
/// assert_eq!(extract_class("Contingency.Cause.Reason").unwrap(), ClassLabel::Contingency);
/// assert!(extract_class("Foo.Bar").is_err());
/// ```
pub fn extract_class(sense: &str) -> Result<ClassLabel> {
    let head = sense.split('.').next().unwrap_or_default().trim();
    ClassLabel::from_str(head).map_err(|_| Error::UnknownSense(sense.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RelationKind {
    Implicit,
    Explicit,
    EntRel,
    AltLex,
    NoRel,
}

impl RelationKind {
    pub const ALL: [RelationKind; 5] = [
        RelationKind::Implicit,
        RelationKind::Explicit,
        RelationKind::EntRel,
        RelationKind::AltLex,
        RelationKind::NoRel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RelationKind::Implicit => "Implicit",
            RelationKind::Explicit => "Explicit",
            RelationKind::EntRel => "EntRel",
            RelationKind::AltLex => "AltLex",
            RelationKind::NoRel => "NoRel",
        }
    }

    /// Whether relations of this kind carry a Class label.
    pub fn is_labeled(self) -> bool {
        matches!(self, RelationKind::Implicit | RelationKind::Explicit)
    }

    /// Whether senses are kept for this kind at all.
    fn keeps_senses(self) -> bool {
        matches!(
            self,
            RelationKind::Implicit | RelationKind::Explicit | RelationKind::AltLex
        )
    }
}

impl FromStr for RelationKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown relation kind {s:?}"))
    }
}

/// Identifies one source document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DocId {
    pub section: u8,
    pub file: u16,
}

impl DocId {
    pub fn new(section: u8, file: u16) -> Self {
        Self { section, file }
    }
}

impl fmt::Display for DocId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "wsj_{:02}{:02}", self.section, self.file)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceRecord {
    pub section_number: u8,
    pub file_number: u16,
    pub sentence_number: usize,
    pub text: String,
}

/// Inclusive range of sentence indices covered by an argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SentenceSpan {
    pub first: usize,
    pub last: usize,
}

impl SentenceSpan {
    pub fn new(first: usize, last: usize) -> Self {
        debug_assert!(first <= last);
        Self { first, last }
    }

    pub fn single(index: usize) -> Self {
        Self::new(index, index)
    }

    /// Covering span of an arbitrary set of sentence indices.
    pub fn covering(indices: impl IntoIterator<Item = usize>) -> Option<Self> {
        let mut iter = indices.into_iter();
        let first = iter.next()?;
        let (lo, hi) = iter.fold((first, first), |(lo, hi), i| (lo.min(i), hi.max(i)));
        Some(Self::new(lo, hi))
    }

    pub fn contains(&self, index: usize) -> bool {
        self.first <= index && index <= self.last
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<usize> {
        self.first..=self.last
    }

    pub fn len(&self) -> usize {
        self.last - self.first + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Argument {
    pub text: String,
    pub span: SentenceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationRecord {
    pub kind: RelationKind,
    pub senses: Vec<String>,
    pub arg1: Argument,
    pub arg2: Argument,
}

impl RelationRecord {
    /// Label of the relation, taken from its first sense.
    ///
    /// `None` for kinds that do not carry a Class.
    pub fn class(&self) -> Option<ClassLabel> {
        if !self.kind.is_labeled() {
            return None;
        }
        self.senses.first().and_then(|s| extract_class(s).ok())
    }

    /// True when the relation lists senses from more than one Class.
    pub fn has_conflicting_senses(&self) -> bool {
        let mut classes = self.senses.iter().filter_map(|s| extract_class(s).ok());
        match classes.next() {
            Some(first) => classes.any(|c| c != first),
            None => false,
        }
    }

    /// Check the per-relation invariants.
    fn validate(&self) -> std::result::Result<(), String> {
        if self.kind.is_labeled() && self.senses.is_empty() {
            return Err(format!("{} relation without a sense", self.kind.name()));
        }
        if !self.kind.keeps_senses() && !self.senses.is_empty() {
            return Err(format!(
                "{} relation must not carry senses",
                self.kind.name()
            ));
        }
        // Explicit arguments may appear in either order; implicit ones may not.
        if self.kind == RelationKind::Implicit
            && (self.arg1.span.first > self.arg2.span.first
                || self.arg1.span.last > self.arg2.span.last)
        {
            return Err("implicit Arg1 does not precede Arg2".to_string());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Document {
    pub sentences: Vec<SentenceRecord>,
    pub relations: Vec<RelationRecord>,
}

impl Document {
    pub fn sentence_text(&self, index: usize) -> &str {
        &self.sentences[index].text
    }

    pub fn implicit_relations(&self) -> impl Iterator<Item = &RelationRecord> {
        self.relations
            .iter()
            .filter(|r| r.kind == RelationKind::Implicit)
    }
}

/// An immutable, validated corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    documents: BTreeMap<DocId, Document>,
}

impl Corpus {
    pub fn documents(&self) -> &BTreeMap<DocId, Document> {
        &self.documents
    }

    pub fn document(&self, id: DocId) -> Option<&Document> {
        self.documents.get(&id)
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// Union of two corpora with disjoint documents.
    pub fn merge(mut self, other: Corpus) -> Result<Corpus> {
        for (id, doc) in other.documents {
            if self.documents.contains_key(&id) {
                return Err(Error::InvalidConfig(format!(
                    "document {id} appears in more than one input"
                )));
            }
            self.documents.insert(id, doc);
        }
        Ok(self)
    }

    pub fn relation_count(&self) -> usize {
        self.documents.values().map(|d| d.relations.len()).sum()
    }

    pub fn sentence_count(&self) -> usize {
        self.documents.values().map(|d| d.sentences.len()).sum()
    }

    pub fn count_kind(&self, kind: RelationKind) -> usize {
        self.documents
            .values()
            .flat_map(|d| &d.relations)
            .filter(|r| r.kind == kind)
            .count()
    }

    /// Number of relations whose senses span more than one Class.
    /// These are labeled by their first sense.
    pub fn sense_conflicts(&self) -> usize {
        self.documents
            .values()
            .flat_map(|d| &d.relations)
            .filter(|r| r.has_conflicting_senses())
            .count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorpusFormat {
    Pipe,
    RecordJson,
}

impl FromStr for CorpusFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pipe" => Ok(CorpusFormat::Pipe),
            "record-json" => Ok(CorpusFormat::RecordJson),
            other => Err(Error::InvalidConfig(format!(
                "unknown corpus format {other:?}"
            ))),
        }
    }
}

/// Parse a corpus from `input` in the declared format.
pub fn parse_corpus<R: Read>(mut input: R, format: CorpusFormat) -> Result<Corpus> {
    let mut text = String::new();
    input
        .read_to_string(&mut text)
        .map_err(|e| Error::io("reading corpus", e))?;
    match format {
        CorpusFormat::Pipe => pipe::parse(&text),
        CorpusFormat::RecordJson => record_json::parse(&text),
    }
}

/// Serialize a corpus in the given format.
pub fn write_corpus(corpus: &Corpus, format: CorpusFormat) -> Result<String> {
    match format {
        CorpusFormat::Pipe => pipe::serialize(corpus),
        CorpusFormat::RecordJson => record_json::serialize(corpus),
    }
}

/// Accumulates sentences and relations in input order and validates them
/// into a [`Corpus`].
#[derive(Debug, Default)]
pub(crate) struct CorpusBuilder {
    docs: BTreeMap<DocId, PendingDocument>,
}

#[derive(Debug, Default)]
struct PendingDocument {
    sentences: BTreeMap<usize, String>,
    relations: Vec<(usize, RelationRecord)>,
}

impl CorpusBuilder {
    pub fn add_sentence(
        &mut self,
        line: usize,
        doc: DocId,
        index: usize,
        text: String,
    ) -> Result<()> {
        let pending = self.docs.entry(doc).or_default();
        if pending.sentences.insert(index, text).is_some() {
            return Err(Error::DuplicateSentence {
                line,
                section: doc.section,
                file: doc.file,
                sentence: index,
            });
        }
        Ok(())
    }

    pub fn add_relation(
        &mut self,
        line: usize,
        doc: DocId,
        relation: RelationRecord,
    ) -> Result<()> {
        relation
            .validate()
            .map_err(|message| Error::Malformed { line, message })?;
        if relation.kind.keeps_senses() {
            for sense in &relation.senses {
                extract_class(sense).map_err(|_| Error::UnknownClass {
                    line,
                    sense: sense.clone(),
                })?;
            }
        }
        self.docs
            .entry(doc)
            .or_default()
            .relations
            .push((line, relation));
        Ok(())
    }

    /// Resolve spans and sentence texts.
    ///
    /// Documents that list their sentences explicitly must list `0..k`
    /// contiguously, and every argument span must fall inside them.
    /// Documents without sentence records get `0..=max_span` with each
    /// sentence's text taken from the longest argument that covers exactly
    /// that sentence (empty if there is none).
    pub fn finish(self) -> Result<Corpus> {
        let mut documents = BTreeMap::new();
        for (id, pending) in self.docs {
            let explicit = !pending.sentences.is_empty();
            let count = if explicit {
                let count = pending.sentences.len();
                if let Some((&last, _)) = pending.sentences.iter().next_back() {
                    if last + 1 != count {
                        let missing = (0..count).find(|i| !pending.sentences.contains_key(i));
                        return Err(Error::DanglingSpan {
                            line: 0,
                            message: format!(
                                "document {id} skips sentence {}",
                                missing.unwrap_or(count)
                            ),
                        });
                    }
                }
                for (line, rel) in &pending.relations {
                    for span in [rel.arg1.span, rel.arg2.span] {
                        if span.last >= count {
                            return Err(Error::DanglingSpan {
                                line: *line,
                                message: format!(
                                    "sentence {} is outside document {id} ({count} sentences)",
                                    span.last
                                ),
                            });
                        }
                    }
                }
                count
            } else {
                pending
                    .relations
                    .iter()
                    .map(|(_, r)| r.arg1.span.last.max(r.arg2.span.last) + 1)
                    .max()
                    .unwrap_or(0)
            };

            let relations: Vec<RelationRecord> =
                pending.relations.into_iter().map(|(_, r)| r).collect();
            let texts: Vec<String> = if explicit {
                pending.sentences.into_values().collect()
            } else {
                reconstruct_texts(count, &relations)
            };
            let sentences = texts
                .into_iter()
                .enumerate()
                .map(|(i, text)| SentenceRecord {
                    section_number: id.section,
                    file_number: id.file,
                    sentence_number: i,
                    text,
                })
                .collect();
            documents.insert(
                id,
                Document {
                    sentences,
                    relations,
                },
            );
        }
        Ok(Corpus { documents })
    }
}

fn reconstruct_texts(count: usize, relations: &[RelationRecord]) -> Vec<String> {
    let mut texts = vec![String::new(); count];
    for arg in relations.iter().flat_map(|r| [&r.arg1, &r.arg2]) {
        if arg.span.len() == 1 {
            let slot = &mut texts[arg.span.first];
            if arg.text.len() > slot.len() {
                *slot = arg.text.clone();
            }
        }
    }
    texts
}
