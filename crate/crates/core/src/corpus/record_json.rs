//! `record-json`: a line-oriented JSON sidecar mirroring the pipe format.
//!
//! Every line is one JSON object, UTF-8, LF-terminated. A relation line has
//! the keys
//!
//! ```text
//! {"kind", "senses", "section", "file", "arg1_sentences", "arg2_sentences", "arg1_text", "arg2_text"}
//! ```
//!
//! where `*_sentences` are lists of sentence indices (normalized to their
//! covering range). A document may also list its sentences with lines of
//! the form `{"section", "file", "sentence", "text"}`; if it does, the list
//! must be contiguous from 0 and cover every argument. Documents without
//! sentence lines get sentences reconstructed as in the pipe format.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Argument, Corpus, CorpusBuilder, DocId, RelationKind, RelationRecord, SentenceSpan};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationLine {
    kind: RelationKind,
    senses: Vec<String>,
    section: u8,
    file: u16,
    arg1_sentences: Vec<usize>,
    arg2_sentences: Vec<usize>,
    arg1_text: String,
    arg2_text: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SentenceLine {
    section: u8,
    file: u16,
    sentence: usize,
    text: String,
}

pub fn parse(text: &str) -> Result<Corpus> {
    let mut builder = CorpusBuilder::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(raw).map_err(|e| Error::Malformed {
            line,
            message: e.to_string(),
        })?;
        let schema = |e: serde_json::Error| Error::Schema {
            line,
            message: e.to_string(),
        };
        if value.get("kind").is_some() {
            let rec: RelationLine = serde_json::from_value(value).map_err(schema)?;
            if rec.section > 24 {
                return Err(Error::Schema {
                    line,
                    message: format!("section {} outside 0-24", rec.section),
                });
            }
            let span = |indices: Vec<usize>, which: &str| {
                SentenceSpan::covering(indices).ok_or_else(|| Error::DanglingSpan {
                    line,
                    message: format!("{which} has no sentence reference"),
                })
            };
            let relation = RelationRecord {
                kind: rec.kind,
                senses: rec.senses,
                arg1: Argument {
                    span: span(rec.arg1_sentences, "Arg1")?,
                    text: rec.arg1_text,
                },
                arg2: Argument {
                    span: span(rec.arg2_sentences, "Arg2")?,
                    text: rec.arg2_text,
                },
            };
            builder.add_relation(line, DocId::new(rec.section, rec.file), relation)?;
        } else {
            let rec: SentenceLine = serde_json::from_value(value).map_err(schema)?;
            builder.add_sentence(
                line,
                DocId::new(rec.section, rec.file),
                rec.sentence,
                rec.text,
            )?;
        }
    }
    builder.finish()
}

pub fn serialize(corpus: &Corpus) -> Result<String> {
    let mut out = String::new();
    for (id, doc) in corpus.documents() {
        for s in &doc.sentences {
            push_line(
                &mut out,
                &SentenceLine {
                    section: id.section,
                    file: id.file,
                    sentence: s.sentence_number,
                    text: s.text.clone(),
                },
            )?;
        }
        for r in &doc.relations {
            push_line(
                &mut out,
                &RelationLine {
                    kind: r.kind,
                    senses: r.senses.clone(),
                    section: id.section,
                    file: id.file,
                    arg1_sentences: r.arg1.span.indices().collect(),
                    arg2_sentences: r.arg2.span.indices().collect(),
                    arg1_text: r.arg1.text.clone(),
                    arg2_text: r.arg2.text.clone(),
                },
            )?;
        }
    }
    Ok(out)
}

fn push_line<T: Serialize>(out: &mut String, value: &T) -> Result<()> {
    let line =
        serde_json::to_string(value).map_err(|e| Error::json("serializing corpus line", e))?;
    out.push_str(&line);
    out.push('\n');
    Ok(())
}
