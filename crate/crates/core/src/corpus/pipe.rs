//! The pipe-delimited relation format of the PDTB 2.0 distribution.
//!
//! One relation per line, 48 `|`-separated fields. Only the fields below
//! are read; the rest (connective spans, attribution, supplements) are
//! ignored on input and written empty on output.
//!
//! | index | field                                   |
//! |-------|-----------------------------------------|
//! | 0     | relation type (`Implicit`, `Explicit`, `EntRel`, `AltLex`, `NoRel`) |
//! | 1     | section number                          |
//! | 2     | file number                             |
//! | 7     | sentence number (written as Arg2's first sentence) |
//! | 11–14 | semantic classes (ConnHead/Conn1 1st, 2nd; Conn2 1st, 2nd) |
//! | 23    | Arg1 Gorn address list                  |
//! | 24    | Arg1 raw text                           |
//! | 33    | Arg2 Gorn address list                  |
//! | 34    | Arg2 raw text                           |
//!
//! A Gorn address list looks like `3,0;3,1,2;4`; the first component of
//! each address is the sentence index, so an argument maps to the covering
//! range of those indices. Sentence texts are not part of this format and
//! are reconstructed from the arguments.

use super::{Argument, Corpus, CorpusBuilder, DocId, RelationKind, RelationRecord, SentenceSpan};
use crate::error::{Error, Result};

pub const FIELD_COUNT: usize = 48;

const KIND: usize = 0;
const SECTION: usize = 1;
const FILE: usize = 2;
const SENTENCE_NUMBER: usize = 7;
const SENSES: [usize; 4] = [11, 12, 13, 14];
const ARG1_GORN: usize = 23;
const ARG1_TEXT: usize = 24;
const ARG2_GORN: usize = 33;
const ARG2_TEXT: usize = 34;

pub fn parse(text: &str) -> Result<Corpus> {
    let mut builder = CorpusBuilder::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split('|').collect();
        if fields.len() != FIELD_COUNT {
            return Err(Error::Malformed {
                line,
                message: format!("expected {FIELD_COUNT} fields, found {}", fields.len()),
            });
        }
        let kind: RelationKind = fields[KIND]
            .trim()
            .parse()
            .map_err(|message| Error::Malformed { line, message })?;
        let section = parse_number::<u8>(fields[SECTION], "section number", line)?;
        if section > 24 {
            return Err(Error::Malformed {
                line,
                message: format!("section number {section} outside 0-24"),
            });
        }
        let file = parse_number::<u16>(fields[FILE], "file number", line)?;
        let senses = if kind.keeps_senses() {
            SENSES
                .iter()
                .map(|&i| fields[i].trim())
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect()
        } else {
            Vec::new()
        };
        let arg1 = Argument {
            span: gorn_span(fields[ARG1_GORN], "Arg1", line)?,
            text: fields[ARG1_TEXT].to_string(),
        };
        let arg2 = Argument {
            span: gorn_span(fields[ARG2_GORN], "Arg2", line)?,
            text: fields[ARG2_TEXT].to_string(),
        };
        builder.add_relation(
            line,
            DocId::new(section, file),
            RelationRecord {
                kind,
                senses,
                arg1,
                arg2,
            },
        )?;
    }
    builder.finish()
}

fn parse_number<T: std::str::FromStr>(field: &str, what: &str, line: usize) -> Result<T> {
    field.trim().parse().map_err(|_| Error::Malformed {
        line,
        message: format!("invalid {what} {field:?}"),
    })
}

fn gorn_span(field: &str, which: &str, line: usize) -> Result<SentenceSpan> {
    let mut indices = Vec::new();
    for address in field.split(';').map(str::trim).filter(|a| !a.is_empty()) {
        let head = address.split(',').next().unwrap_or_default();
        indices.push(parse_number::<usize>(head, "Gorn address", line)?);
    }
    SentenceSpan::covering(indices).ok_or_else(|| Error::DanglingSpan {
        line,
        message: format!("{which} has no sentence reference"),
    })
}

fn gorn_list(span: SentenceSpan) -> String {
    span.indices()
        .map(|i| format!("{i},0"))
        .collect::<Vec<_>>()
        .join(";")
}

fn check_field(text: &str) -> Result<&str> {
    if text.contains(['|', '\n', '\r']) {
        return Err(Error::InvalidConfig(format!(
            "text {text:?} cannot be written in pipe format"
        )));
    }
    Ok(text)
}

/// Write `corpus` in pipe format, one relation per line in document order.
///
/// Sentences that no argument covers on its own are not representable and
/// come back with empty text after a round trip.
pub fn serialize(corpus: &Corpus) -> Result<String> {
    let mut out = String::new();
    for (id, doc) in corpus.documents() {
        for rel in &doc.relations {
            let mut fields = vec![String::new(); FIELD_COUNT];
            fields[KIND] = rel.kind.name().to_string();
            fields[SECTION] = format!("{:02}", id.section);
            fields[FILE] = format!("{:02}", id.file);
            fields[SENTENCE_NUMBER] = rel.arg2.span.first.to_string();
            for (slot, sense) in SENSES.iter().zip(&rel.senses) {
                fields[*slot] = check_field(sense)?.to_string();
            }
            if rel.senses.len() > SENSES.len() {
                return Err(Error::InvalidConfig(format!(
                    "pipe format holds at most {} senses",
                    SENSES.len()
                )));
            }
            fields[ARG1_GORN] = gorn_list(rel.arg1.span);
            fields[ARG1_TEXT] = check_field(&rel.arg1.text)?.to_string();
            fields[ARG2_GORN] = gorn_list(rel.arg2.span);
            fields[ARG2_TEXT] = check_field(&rel.arg2.text)?.to_string();
            out.push_str(&fields.join("|"));
            out.push('\n');
        }
    }
    Ok(out)
}
