//! JSONL exchange format for windowed examples.
//!
//! One example per line, keys in this order:
//!
//! ```text
//! {"context_before": [str], "arg1": str, "arg2": str, "context_after": [str],
//!  "label": "Temporal|Contingency|Comparison|Expansion",
//!  "section": int, "file": int, "sentence": int}
//! ```
//!
//! `sentence` is the first sentence of Arg2 and completes the example's
//! origin so that a round trip is lossless.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::ClassLabel;
use crate::error::{Error, Result};
use crate::windowing::{Dataset, Example, Origin};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Line {
    context_before: Vec<String>,
    arg1: String,
    arg2: String,
    context_after: Vec<String>,
    label: ClassLabel,
    section: u8,
    file: u16,
    sentence: usize,
}

impl From<&Example> for Line {
    fn from(e: &Example) -> Self {
        Line {
            context_before: e.context_before.clone(),
            arg1: e.arg1.clone(),
            arg2: e.arg2.clone(),
            context_after: e.context_after.clone(),
            label: e.label,
            section: e.origin.section,
            file: e.origin.file,
            sentence: e.origin.sentence,
        }
    }
}

impl From<Line> for Example {
    fn from(l: Line) -> Self {
        Example {
            context_before: l.context_before,
            arg1: l.arg1,
            arg2: l.arg2,
            context_after: l.context_after,
            label: l.label,
            origin: Origin {
                section: l.section,
                file: l.file,
                sentence: l.sentence,
            },
        }
    }
}

pub fn write_jsonl<'a, W: Write>(
    examples: impl IntoIterator<Item = &'a Example>,
    mut out: W,
) -> Result<()> {
    for e in examples {
        let line = serde_json::to_string(&Line::from(e))
            .map_err(|e| Error::json("serializing example", e))?;
        writeln!(out, "{line}").map_err(|e| Error::io("writing JSONL", e))?;
    }
    out.flush().map_err(|e| Error::io("writing JSONL", e))
}

pub fn read_jsonl<R: BufRead>(input: R) -> Result<Vec<Example>> {
    let mut examples = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::io("reading JSONL", e))?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: Line = serde_json::from_str(&line).map_err(|e| Error::Schema {
            line: i + 1,
            message: e.to_string(),
        })?;
        examples.push(parsed.into());
    }
    Ok(examples)
}

pub fn emit_jsonl(dataset: &Dataset, path: &Path) -> Result<()> {
    let file =
        File::create(path).map_err(|e| Error::io(format!("creating {}", path.display()), e))?;
    write_jsonl(&dataset.examples, BufWriter::new(file))
}

/// Read the examples of a dataset written by [`emit_jsonl`].
pub fn ingest_jsonl(path: &Path) -> Result<Vec<Example>> {
    let file = File::open(path).map_err(|_| Error::MissingInput(path.to_path_buf()))?;
    read_jsonl(BufReader::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{generate_synthetic, SyntheticConfig};
    use crate::windowing::{build, WindowStrategy};

    #[test]
    fn emit_then_ingest_is_lossless() {
        let corpus = generate_synthetic(&SyntheticConfig {
            documents: 10,
            ..Default::default()
        })
        .unwrap();
        let ds = build(&corpus, WindowStrategy::ExpandedWindow { n: 4 }).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ds.jsonl");
        emit_jsonl(&ds, &path).unwrap();
        let back = ingest_jsonl(&path).unwrap();
        assert_eq!(back, ds.examples);
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), ds.len());
        assert!(text
            .lines()
            .next()
            .unwrap()
            .starts_with("{\"context_before\":["));
    }

    #[test]
    fn missing_label_is_reported_at_its_line() {
        let text = concat!(
            r#"{"context_before":[],"arg1":"a","arg2":"b","context_after":[],"label":"Temporal","section":0,"file":1,"sentence":1}"#,
            "\n",
            r#"{"context_before":[],"arg1":"a","arg2":"b","context_after":[],"section":0,"file":1,"sentence":1}"#,
            "\n"
        );
        match read_jsonl(text.as_bytes()) {
            Err(Error::Schema { line, message }) => {
                assert_eq!(line, 2);
                assert!(message.contains("label"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_label_is_a_schema_error() {
        let text = r#"{"context_before":[],"arg1":"a","arg2":"b","context_after":[],"label":"EntRel","section":0,"file":1,"sentence":1}"#;
        assert!(matches!(
            read_jsonl(text.as_bytes()),
            Err(Error::Schema { line: 1, .. })
        ));
    }
}
