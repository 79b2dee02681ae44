//! Section-based splits, fixed-length encoding and the JSONL exchange format.

pub mod encode;
pub mod jsonl;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::windowing::Dataset;

pub use encode::{encode, tokenize, EncodedExample, EncodingSpec, Vocab};
pub use jsonl::{emit_jsonl, ingest_jsonl, read_jsonl, write_jsonl};

/// Which sections go to training and which to testing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_sections: BTreeSet<u8>,
    pub test_sections: BTreeSet<u8>,
}

impl Default for SplitSpec {
    /// Sections 0-22 for training and 23 for testing; 24 is left out.
    fn default() -> Self {
        Self {
            train_sections: (0..=22).collect(),
            test_sections: [23].into_iter().collect(),
        }
    }
}

impl SplitSpec {
    pub fn new(train_sections: BTreeSet<u8>, test_sections: BTreeSet<u8>) -> Result<Self> {
        let spec = Self {
            train_sections,
            test_sections,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(s) = self.train_sections.intersection(&self.test_sections).next() {
            return Err(Error::InvalidConfig(format!(
                "section {s} is in both the train and the test split"
            )));
        }
        if let Some(s) = self
            .train_sections
            .iter()
            .chain(&self.test_sections)
            .find(|&&s| s > 24)
        {
            return Err(Error::InvalidConfig(format!("section {s} outside 0-24")));
        }
        Ok(())
    }
}

/// Parse a section list such as `0-22` or `0,3,5-7`.
pub fn parse_sections(text: &str) -> Result<BTreeSet<u8>> {
    let bad = || Error::InvalidConfig(format!("bad section list {text:?}"));
    let mut out = BTreeSet::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((lo, hi)) => {
                let lo: u8 = lo.trim().parse().map_err(|_| bad())?;
                let hi: u8 = hi.trim().parse().map_err(|_| bad())?;
                if lo > hi {
                    return Err(bad());
                }
                out.extend(lo..=hi);
            }
            None => {
                out.insert(part.parse().map_err(|_| bad())?);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub train: Dataset,
    pub test: Dataset,
    /// Examples from sections in neither set.
    pub dropped: usize,
}

impl Split {
    /// `|train| / (|train| + |test|)`, or `None` when both are empty.
    pub fn train_fraction(&self) -> Option<f64> {
        let total = self.train.len() + self.test.len();
        (total > 0).then(|| self.train.len() as f64 / total as f64)
    }
}

/// Partition `dataset` by the section each example came from.
pub fn split(dataset: &Dataset, spec: &SplitSpec) -> Result<Split> {
    spec.validate()?;
    let empty = || Dataset {
        strategy: dataset.strategy,
        examples: Vec::new(),
        excluded: 0,
    };
    let mut out = Split {
        train: empty(),
        test: empty(),
        dropped: 0,
    };
    for example in &dataset.examples {
        let section = example.origin.section;
        if spec.train_sections.contains(&section) {
            out.train.examples.push(example.clone());
        } else if spec.test_sections.contains(&section) {
            out.test.examples.push(example.clone());
        } else {
            out.dropped += 1;
        }
    }
    Ok(out)
}
