//! Sparse bag-of-token features over encoded examples.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dataset::EncodedExample;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Weighting {
    Counts,
    #[default]
    TfIdf,
}

/// Sparse vector with strictly increasing indices and finite weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    dim: usize,
    entries: Vec<(u32, f64)>,
}

impl FeatureVector {
    pub fn new(dim: usize, mut entries: Vec<(u32, f64)>) -> Result<Self> {
        entries.sort_by_key(|&(i, _)| i);
        for pair in entries.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::InvalidConfig(format!(
                    "duplicate feature index {}",
                    pair[0].0
                )));
            }
        }
        if let Some(&(i, _)) = entries.last() {
            if i as usize >= dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: i as usize + 1,
                });
            }
        }
        if entries.iter().any(|(_, w)| !w.is_finite()) {
            return Err(Error::InvalidConfig("non-finite feature weight".into()));
        }
        Ok(Self { dim, entries })
    }

    /// Dense view, mostly useful in tests.
    pub fn from_dense(values: &[f64]) -> Result<Self> {
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, v)| (i as u32, *v))
            .collect();
        Self::new(values.len(), entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }
}

/// Maps encoded token streams to L2-normalized feature vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Featurizer {
    pub dim: usize,
    pub weighting: Weighting,
    /// Smoothed inverse document frequency per token id; empty for counts.
    pub idf: Vec<f64>,
}

impl Featurizer {
    pub fn fit(dim: usize, weighting: Weighting, corpus: &[EncodedExample]) -> Self {
        let idf = match weighting {
            Weighting::Counts => Vec::new(),
            Weighting::TfIdf => {
                let mut df = vec![0usize; dim];
                for enc in corpus {
                    let mut seen: Vec<u32> = enc
                        .tokens()
                        .iter()
                        .copied()
                        .filter(|&t| (t as usize) < dim)
                        .collect();
                    seen.sort_unstable();
                    seen.dedup();
                    for t in seen {
                        df[t as usize] += 1;
                    }
                }
                let n = corpus.len() as f64;
                df.iter()
                    .map(|&d| ((1.0 + n) / (1.0 + d as f64)).ln() + 1.0)
                    .collect()
            }
        };
        Self {
            dim,
            weighting,
            idf,
        }
    }

    pub fn transform(&self, enc: &EncodedExample) -> FeatureVector {
        let mut counts: BTreeMap<u32, f64> = BTreeMap::new();
        for &t in enc.tokens() {
            // Ids beyond the fitted vocabulary are dropped.
            if (t as usize) < self.dim {
                *counts.entry(t).or_insert(0.0) += 1.0;
            }
        }
        let mut entries: Vec<(u32, f64)> = counts
            .into_iter()
            .map(|(t, c)| match self.weighting {
                Weighting::Counts => (t, c),
                Weighting::TfIdf => (t, c * self.idf[t as usize]),
            })
            .collect();
        let norm = entries.iter().map(|(_, w)| w * w).sum::<f64>().sqrt();
        if norm > 0.0 {
            for (_, w) in &mut entries {
                *w /= norm;
            }
        }
        FeatureVector {
            dim: self.dim,
            entries,
        }
    }
}
