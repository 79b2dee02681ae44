//! A bag-of-tokens softmax classifier over the four top-level classes.
//!
//! [`TextClassifier`] bundles everything needed to go from an [`Example`]
//! to a prediction: the encoding spec, the vocabulary built on the training
//! split, the feature weighting and the trained parameters. It serializes
//! to a single JSON checkpoint.

pub mod features;
pub mod model;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::ClassLabel;
use crate::dataset::{encode, EncodedExample, EncodingSpec, Vocab};
use crate::error::{Error, Result};
use crate::metrics::ConfusionMatrix;
use crate::windowing::Example;

pub use features::{FeatureVector, Featurizer, Weighting};
pub use model::{EpochReport, ModelParams, Sample, TrainConfig, TrainOutcome};

pub const CHECKPOINT_FORMAT: &str = "pdtb-windows/softmax";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextClassifier {
    pub format: String,
    pub version: u32,
    pub classes: Vec<ClassLabel>,
    pub encoding: EncodingSpec,
    pub vocab: Vocab,
    pub featurizer: Featurizer,
    pub params: ModelParams,
}

impl TextClassifier {
    /// Build the vocabulary and features on `train` and fit the model,
    /// calling `on_epoch` with each epoch's report and current classifier.
    pub fn fit_with<F>(
        train: &[Example],
        encoding: &EncodingSpec,
        weighting: Weighting,
        config: TrainConfig,
        mut on_epoch: F,
    ) -> Result<(Self, Vec<EpochReport>)>
    where
        F: FnMut(&EpochReport, &TextClassifier) -> Result<()>,
    {
        if train.is_empty() {
            return Err(Error::EmptyTrainingSet);
        }
        let vocab = Vocab::build(encoding, train)?;
        let encoded = train
            .iter()
            .map(|e| encode(e, encoding, &vocab))
            .collect::<Result<Vec<EncodedExample>>>()?;
        let featurizer = Featurizer::fit(vocab.len(), weighting, &encoded);
        let samples: Vec<Sample> = encoded
            .iter()
            .zip(train)
            .map(|(enc, e)| (featurizer.transform(enc), e.label))
            .collect();
        let mut snapshot = TextClassifier {
            format: CHECKPOINT_FORMAT.into(),
            version: CHECKPOINT_VERSION,
            classes: ClassLabel::ALL.to_vec(),
            encoding: encoding.clone(),
            vocab,
            featurizer,
            params: ModelParams::zeros(0, config),
        };
        let outcome = model::train_with(
            &samples,
            snapshot.featurizer.dim,
            config,
            |report, params| {
                snapshot.params = params.clone();
                on_epoch(report, &snapshot)
            },
        )?;
        snapshot.params = outcome.params;
        Ok((snapshot, outcome.history))
    }

    pub fn fit(
        train: &[Example],
        encoding: &EncodingSpec,
        weighting: Weighting,
        config: TrainConfig,
    ) -> Result<(Self, Vec<EpochReport>)> {
        Self::fit_with(train, encoding, weighting, config, |_, _| Ok(()))
    }

    pub fn features(&self, example: &Example) -> Result<FeatureVector> {
        Ok(self
            .featurizer
            .transform(&encode(example, &self.encoding, &self.vocab)?))
    }

    pub fn predict_proba(&self, example: &Example) -> Result<[f64; ClassLabel::COUNT]> {
        model::predict_proba(&self.params, &self.features(example)?)
    }

    pub fn predict(&self, example: &Example) -> Result<ClassLabel> {
        model::predict(&self.params, &self.features(example)?)
    }

    pub fn evaluate(&self, examples: &[Example]) -> Result<ConfusionMatrix> {
        let mut cm = ConfusionMatrix::default();
        for e in examples {
            cm.add(e.label, self.predict(e)?);
        }
        Ok(cm)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| Error::json("serializing checkpoint", e))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let clf: Self =
            serde_json::from_str(text).map_err(|e| Error::json("reading checkpoint", e))?;
        clf.check()?;
        Ok(clf)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)
            .map_err(|e| Error::io(format!("writing {}", path.display()), e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::MissingInput(path.to_path_buf()));
        }
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        Self::from_json(&text)
    }

    fn check(&self) -> Result<()> {
        if self.format != CHECKPOINT_FORMAT || self.version != CHECKPOINT_VERSION {
            return Err(Error::InvalidConfig(format!(
                "unsupported checkpoint {} v{}",
                self.format, self.version
            )));
        }
        if self.classes != ClassLabel::ALL {
            return Err(Error::InvalidConfig(
                "checkpoint class order differs".into(),
            ));
        }
        self.encoding.validate()?;
        let dim = self.vocab.len();
        if self.featurizer.dim != dim
            || self.params.dim != dim
            || self.params.weights.len() != ClassLabel::COUNT * dim
            || (self.featurizer.weighting == Weighting::TfIdf && self.featurizer.idf.len() != dim)
        {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: self.params.dim,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::windowing::Origin;
    use ClassLabel::*;

    fn ex(arg1: &str, arg2: &str, label: ClassLabel) -> Example {
        Example {
            context_before: vec![],
            arg1: arg1.into(),
            arg2: arg2.into(),
            context_after: vec![],
            label,
            origin: Origin {
                section: 0,
                file: 0,
                sentence: 0,
            },
        }
    }

    fn toy() -> Vec<Example> {
        vec![
            ex("It rained.", "Then the sun came out.", Temporal),
            ex("It rained.", "So the game was cancelled.", Contingency),
            ex("It rained.", "But the game went on.", Comparison),
            ex("It rained.", "Also it was cold.", Expansion),
            ex("He left.", "Then she arrived.", Temporal),
            ex("He left.", "So she stayed.", Contingency),
            ex("He left.", "But she stayed.", Comparison),
            ex("He left.", "Also she left.", Expansion),
        ]
    }

    #[test]
    fn learns_cue_words() {
        let config = TrainConfig {
            epochs: 200,
            ..Default::default()
        };
        let (clf, history) =
            TextClassifier::fit(&toy(), &EncodingSpec::default(), Weighting::TfIdf, config)
                .unwrap();
        assert_eq!(history.len(), 200);
        let cm = clf.evaluate(&toy()).unwrap();
        assert_eq!(cm.correct(), 8);
        assert_eq!(
            clf.predict(&ex("We ate.", "Then we slept.", Expansion))
                .unwrap(),
            Temporal
        );
    }

    #[test]
    fn checkpoint_round_trip() {
        let (clf, _) = TextClassifier::fit(
            &toy(),
            &EncodingSpec::default(),
            Weighting::Counts,
            TrainConfig::default(),
        )
        .unwrap();
        let back = TextClassifier::from_json(&clf.to_json().unwrap()).unwrap();
        assert_eq!(back, clf);
        let mut bad: serde_json::Value = serde_json::from_str(&clf.to_json().unwrap()).unwrap();
        bad["version"] = 2.into();
        assert!(TextClassifier::from_json(&bad.to_string()).is_err());
    }

    #[test]
    fn observer_sees_every_epoch() {
        let mut seen = Vec::new();
        let config = TrainConfig {
            epochs: 3,
            ..Default::default()
        };
        TextClassifier::fit_with(
            &toy(),
            &EncodingSpec::default(),
            Weighting::TfIdf,
            config,
            |r, clf| {
                seen.push((r.epoch, clf.params.weights.iter().any(|w| *w != 0.0)));
                Ok(())
            },
        )
        .unwrap();
        assert_eq!(seen, [(1, true), (2, true), (3, true)]);
    }
}
