//! Classification metrics and significance tests.

pub mod student_t;
pub mod ttest;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::ClassLabel;
use crate::error::{Error, Result};

pub use student_t::student_t_cdf;
pub use ttest::{compare_models, two_sample_ttest, Comparison, Side, TTestResult, TTestVariant};

const K: usize = ClassLabel::COUNT;

/// Rows are true classes, columns predicted classes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub counts: [[u64; K]; K],
}

impl ConfusionMatrix {
    pub fn new(counts: [[u64; K]; K]) -> Self {
        Self { counts }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (ClassLabel, ClassLabel)>) -> Self {
        let mut cm = Self::default();
        for (truth, predicted) in pairs {
            cm.add(truth, predicted);
        }
        cm
    }

    pub fn add(&mut self, truth: ClassLabel, predicted: ClassLabel) {
        self.counts[truth.index()][predicted.index()] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn correct(&self) -> u64 {
        (0..K).map(|i| self.counts[i][i]).sum()
    }

    pub fn support(&self, class: usize) -> u64 {
        self.counts[class].iter().sum()
    }

    pub fn predicted(&self, class: usize) -> u64 {
        self.counts.iter().map(|row| row[class]).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
    pub predicted: u64,
}

impl ClassMetrics {
    /// A class that neither occurs nor is predicted.
    pub fn is_absent(&self) -> bool {
        self.support == 0 && self.predicted == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub accuracy: f64,
    pub precision_w: f64,
    pub recall_w: f64,
    pub f1_w: f64,
    pub f1_macro: f64,
    pub per_class: BTreeMap<ClassLabel, ClassMetrics>,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Accuracy, per-class and averaged precision/recall/F1.
///
/// Per-class scores with a zero denominator are 0. Weighted averages use
/// true-class support. Macro F1 averages over the classes that occur in
/// the matrix at all (as truth or as prediction).
pub fn compute_metrics(cm: &ConfusionMatrix) -> Result<MetricsReport> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::EmptyConfusionMatrix);
    }
    let mut per_class = BTreeMap::new();
    for class in ClassLabel::ALL {
        let c = class.index();
        let tp = cm.counts[c][c];
        let support = cm.support(c);
        let predicted = cm.predicted(c);
        let precision = ratio(tp, predicted);
        let recall = ratio(tp, support);
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        per_class.insert(
            class,
            ClassMetrics {
                precision,
                recall,
                f1,
                support,
                predicted,
            },
        );
    }
    let n = total as f64;
    let weighted = |f: fn(&ClassMetrics) -> f64| {
        per_class
            .values()
            .map(|m| m.support as f64 * f(m))
            .sum::<f64>()
            / n
    };
    let present: Vec<&ClassMetrics> = per_class.values().filter(|m| !m.is_absent()).collect();
    Ok(MetricsReport {
        accuracy: ratio(cm.correct(), total),
        precision_w: weighted(|m| m.precision),
        // Support-weighted recall sums true positives over the total,
        // i.e. it is accuracy; compute it that way to keep them identical.
        recall_w: ratio(cm.correct(), total),
        f1_w: weighted(|m| m.f1),
        f1_macro: present.iter().map(|m| m.f1).sum::<f64>() / present.len() as f64,
        per_class,
    })
}

/// Which metric a comparison runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Accuracy,
    /// Support-weighted F1.
    F1,
}

impl Metric {
    pub fn of(self, report: &MetricsReport) -> f64 {
        match self {
            Metric::Accuracy => report.accuracy,
            Metric::F1 => report.f1_w,
        }
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "accuracy" => Ok(Metric::Accuracy),
            "f1" => Ok(Metric::F1),
            other => Err(Error::InvalidConfig(format!("unknown metric {other:?}"))),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Accuracy => "accuracy",
            Metric::F1 => "f1",
        })
    }
}

/// One evaluation as written to a metrics JSON file.
///
/// ```text
/// {"model", "strategy", "epoch", "accuracy", "precision_w", "recall_w",
///  "f1_w", "f1_macro", "per_class": {...}, "seed", "final"}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub model: String,
    pub strategy: String,
    pub epoch: usize,
    pub accuracy: f64,
    pub precision_w: f64,
    pub recall_w: f64,
    pub f1_w: f64,
    pub f1_macro: f64,
    pub per_class: BTreeMap<ClassLabel, ClassMetrics>,
    pub seed: u64,
    /// Set on the last epoch of a run.
    #[serde(default, rename = "final")]
    pub is_final: bool,
}

impl MetricsRecord {
    pub fn new(
        model: &str,
        strategy: &str,
        epoch: usize,
        seed: u64,
        is_final: bool,
        report: &MetricsReport,
    ) -> Self {
        Self {
            model: model.to_string(),
            strategy: strategy.to_string(),
            epoch,
            accuracy: report.accuracy,
            precision_w: report.precision_w,
            recall_w: report.recall_w,
            f1_w: report.f1_w,
            f1_macro: report.f1_macro,
            per_class: report.per_class.clone(),
            seed,
            is_final,
        }
    }

    pub fn report(&self) -> MetricsReport {
        MetricsReport {
            accuracy: self.accuracy,
            precision_w: self.precision_w,
            recall_w: self.recall_w,
            f1_w: self.f1_w,
            f1_macro: self.f1_macro,
            per_class: self.per_class.clone(),
        }
    }

    /// Check that every score lies in [0, 1].
    pub fn validate(&self) -> Result<()> {
        let scores = [
            self.accuracy,
            self.precision_w,
            self.recall_w,
            self.f1_w,
            self.f1_macro,
        ]
        .into_iter()
        .chain(
            self.per_class
                .values()
                .flat_map(|m| [m.precision, m.recall, m.f1]),
        );
        for v in scores {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidSample(format!(
                    "metric value {v} outside [0, 1]"
                )));
            }
        }
        if self.per_class.len() != ClassLabel::COUNT {
            return Err(Error::InvalidSample(
                "per_class must list all four classes".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ClassLabel::*;

    #[test]
    fn perfect_predictions() {
        let cm = ConfusionMatrix::new([[3, 0, 0, 0], [0, 5, 0, 0], [0, 0, 2, 0], [0, 0, 0, 9]]);
        let r = compute_metrics(&cm).unwrap();
        assert_eq!(r.accuracy, 1.0);
        assert_eq!(r.f1_macro, 1.0);
        assert_eq!(r.f1_w, 1.0);
    }

    #[test]
    fn all_predicted_as_first_class_on_two_balanced_classes() {
        let cm = ConfusionMatrix::from_pairs(
            std::iter::repeat_n((Temporal, Temporal), 5)
                .chain(std::iter::repeat_n((Contingency, Temporal), 5)),
        );
        let r = compute_metrics(&cm).unwrap();
        assert_eq!(r.accuracy, 0.5);
        assert!((r.per_class[&Temporal].f1 - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.per_class[&Contingency].f1, 0.0);
        assert!(r.per_class[&Comparison].is_absent());
        assert!(r.per_class[&Expansion].is_absent());
        assert!((r.f1_macro - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.recall_w, r.accuracy);
    }

    #[test]
    fn empty_matrix_is_an_error() {
        assert!(matches!(
            compute_metrics(&ConfusionMatrix::default()),
            Err(Error::EmptyConfusionMatrix)
        ));
    }

    #[test]
    fn metrics_record_json_field_names() {
        let cm = ConfusionMatrix::from_pairs([(Temporal, Temporal), (Expansion, Temporal)]);
        let rec = MetricsRecord::new(
            "softmax",
            "baseline",
            10,
            42,
            true,
            &compute_metrics(&cm).unwrap(),
        );
        let v: serde_json::Value = serde_json::to_value(&rec).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(
            keys,
            [
                "model",
                "strategy",
                "epoch",
                "accuracy",
                "precision_w",
                "recall_w",
                "f1_w",
                "f1_macro",
                "per_class",
                "seed",
                "final"
            ]
        );
        let classes: Vec<&str> = v["per_class"]
            .as_object()
            .unwrap()
            .keys()
            .map(String::as_str)
            .collect();
        assert_eq!(
            classes,
            ["Temporal", "Contingency", "Comparison", "Expansion"]
        );
        let back: MetricsRecord = serde_json::from_value(v).unwrap();
        assert_eq!(back, rec);
        rec.validate().unwrap();
    }
}
