//! Multinomial logistic regression trained by full-batch gradient descent.
//!
//! The objective is the mean softmax cross-entropy plus `l2 / 2 * |W|^2`
//! (the bias is not regularized). Parameters start at zero, so training is
//! a deterministic function of data and config.

use serde::{Deserialize, Serialize};

use super::features::FeatureVector;
use crate::corpus::ClassLabel;
use crate::error::{Error, Result};

const K: usize = ClassLabel::COUNT;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2: f64,
    /// Recorded with the model. Zero-initialized full-batch descent does
    /// not draw random numbers.
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.5,
            epochs: 10,
            l2: 1e-4,
            seed: 42,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::InvalidConfig(
                "learning rate must be positive".into(),
            ));
        }
        if !(self.l2.is_finite() && self.l2 >= 0.0) {
            return Err(Error::InvalidConfig(
                "l2 strength must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

/// Weight matrix (`4 x dim`, row-major by class) and bias.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub dim: usize,
    pub weights: Vec<f64>,
    pub bias: [f64; K],
    pub config: TrainConfig,
}

impl ModelParams {
    pub fn zeros(dim: usize, config: TrainConfig) -> Self {
        Self {
            dim,
            weights: vec![0.0; K * dim],
            bias: [0.0; K],
            config,
        }
    }

    pub fn row(&self, class: usize) -> &[f64] {
        &self.weights[class * self.dim..(class + 1) * self.dim]
    }

    fn check(&self, x: &FeatureVector) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: x.dim(),
            });
        }
        Ok(())
    }

    pub fn logits(&self, x: &FeatureVector) -> Result<[f64; K]> {
        self.check(x)?;
        let mut z = self.bias;
        for (c, zc) in z.iter_mut().enumerate() {
            let row = self.row(c);
            *zc += x
                .entries()
                .iter()
                .map(|&(i, v)| row[i as usize] * v)
                .sum::<f64>();
        }
        Ok(z)
    }

    pub fn is_finite(&self) -> bool {
        self.weights.iter().chain(&self.bias).all(|v| v.is_finite())
    }
}

pub fn softmax(z: &[f64; K]) -> [f64; K] {
    let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut p = z.map(|v| (v - max).exp());
    let total: f64 = p.iter().sum();
    for v in &mut p {
        *v /= total;
    }
    p
}

pub fn predict_proba(params: &ModelParams, x: &FeatureVector) -> Result<[f64; K]> {
    Ok(softmax(&params.logits(x)?))
}

pub fn predict(params: &ModelParams, x: &FeatureVector) -> Result<ClassLabel> {
    let p = predict_proba(params, x)?;
    let best = (0..K).fold(0, |best, c| if p[c] > p[best] { c } else { best });
    Ok(ClassLabel::ALL[best])
}

/// A labeled training instance.
pub type Sample = (FeatureVector, ClassLabel);

/// Objective value on `batch`: mean cross-entropy plus the L2 penalty.
pub fn loss(params: &ModelParams, batch: &[Sample]) -> Result<f64> {
    let mut total = 0.0;
    for (x, y) in batch {
        let z = params.logits(x)?;
        let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lse = max + z.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
        total += lse - z[y.index()];
    }
    let penalty = 0.5 * params.config.l2 * params.weights.iter().map(|w| w * w).sum::<f64>();
    Ok(total / batch.len().max(1) as f64 + penalty)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub weights: Vec<f64>,
    pub bias: [f64; K],
}

/// Analytic gradient of [`loss`]: `mean((p - y) x^T) + l2 * W` for the
/// weights and `mean(p - y)` for the bias.
pub fn gradient(params: &ModelParams, batch: &[Sample]) -> Result<Gradient> {
    let dim = params.dim;
    let mut g = Gradient {
        weights: vec![0.0; K * dim],
        bias: [0.0; K],
    };
    let scale = 1.0 / batch.len().max(1) as f64;
    for (x, y) in batch {
        let mut delta = predict_proba(params, x)?;
        delta[y.index()] -= 1.0;
        for (c, d) in delta.iter().enumerate() {
            g.bias[c] += d * scale;
            let row = &mut g.weights[c * dim..(c + 1) * dim];
            for &(i, v) in x.entries() {
                row[i as usize] += d * v * scale;
            }
        }
    }
    let l2 = params.config.l2;
    if l2 > 0.0 {
        for (gw, w) in g.weights.iter_mut().zip(&params.weights) {
            *gw += l2 * w;
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpochReport {
    pub epoch: usize,
    /// Objective after this epoch's update.
    pub loss: f64,
    pub train_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutcome {
    pub params: ModelParams,
    pub history: Vec<EpochReport>,
}

/// Train from zero parameters, calling `on_epoch` after every epoch.
pub fn train_with<F>(
    train: &[Sample],
    dim: usize,
    config: TrainConfig,
    mut on_epoch: F,
) -> Result<TrainOutcome>
where
    F: FnMut(&EpochReport, &ModelParams) -> Result<()>,
{
    config.validate()?;
    if train.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    let mut params = ModelParams::zeros(dim, config);
    let mut history = Vec::with_capacity(config.epochs);
    for epoch in 1..=config.epochs {
        let g = gradient(&params, train)?;
        for (w, gw) in params.weights.iter_mut().zip(&g.weights) {
            *w -= config.learning_rate * gw;
        }
        for (b, gb) in params.bias.iter_mut().zip(&g.bias) {
            *b -= config.learning_rate * gb;
        }
        let loss = loss(&params, train)?;
        if !loss.is_finite() || !params.is_finite() {
            return Err(Error::Diverged { epoch, loss });
        }
        let mut correct = 0;
        for (x, y) in train {
            if predict(&params, x)? == *y {
                correct += 1;
            }
        }
        let report = EpochReport {
            epoch,
            loss,
            train_accuracy: correct as f64 / train.len() as f64,
        };
        on_epoch(&report, &params)?;
        history.push(report);
    }
    Ok(TrainOutcome { params, history })
}

pub fn train(train: &[Sample], dim: usize, config: TrainConfig) -> Result<TrainOutcome> {
    train_with(train, dim, config, |_, _| Ok(()))
}
