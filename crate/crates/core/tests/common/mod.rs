//! Independent oracles shared by the integration tests.
//!
//! Nothing here calls the code under test for the quantity it checks.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use pdtb_windows::classifier::model::{loss, ModelParams, Sample, TrainConfig};
use pdtb_windows::classifier::FeatureVector;
use pdtb_windows::corpus::synthetic::placement_capacity;
use pdtb_windows::corpus::{ClassLabel, SyntheticConfig};
use rand::Rng;

/// Field-by-field metrics recomputed from expanded (truth, predicted)
/// pairs, scikit-learn style: zero-division gives 0 and macro F1 runs over
/// the labels seen in either column.
#[derive(Debug)]
pub struct OracleMetrics {
    pub accuracy: f64,
    pub precision_w: f64,
    pub recall_w: f64,
    pub f1_w: f64,
    pub f1_macro: f64,
    pub per_class: BTreeMap<usize, (f64, f64, f64, u64)>,
}

pub fn metrics_oracle(counts: &[[u64; 4]; 4]) -> OracleMetrics {
    let mut pairs = Vec::new();
    for (t, row) in counts.iter().enumerate() {
        for (p, &c) in row.iter().enumerate() {
            for _ in 0..c {
                pairs.push((t, p));
            }
        }
    }
    let n = pairs.len() as f64;
    let mut labels: Vec<usize> = pairs.iter().flat_map(|&(t, p)| [t, p]).collect();
    labels.sort_unstable();
    labels.dedup();
    let mut per_class = BTreeMap::new();
    for c in 0..4 {
        let tp = pairs.iter().filter(|&&(t, p)| t == c && p == c).count() as f64;
        let fp = pairs.iter().filter(|&&(t, p)| t != c && p == c).count() as f64;
        let fneg = pairs.iter().filter(|&&(t, p)| t == c && p != c).count() as f64;
        let precision = if tp + fp == 0.0 { 0.0 } else { tp / (tp + fp) };
        let recall = if tp + fneg == 0.0 {
            0.0
        } else {
            tp / (tp + fneg)
        };
        let f1 = if 2.0 * tp + fp + fneg == 0.0 {
            0.0
        } else {
            2.0 * tp / (2.0 * tp + fp + fneg)
        };
        per_class.insert(c, (precision, recall, f1, (tp + fneg) as u64));
    }
    let weighted = |pick: fn(&(f64, f64, f64, u64)) -> f64| {
        per_class
            .values()
            .map(|m| m.3 as f64 * pick(m))
            .sum::<f64>()
            / n
    };
    OracleMetrics {
        accuracy: pairs.iter().filter(|(t, p)| t == p).count() as f64 / n,
        precision_w: weighted(|m| m.0),
        recall_w: weighted(|m| m.1),
        f1_w: weighted(|m| m.2),
        f1_macro: labels.iter().map(|c| per_class[c].2).sum::<f64>() / labels.len() as f64,
        per_class,
    }
}

pub fn random_confusion<R: Rng>(rng: &mut R) -> [[u64; 4]; 4] {
    loop {
        let absent: Vec<bool> = (0..4).map(|_| rng.random_bool(0.2)).collect();
        let mut m = [[0u64; 4]; 4];
        for t in 0..4 {
            for p in 0..4 {
                if !absent[t] && !absent[p] {
                    m[t][p] = if rng.random_bool(0.3) {
                        0
                    } else {
                        rng.random_range(0..40)
                    };
                }
            }
        }
        if m.iter().flatten().sum::<u64>() > 0 {
            return m;
        }
    }
}

/// Gamma function at positive integers and half-integers by recursion
/// from Gamma(1) = 1 and Gamma(1/2) = sqrt(pi).
fn gamma_half_integer(x2: u32) -> f64 {
    // x = x2 / 2
    let (mut value, mut at) = if x2.is_multiple_of(2) {
        (1.0, 2)
    } else {
        (PI.sqrt(), 1)
    };
    while at < x2 {
        value *= at as f64 / 2.0;
        at += 2;
    }
    value
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// Student-t CDF for integer `df` by quadrature: with `x = sqrt(df) tan(u)`
/// the density integral becomes `c * int_0^atan(t / sqrt(df)) cos^(df-1)(u) du`.
pub fn t_cdf_quadrature(t: f64, df: u32) -> f64 {
    let c = gamma_half_integer(df + 1) / (PI.sqrt() * gamma_half_integer(df));
    let upper = (t.abs() / (df as f64).sqrt()).atan();
    let integrand = move |u: f64| u.cos().powi(df as i32 - 1);
    let half = c * adaptive_simpson(&integrand, 0.0, upper, 1e-15);
    if t >= 0.0 {
        0.5 + half
    } else {
        0.5 - half
    }
}

pub fn fv(values: &[f64]) -> FeatureVector {
    FeatureVector::from_dense(values).unwrap()
}

pub fn random_model_instance<R: Rng>(rng: &mut R) -> (ModelParams, Vec<Sample>) {
    let dim = rng.random_range(1..=8);
    let config = TrainConfig {
        l2: if rng.random_bool(0.5) {
            0.0
        } else {
            rng.random_range(0.0..0.5)
        },
        ..Default::default()
    };
    let mut params = ModelParams::zeros(dim, config);
    for w in &mut params.weights {
        *w = rng.random_range(-2.0..2.0);
    }
    for b in &mut params.bias {
        *b = rng.random_range(-2.0..2.0);
    }
    let batch = (0..rng.random_range(1..=10))
        .map(|_| {
            let x: Vec<f64> = (0..dim)
                .map(|_| {
                    if rng.random_bool(0.3) {
                        0.0
                    } else {
                        rng.random_range(-1.5..1.5)
                    }
                })
                .collect();
            (fv(&x), ClassLabel::ALL[rng.random_range(0..4)])
        })
        .collect();
    (params, batch)
}

/// Central-difference gradient of the training objective, flattened as
/// weights followed by bias.
pub fn numerical_gradient(params: &ModelParams, batch: &[Sample], h: f64) -> Vec<f64> {
    let n = params.weights.len();
    (0..n + 4)
        .map(|slot| {
            let nudge = |delta: f64| {
                let mut p = params.clone();
                if slot < n {
                    p.weights[slot] += delta;
                } else {
                    p.bias[slot - n] += delta;
                }
                loss(&p, batch).unwrap()
            };
            (nudge(h) - nudge(-h)) / (2.0 * h)
        })
        .collect()
}

/// Small random but feasible synthetic corpus configuration.
pub fn random_synthetic_config<R: Rng>(rng: &mut R) -> SyntheticConfig {
    let smin = rng.random_range(1..=6);
    let smax = smin + rng.random_range(0..=10);
    let capacity = placement_capacity(smin);
    let rmin = rng.random_range(0..=capacity.min(3));
    let rmax = rng.random_range(rmin..=capacity.min(rmin + 12));
    let mut mix = |k: usize| -> Vec<f64> {
        let raw: Vec<f64> = (0..k)
            .map(|_| {
                if rng.random_bool(0.2) {
                    0.0
                } else {
                    rng.random_range(0.01..1.0)
                }
            })
            .collect();
        let total: f64 = raw.iter().sum();
        if total == 0.0 {
            return vec![1.0 / k as f64; k];
        }
        raw.iter().map(|v| v / total).collect()
    };
    let kind_mix: [f64; 5] = mix(5).try_into().unwrap();
    let class_mix: [f64; 4] = mix(4).try_into().unwrap();
    let mut sections: Vec<u8> = (0..=24).filter(|_| rng.random_bool(0.3)).collect();
    if sections.is_empty() {
        sections.push(rng.random_range(0..=24));
    }
    SyntheticConfig {
        documents: rng.random_range(1..=6),
        sentences_per_doc: (smin, smax),
        relations_per_doc: (rmin, rmax),
        kind_mix,
        class_mix,
        double_sense_rate: rng.random_range(0.0..0.3),
        cue_rate: rng.random_range(0.0..1.0),
        sections,
        seed: rng.random(),
    }
}

/// Every file below `root`, as sorted paths relative to it.
pub fn tree(root: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                out.push(path.strip_prefix(root).unwrap().to_path_buf());
            }
        }
    }
    out.sort();
    out
}
