//! Independent two-sample t-tests and run-group comparisons.

use serde::{Deserialize, Serialize};

use super::{student_t_cdf, Metric, MetricsReport};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TTestVariant {
    /// Student's test with pooled variance, `df = na + nb - 2`.
    #[default]
    Pooled,
    /// Welch's test with Welch-Satterthwaite degrees of freedom.
    Welch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTestResult {
    pub t: f64,
    pub df: f64,
    /// Two-tailed.
    pub p_value: f64,
    pub alpha: f64,
    pub significant: bool,
    /// Both samples have zero variance, so `t` is 0 or infinite by fiat.
    pub degenerate: bool,
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let ss = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>();
    (mean, ss / (n - 1.0))
}

fn check_sample(xs: &[f64], name: &str) -> Result<()> {
    if xs.len() < 2 {
        return Err(Error::InvalidSample(format!(
            "sample {name} needs at least 2 values, has {}",
            xs.len()
        )));
    }
    if let Some(x) = xs.iter().find(|x| !x.is_finite()) {
        return Err(Error::InvalidSample(format!("sample {name} contains {x}")));
    }
    Ok(())
}

pub fn two_sample_ttest(
    a: &[f64],
    b: &[f64],
    variant: TTestVariant,
    alpha: f64,
) -> Result<TTestResult> {
    check_sample(a, "a")?;
    check_sample(b, "b")?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, va) = mean_var(a);
    let (mb, vb) = mean_var(b);

    let (se, df) = match variant {
        TTestVariant::Pooled => {
            let df = na + nb - 2.0;
            let pooled = ((na - 1.0) * va + (nb - 1.0) * vb) / df;
            ((pooled * (1.0 / na + 1.0 / nb)).sqrt(), df)
        }
        TTestVariant::Welch => {
            let (qa, qb) = (va / na, vb / nb);
            let df = if qa + qb > 0.0 {
                (qa + qb).powi(2) / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0))
            } else {
                na + nb - 2.0
            };
            ((qa + qb).sqrt(), df)
        }
    };

    let diff = ma - mb;
    if se == 0.0 {
        let (t, p) = if diff == 0.0 {
            (0.0, 1.0)
        } else {
            (diff.signum() * f64::INFINITY, 0.0)
        };
        return Ok(TTestResult {
            t,
            df,
            p_value: p,
            alpha,
            significant: p < alpha,
            degenerate: true,
        });
    }
    let t = diff / se;
    // 2 * P(T <= -|t|) keeps precision in the far tail.
    let p_value = (2.0 * student_t_cdf(-t.abs(), df)?).clamp(0.0, 1.0);
    Ok(TTestResult {
        t,
        df,
        p_value,
        alpha,
        significant: p_value < alpha,
        degenerate: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub metric: Metric,
    pub mean_a: f64,
    pub mean_b: f64,
    pub runs_a: usize,
    pub runs_b: usize,
    /// Group with the higher mean; `None` on a tie.
    pub higher: Option<Side>,
    pub test: TTestResult,
}

/// Compare two groups of runs on one metric.
pub fn compare_models(
    runs_a: &[MetricsReport],
    runs_b: &[MetricsReport],
    metric: Metric,
    alpha: f64,
    variant: TTestVariant,
) -> Result<Comparison> {
    let extract = |runs: &[MetricsReport], name: &str| -> Result<Vec<f64>> {
        runs.iter()
            .map(|r| {
                let v = metric.of(r);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::InvalidSample(format!(
                        "{metric} unavailable in a run of group {name}"
                    )))
                }
            })
            .collect()
    };
    let a = extract(runs_a, "a")?;
    let b = extract(runs_b, "b")?;
    let test = two_sample_ttest(&a, &b, variant, alpha)?;
    let mean_a = a.iter().sum::<f64>() / a.len() as f64;
    let mean_b = b.iter().sum::<f64>() / b.len() as f64;
    let higher = match mean_a.total_cmp(&mean_b) {
        std::cmp::Ordering::Greater => Some(Side::A),
        std::cmp::Ordering::Less => Some(Side::B),
        std::cmp::Ordering::Equal => None,
    };
    Ok(Comparison {
        metric,
        mean_a,
        mean_b,
        runs_a: a.len(),
        runs_b: b.len(),
        higher,
        test,
    })
}
