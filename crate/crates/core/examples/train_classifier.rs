//! Train the softmax classifier on a synthetic Baseline dataset and report
//! loss and held-out accuracy every ten epochs.

use pdtb_windows::classifier::{TextClassifier, TrainConfig, Weighting};
use pdtb_windows::corpus::{generate_synthetic, SyntheticConfig};
use pdtb_windows::dataset::{split, EncodingSpec, SplitSpec};
use pdtb_windows::metrics::compute_metrics;
use pdtb_windows::windowing::{build, WindowStrategy};

fn main() -> pdtb_windows::Result<()> {
    let corpus = generate_synthetic(&SyntheticConfig {
        documents: 400,
        ..Default::default()
    })?;
    let dataset = build(&corpus, WindowStrategy::Baseline)?;
    let parts = split(
        &dataset,
        &SplitSpec::new((0..=19).collect(), (20..=24).collect())?,
    )?;

    // A larger step than the default: L2-normalized features keep
    // gradients small.
    let config = TrainConfig {
        learning_rate: 3.0,
        epochs: 60,
        ..Default::default()
    };
    println!("epoch   loss    train acc  test acc  test F1");
    let (model, _) = TextClassifier::fit_with(
        &parts.train.examples,
        &EncodingSpec::default(),
        Weighting::TfIdf,
        config,
        |report, clf| {
            if report.epoch % 10 != 0 {
                return Ok(());
            }
            let m = compute_metrics(&clf.evaluate(&parts.test.examples)?)?;
            println!(
                "{:>5}  {:.4}  {:>9.3}  {:>8.3}  {:>7.3}",
                report.epoch, report.loss, report.train_accuracy, m.accuracy, m.f1_w
            );
            Ok(())
        },
    )?;

    let e = &parts.test.examples[0];
    let p = model.predict_proba(e)?;
    println!("\n{:?} / {:?}", e.arg1, e.arg2);
    println!(
        "gold {}, predicted {}, probabilities {p:.3?}",
        e.label,
        model.predict(e)?
    );
    Ok(())
}
