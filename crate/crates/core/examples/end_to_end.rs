//! The whole pipeline through the library commands: generate, build,
//! split, train and eval for two strategies and three corpus seeds, then
//! compare the strategies. Every step leaves a manifest next to its outputs.
//!
//! ```text
//! cargo run --example end_to_end -- /tmp/pdtb-runs
//! ```

use std::path::PathBuf;

use pdtb_windows::classifier::{TrainConfig, Weighting};
use pdtb_windows::corpus::{CorpusFormat, SyntheticConfig};
use pdtb_windows::dataset::{EncodingSpec, SplitSpec};
use pdtb_windows::metrics::{Metric, TTestVariant};
use pdtb_windows::pipeline::*;
use pdtb_windows::windowing::WindowStrategy;

fn main() -> pdtb_windows::Result<()> {
    let root: PathBuf = std::env::args_os()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| "target/end_to_end".into());
    let strategies = [
        ("baseline", WindowStrategy::Baseline),
        ("ewn4", WindowStrategy::ExpandedWindow { n: 4 }),
    ];

    for seed in 1..=3u64 {
        let corpus_dir = root.join(format!("corpus-{seed}"));
        cmd_generate(&GenerateArgs {
            out: corpus_dir.clone(),
            format: CorpusFormat::Pipe,
            synthetic: SyntheticConfig {
                documents: 300,
                seed,
                ..Default::default()
            },
        })?;
        for (name, strategy) in strategies {
            let run = root.join(name).join(seed.to_string());
            cmd_build(&BuildArgs {
                corpus: corpus_dir.join("corpus.pipe"),
                format: CorpusFormat::Pipe,
                strategy,
                out: run.join("build"),
            })?;
            cmd_split(&SplitArgs {
                dataset: run.join("build"),
                split: SplitSpec::new((0..=19).collect(), (20..=24).collect())?,
                out: run.join("split"),
            })?;
            let trained = cmd_train(&TrainArgs {
                split: run.join("split"),
                encoding: EncodingSpec::default(),
                weighting: Weighting::TfIdf,
                train: TrainConfig {
                    learning_rate: 3.0,
                    epochs: 40,
                    ..Default::default()
                },
                out: run.join("train"),
            })?;
            println!(
                "{name} seed {seed}: {} files written",
                trained.outputs.len()
            );
        }
    }

    let (out, _) = cmd_compare(&CompareArgs {
        a: root.join("baseline"),
        b: root.join("ewn4"),
        metric: Metric::Accuracy,
        alpha: 0.05,
        variant: TTestVariant::Pooled,
        out: Some(root.join("comparison")),
    })?;
    println!(
        "\naccuracy baseline {:.3} vs EWN(4) {:.3}: p = {:.4} ({})",
        out.comparison.mean_a, out.comparison.mean_b, out.comparison.test.p_value, out.verdict
    );

    let changed = replay(&root.join("baseline/1/train").join(MANIFEST_FILE))?;
    println!(
        "replaying baseline/1/train: {}",
        if changed.is_empty() {
            "identical"
        } else {
            "changed"
        }
    );
    Ok(())
}
