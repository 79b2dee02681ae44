//! Command-line front end for the `pdtb_windows::pipeline` commands.
//!
//! On success the manifest (or, for `compare`, the comparison) is printed
//! to stdout as JSON. On failure a single JSON object
//! `{"error": {"kind": ..., "message": ...}}` goes to stderr and the exit
//! status is 1 (2 for unparseable arguments).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use pdtb_windows::classifier::{TrainConfig, Weighting};
use pdtb_windows::corpus::{CorpusFormat, SyntheticConfig};
use pdtb_windows::dataset::{parse_sections, EncodingSpec, SplitSpec};
use pdtb_windows::metrics::{Metric, TTestVariant};
use pdtb_windows::pipeline::{
    self, BuildArgs, CompareArgs, EvalArgs, GenerateArgs, SplitArgs, TrainArgs,
};
use pdtb_windows::windowing::WindowStrategy;
use pdtb_windows::{Error, Result};

#[derive(Parser)]
#[command(
    name = "pdtb-windows",
    version,
    about = "Context-window experiments on PDTB implicit relations"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Pipe,
    RecordJson,
}

impl From<FormatArg> for CorpusFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Pipe => CorpusFormat::Pipe,
            FormatArg::RecordJson => CorpusFormat::RecordJson,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Baseline,
    Dn,
    Ewn,
    Psrn,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Accuracy,
    F1,
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightingArg {
    Counts,
    TfIdf,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Pooled,
    Welch,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a seeded synthetic PDTB-like corpus.
    Generate {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "record-json")]
        format: FormatArg,
        #[arg(long, default_value_t = 100)]
        documents: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Build a context-window dataset from a corpus file or directory.
    Build {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_enum, default_value = "pipe")]
        format: FormatArg,
        #[arg(long, value_enum)]
        strategy: StrategyArg,
        /// Window size: 1 or 2 for dn, 2 or 4 for ewn.
        #[arg(long)]
        n: Option<u8>,
        /// Seed for psrn sampling.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Split a built dataset into train and test sections.
    Split {
        /// Output directory of `build`.
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, default_value = "0-22")]
        train_sections: String,
        #[arg(long, default_value = "23")]
        test_sections: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train the softmax classifier, evaluating on the test split every epoch.
    Train {
        /// Output directory of `split`.
        #[arg(long)]
        split: PathBuf,
        #[command(flatten)]
        encoding: EncodingFlags,
        #[arg(long, default_value_t = 10)]
        epochs: usize,
        #[arg(long, default_value_t = 0.5)]
        learning_rate: f64,
        #[arg(long, default_value_t = 1e-4)]
        l2: f64,
        #[arg(long, value_enum, default_value = "tf-idf")]
        weighting: WeightingArg,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a trained model on a JSONL dataset.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Two-sample t-test between the final metrics of two groups of runs.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value = "accuracy")]
        metric: MetricArg,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, value_enum, default_value = "pooled")]
        variant: VariantArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run the command recorded in a manifest and check its outputs.
    Replay { manifest: PathBuf },
}

#[derive(Args)]
struct EncodingFlags {
    #[arg(long, default_value_t = 128)]
    max_length: usize,
    /// Drop stop words before encoding.
    #[arg(long)]
    drop_stopwords: bool,
}

fn run(cmd: Cmd) -> Result<serde_json::Value> {
    let command = match cmd {
        Cmd::Generate {
            out,
            format,
            documents,
            seed,
        } => pipeline::Command::Generate(GenerateArgs {
            out,
            format: format.into(),
            synthetic: SyntheticConfig {
                documents,
                seed,
                ..Default::default()
            },
        }),
        Cmd::Build {
            corpus,
            format,
            strategy,
            n,
            seed,
            out,
        } => {
            let name = match strategy {
                StrategyArg::Baseline => "baseline",
                StrategyArg::Dn => "dn",
                StrategyArg::Ewn => "ewn",
                StrategyArg::Psrn => "psrn",
            };
            pipeline::Command::Build(BuildArgs {
                corpus,
                format: format.into(),
                strategy: WindowStrategy::from_parts(name, n, seed)?,
                out,
            })
        }
        Cmd::Split {
            dataset,
            train_sections,
            test_sections,
            out,
        } => pipeline::Command::Split(SplitArgs {
            dataset,
            split: SplitSpec::new(
                parse_sections(&train_sections)?,
                parse_sections(&test_sections)?,
            )?,
            out,
        }),
        Cmd::Train {
            split,
            encoding,
            epochs,
            learning_rate,
            l2,
            weighting,
            seed,
            out,
        } => pipeline::Command::Train(TrainArgs {
            split,
            encoding: EncodingSpec {
                max_length: encoding.max_length,
                keep_stopwords: !encoding.drop_stopwords,
                ..Default::default()
            },
            weighting: match weighting {
                WeightingArg::Counts => Weighting::Counts,
                WeightingArg::TfIdf => Weighting::TfIdf,
            },
            train: TrainConfig {
                learning_rate,
                epochs,
                l2,
                seed,
            },
            out,
        }),
        Cmd::Eval { model, data, out } => pipeline::Command::Eval(EvalArgs { model, data, out }),
        Cmd::Compare {
            a,
            b,
            metric,
            alpha,
            variant,
            out,
        } => {
            let args = CompareArgs {
                a,
                b,
                metric: match metric {
                    MetricArg::Accuracy => Metric::Accuracy,
                    MetricArg::F1 => Metric::F1,
                },
                alpha,
                variant: match variant {
                    VariantArg::Pooled => TTestVariant::Pooled,
                    VariantArg::Welch => TTestVariant::Welch,
                },
                out,
            };
            let (output, _) = pipeline::cmd_compare(&args)?;
            return to_value(&output);
        }
        Cmd::Replay { manifest } => {
            let changed = pipeline::replay(&manifest)?;
            if !changed.is_empty() {
                return Err(Error::InvalidSample(format!(
                    "outputs differ from the manifest: {}",
                    changed.join(", ")
                )));
            }
            return Ok(json!({"replayed": manifest.display().to_string(), "identical": true}));
        }
    };
    match pipeline::run(&command)? {
        Some(manifest) => to_value(&manifest),
        None => Ok(serde_json::Value::Null),
    }
}

fn to_value<T: serde::Serialize>(value: &T) -> Result<serde_json::Value> {
    Ok(serde_json::to_value(value).expect("plain data serializes"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version.
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.render().to_string();
            let message = message
                .lines()
                .next()
                .unwrap_or_default()
                .trim_start_matches("error: ");
            eprintln!(
                "{}",
                json!({"error": {"kind": "usage", "message": message}})
            );
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(value) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&value).expect("JSON value serializes")
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!(
                "{}",
                json!({"error": {"kind": e.kind(), "message": e.to_string()}})
            );
            ExitCode::FAILURE
        }
    }
}
