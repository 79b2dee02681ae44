//! Reproducible pipeline commands.
//!
//! Each command reads its inputs, validates its whole configuration before
//! touching the filesystem, writes its artifacts into one output directory
//! and finishes with a `manifest.json` there:
//!
//! ```text
//! {"tool": "pdtb-windows", "version": "0.1.0",
//!  "command": "build", "config": {...},
//!  "strategy": "ewn2",
//!  "inputs":  [{"path": ..., "sha256": ..., "bytes": ...}],
//!  "outputs": [{"path": ..., "sha256": ..., "bytes": ...}]}
//! ```
//!
//! `command` and `config` together are a complete [`Command`], so
//! [`replay`] can re-run any manifest and check that its outputs come out
//! byte-identical. Paths are recorded exactly as given; nothing in a
//! manifest depends on the clock or the working directory.
//!
//! Directory layout produced by the commands:
//!
//! | command    | reads                          | writes                                   |
//! |------------|--------------------------------|------------------------------------------|
//! | `generate` | nothing                        | `corpus.jsonl` or `corpus.pipe`          |
//! | `build`    | a corpus file or directory     | `dataset.jsonl`                          |
//! | `split`    | a `build` directory            | `train.jsonl`, `test.jsonl`              |
//! | `train`    | a `split` directory            | `model.json`, `train_log.json`, `metrics/epoch-NN.json` |
//! | `eval`     | a model and a JSONL dataset    | `metrics.json`                           |
//! | `compare`  | two trees of run directories   | `comparison.json` (when `out` is given)  |

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classifier::{EpochReport, TextClassifier, TrainConfig, Weighting};
use crate::corpus::{
    generate_synthetic, parse_corpus, write_corpus, Corpus, CorpusFormat, SyntheticConfig,
};
use crate::dataset::{read_jsonl, split, write_jsonl, EncodingSpec, SplitSpec};
use crate::error::{Error, Result};
use crate::metrics::{
    compare_models, compute_metrics, Comparison, Metric, MetricsRecord, TTestVariant,
};
use crate::windowing::{build, Example, WindowStrategy};

pub const TOOL: &str = "pdtb-windows";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const MODEL_NAME: &str = "softmax-regression";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerateArgs {
    pub out: PathBuf,
    pub format: CorpusFormat,
    pub synthetic: SyntheticConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildArgs {
    /// A corpus file, or a directory searched recursively for `.pipe`
    /// (pipe format) or `.jsonl` (record-json format) files.
    pub corpus: PathBuf,
    pub format: CorpusFormat,
    pub strategy: WindowStrategy,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitArgs {
    /// Output directory of `build`.
    pub dataset: PathBuf,
    pub split: SplitSpec,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainArgs {
    /// Output directory of `split`.
    pub split: PathBuf,
    pub encoding: EncodingSpec,
    pub weighting: Weighting,
    pub train: TrainConfig,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalArgs {
    pub model: PathBuf,
    /// A JSONL dataset file.
    pub data: PathBuf,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    pub metric: Metric,
    pub alpha: f64,
    pub variant: TTestVariant,
    pub out: Option<PathBuf>,
}

/// A fully resolved command; serialized into every manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", content = "config", rename_all = "lowercase")]
pub enum Command {
    Generate(GenerateArgs),
    Build(BuildArgs),
    Split(SplitArgs),
    Train(TrainArgs),
    Eval(EvalArgs),
    Compare(CompareArgs),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

impl FileDigest {
    fn of(path: &Path, contents: &[u8]) -> Self {
        Self {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(contents)),
            bytes: contents.len() as u64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    #[serde(flatten)]
    pub command: Command,
    /// Window strategy the artifacts descend from, when there is one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<String>,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = read_text(path)?;
        serde_json::from_str(&text)
            .map_err(|e| Error::json(format!("reading {}", path.display()), e))
    }
}

/// Short strategy tag used in manifests and metrics files, e.g. `dn1`.
pub fn strategy_tag(strategy: &WindowStrategy) -> String {
    match strategy {
        WindowStrategy::Baseline => "baseline".into(),
        WindowStrategy::DirectNeighbors { n } => format!("dn{n}"),
        WindowStrategy::ExpandedWindow { n } => format!("ewn{n}"),
        WindowStrategy::RandomNeighbors { .. } => "psrn".into(),
    }
}

/// Pretty JSON with a trailing newline.
fn to_json<T: Serialize>(value: &T, what: &str) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)
        .map_err(|e| Error::json(format!("serializing {what}"), e))?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    if !path.exists() {
        return Err(Error::MissingInput(path.to_path_buf()));
    }
    fs::read(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))
}

fn read_text(path: &Path) -> Result<String> {
    String::from_utf8(read_bytes(path)?).map_err(|_| {
        Error::in_file(
            path,
            Error::Malformed {
                line: 0,
                message: "not UTF-8".into(),
            },
        )
    })
}

fn require_dir(path: &Path) -> Result<()> {
    if path.is_dir() {
        Ok(())
    } else {
        Err(Error::MissingInput(path.to_path_buf()))
    }
}

/// Collects inputs and staged outputs, then writes everything at once.
struct Run {
    inputs: Vec<FileDigest>,
    outputs: Vec<(PathBuf, Vec<u8>)>,
    strategy: Option<String>,
}

impl Run {
    fn new() -> Self {
        Self {
            inputs: Vec::new(),
            outputs: Vec::new(),
            strategy: None,
        }
    }

    fn read(&mut self, path: &Path) -> Result<Vec<u8>> {
        let bytes = read_bytes(path)?;
        self.inputs.push(FileDigest::of(path, &bytes));
        Ok(bytes)
    }

    fn read_text(&mut self, path: &Path) -> Result<String> {
        let bytes = self.read(path)?;
        String::from_utf8(bytes).map_err(|_| {
            Error::in_file(
                path,
                Error::Malformed {
                    line: 0,
                    message: "not UTF-8".into(),
                },
            )
        })
    }

    /// Read `dir/manifest.json` if present and inherit its strategy tag.
    fn upstream(&mut self, dir: &Path) -> Result<()> {
        let path = dir.join(MANIFEST_FILE);
        if path.exists() {
            let text = self.read_text(&path)?;
            let manifest: Manifest = serde_json::from_str(&text)
                .map_err(|e| Error::json(format!("reading {}", path.display()), e))?;
            self.strategy = manifest.strategy;
        }
        Ok(())
    }

    fn read_examples(&mut self, path: &Path) -> Result<Vec<Example>> {
        let bytes = self.read(path)?;
        read_jsonl(bytes.as_slice()).map_err(|e| Error::in_file(path, e))
    }

    fn stage(&mut self, path: PathBuf, bytes: Vec<u8>) {
        self.outputs.push((path, bytes));
    }

    fn commit(self, command: Command, out: &Path) -> Result<Manifest> {
        fs::create_dir_all(out).map_err(|e| Error::io(format!("creating {}", out.display()), e))?;
        let mut outputs = Vec::with_capacity(self.outputs.len());
        for (path, bytes) in &self.outputs {
            if let Some(parent) = path.parent() {
                fs::create_dir_all(parent)
                    .map_err(|e| Error::io(format!("creating {}", parent.display()), e))?;
            }
            fs::write(path, bytes)
                .map_err(|e| Error::io(format!("writing {}", path.display()), e))?;
            outputs.push(FileDigest::of(path, bytes));
        }
        let manifest = Manifest {
            tool: TOOL.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command,
            strategy: self.strategy,
            inputs: self.inputs,
            outputs,
        };
        let path = out.join(MANIFEST_FILE);
        fs::write(&path, to_json(&manifest, "manifest")?)
            .map_err(|e| Error::io(format!("writing {}", path.display()), e))?;
        Ok(manifest)
    }
}

fn corpus_extension(format: CorpusFormat) -> &'static str {
    match format {
        CorpusFormat::Pipe => "pipe",
        CorpusFormat::RecordJson => "jsonl",
    }
}

/// Files under `dir` with the given extension, sorted by path.
fn files_with_extension(dir: &Path, ext: &str) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        let entries =
            fs::read_dir(&d).map_err(|e| Error::io(format!("listing {}", d.display()), e))?;
        for entry in entries {
            let path = entry
                .map_err(|e| Error::io(format!("listing {}", d.display()), e))?
                .path();
            if path.is_dir() {
                stack.push(path);
            } else if path.extension().is_some_and(|x| x == ext) {
                out.push(path);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Load a corpus file, or every corpus file below a directory.
pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<Corpus> {
    load_corpus_into(&mut Run::new(), path, format)
}

fn load_corpus_into(run: &mut Run, path: &Path, format: CorpusFormat) -> Result<Corpus> {
    let files = if path.is_dir() {
        let files = files_with_extension(path, corpus_extension(format))?;
        if files.is_empty() {
            return Err(Error::MissingInput(
                path.join(format!("*.{}", corpus_extension(format))),
            ));
        }
        files
    } else {
        vec![path.to_path_buf()]
    };
    let mut corpus = Corpus::default();
    for file in files {
        let bytes = run.read(&file)?;
        let part = parse_corpus(bytes.as_slice(), format).map_err(|e| Error::in_file(&file, e))?;
        corpus = corpus.merge(part).map_err(|e| Error::in_file(&file, e))?;
    }
    Ok(corpus)
}

fn examples_jsonl(examples: &[Example]) -> Result<Vec<u8>> {
    let mut bytes = Vec::new();
    write_jsonl(examples, &mut bytes)?;
    Ok(bytes)
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<Manifest> {
    args.synthetic.validate()?;
    let corpus = generate_synthetic(&args.synthetic)?;
    let mut run = Run::new();
    let path = args
        .out
        .join(format!("corpus.{}", corpus_extension(args.format)));
    run.stage(path, write_corpus(&corpus, args.format)?.into_bytes());
    run.commit(Command::Generate(args.clone()), &args.out)
}

pub fn cmd_build(args: &BuildArgs) -> Result<Manifest> {
    args.strategy.validate()?;
    if !args.corpus.exists() {
        return Err(Error::MissingInput(args.corpus.clone()));
    }
    let mut run = Run::new();
    let corpus = load_corpus_into(&mut run, &args.corpus, args.format)?;
    let dataset = build(&corpus, args.strategy)?;
    run.strategy = Some(strategy_tag(&args.strategy));
    run.stage(
        args.out.join("dataset.jsonl"),
        examples_jsonl(&dataset.examples)?,
    );
    run.commit(Command::Build(args.clone()), &args.out)
}

pub fn cmd_split(args: &SplitArgs) -> Result<Manifest> {
    args.split.validate()?;
    require_dir(&args.dataset)?;
    let mut run = Run::new();
    run.upstream(&args.dataset)?;
    let examples = run.read_examples(&args.dataset.join("dataset.jsonl"))?;
    // The strategy only matters for bookkeeping here.
    let dataset = crate::windowing::Dataset {
        strategy: WindowStrategy::Baseline,
        examples,
        excluded: 0,
    };
    let parts = split(&dataset, &args.split)?;
    run.stage(
        args.out.join("train.jsonl"),
        examples_jsonl(&parts.train.examples)?,
    );
    run.stage(
        args.out.join("test.jsonl"),
        examples_jsonl(&parts.test.examples)?,
    );
    run.commit(Command::Split(args.clone()), &args.out)
}

fn metrics_file(out: &Path, epoch: usize) -> PathBuf {
    out.join("metrics").join(format!("epoch-{epoch:02}.json"))
}

pub fn cmd_train(args: &TrainArgs) -> Result<Manifest> {
    args.encoding.validate()?;
    args.train.validate()?;
    require_dir(&args.split)?;
    let mut run = Run::new();
    run.upstream(&args.split)?;
    let train = run.read_examples(&args.split.join("train.jsonl"))?;
    let test = run.read_examples(&args.split.join("test.jsonl"))?;
    if train.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if test.is_empty() {
        return Err(Error::InvalidConfig(
            "the test split is empty; nothing to evaluate on".into(),
        ));
    }
    let tag = run.strategy.clone().unwrap_or_else(|| "unspecified".into());
    let seed = args.train.seed;
    let epochs = args.train.epochs;
    let mut records = Vec::new();
    let (model, history) = TextClassifier::fit_with(
        &train,
        &args.encoding,
        args.weighting,
        args.train,
        |report, clf| {
            let report_metrics = compute_metrics(&clf.evaluate(&test)?)?;
            records.push(MetricsRecord::new(
                MODEL_NAME,
                &tag,
                report.epoch,
                seed,
                report.epoch == epochs,
                &report_metrics,
            ));
            Ok(())
        },
    )?;
    if epochs == 0 {
        let report_metrics = compute_metrics(&model.evaluate(&test)?)?;
        records.push(MetricsRecord::new(
            MODEL_NAME,
            &tag,
            0,
            seed,
            true,
            &report_metrics,
        ));
    }
    run.stage(args.out.join("model.json"), model.to_json()?.into_bytes());
    run.stage(
        args.out.join("train_log.json"),
        to_json::<Vec<EpochReport>>(&history, "training log")?,
    );
    for record in &records {
        run.stage(
            metrics_file(&args.out, record.epoch),
            to_json(record, "metrics")?,
        );
    }
    run.commit(Command::Train(args.clone()), &args.out)
}

pub fn cmd_eval(args: &EvalArgs) -> Result<Manifest> {
    let mut run = Run::new();
    if let Some(dir) = args.data.parent() {
        run.upstream(dir)?;
    }
    let text = run.read_text(&args.model)?;
    let model = TextClassifier::from_json(&text).map_err(|e| Error::in_file(&args.model, e))?;
    let examples = run.read_examples(&args.data)?;
    let report = compute_metrics(&model.evaluate(&examples)?)?;
    let tag = run.strategy.clone().unwrap_or_else(|| "unspecified".into());
    let config = model.params.config;
    let record = MetricsRecord::new(MODEL_NAME, &tag, config.epochs, config.seed, true, &report);
    run.stage(args.out.join("metrics.json"), to_json(&record, "metrics")?);
    run.commit(Command::Eval(args.clone()), &args.out)
}

/// Final metrics records below `dir`: every `metrics.json` and every
/// `epoch-*.json` whose `final` flag is set, in path order.
pub fn final_records(dir: &Path) -> Result<Vec<(PathBuf, MetricsRecord)>> {
    require_dir(dir)?;
    let mut out = Vec::new();
    for path in files_with_extension(dir, "json")? {
        let name = path
            .file_name()
            .and_then(|n| n.to_str())
            .unwrap_or_default();
        if name != "metrics.json" && !name.starts_with("epoch-") {
            continue;
        }
        let text = read_text(&path)?;
        let record: MetricsRecord = serde_json::from_str(&text)
            .map_err(|e| Error::json(format!("reading {}", path.display()), e))?;
        record.validate().map_err(|e| Error::in_file(&path, e))?;
        if record.is_final {
            out.push((path, record));
        }
    }
    Ok(out)
}

/// Comparison plus a plain verdict, as printed by `compare`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareOutput {
    pub a: String,
    pub b: String,
    #[serde(flatten)]
    pub comparison: Comparison,
    pub verdict: String,
}

fn compare_dirs(args: &CompareArgs) -> Result<(CompareOutput, Run)> {
    let mut run = Run::new();
    let mut group = |dir: &Path| -> Result<Vec<_>> {
        let records = final_records(dir)?;
        for (path, _) in &records {
            run.read(path)?;
        }
        Ok(records.into_iter().map(|(_, r)| r.report()).collect())
    };
    let a = group(&args.a)?;
    let b = group(&args.b)?;
    let comparison = compare_models(&a, &b, args.metric, args.alpha, args.variant)?;
    let verdict = if comparison.test.significant {
        "significant"
    } else {
        "not significant"
    };
    let output = CompareOutput {
        a: args.a.display().to_string(),
        b: args.b.display().to_string(),
        comparison,
        verdict: verdict.into(),
    };
    Ok((output, run))
}

pub fn cmd_compare(args: &CompareArgs) -> Result<(CompareOutput, Option<Manifest>)> {
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "alpha must lie in (0, 1), got {}",
            args.alpha
        )));
    }
    let (output, mut run) = compare_dirs(args)?;
    let manifest = match &args.out {
        Some(out) => {
            run.stage(out.join("comparison.json"), to_json(&output, "comparison")?);
            Some(run.commit(Command::Compare(args.clone()), out)?)
        }
        None => None,
    };
    Ok((output, manifest))
}

/// Run any command, returning its manifest (`None` for a compare without
/// an output directory).
pub fn run(command: &Command) -> Result<Option<Manifest>> {
    match command {
        Command::Generate(a) => cmd_generate(a).map(Some),
        Command::Build(a) => cmd_build(a).map(Some),
        Command::Split(a) => cmd_split(a).map(Some),
        Command::Train(a) => cmd_train(a).map(Some),
        Command::Eval(a) => cmd_eval(a).map(Some),
        Command::Compare(a) => cmd_compare(a).map(|(_, m)| m),
    }
}

/// Re-run the command recorded in a manifest and report output files
/// whose hash changed. An empty list means the run reproduced exactly.
pub fn replay(manifest_path: &Path) -> Result<Vec<String>> {
    let before = Manifest::load(manifest_path)?;
    let after = run(&before.command)?
        .ok_or_else(|| Error::InvalidConfig("manifest records a command without outputs".into()))?;
    let mut changed: Vec<String> = before
        .outputs
        .iter()
        .filter(|d| !after.outputs.contains(d))
        .map(|d| d.path.clone())
        .collect();
    changed.extend(
        after
            .outputs
            .iter()
            .filter(|d| !before.outputs.iter().any(|b| b.path == d.path))
            .map(|d| d.path.clone()),
    );
    Ok(changed)
}
