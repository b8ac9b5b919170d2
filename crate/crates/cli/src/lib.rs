//! Command implementations behind the `bitw` binary.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use bitw_core::descriptor::{extract_batch, feature_dimension, feature_names, DescriptorConfig};
use bitw_core::dwt::{Boundary, Wavelet, WaveletConfig};
use bitw_core::eval::{make_group_splits, make_splits, run_protocol, Classifier, ProtocolOutcome, SplitMode};
use bitw_core::features::{names_sidecar_path, read_feature_csv, write_names_sidecar, FeatureCsvWriter, FeatureTable};
use bitw_core::raster::scan_dataset;
use clap::{Args, Parser, Subcommand};
use regex::Regex;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    fn data(message: impl Into<String>) -> Self {
        Self { code: EXIT_DATA, message: message.into() }
    }
}

impl From<bitw_core::Error> for CliError {
    fn from(e: bitw_core::Error) -> Self {
        match e {
            bitw_core::Error::InvalidConfig(m) => Self::usage(m),
            other => Self::data(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::data(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "bitw", version, about = "Biodiversity/taxonomic wavelet texture features")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract descriptors for every image of a dataset tree into a CSV.
    Extract(ExtractArgs),
    /// Holdout evaluation (default split holdout:0.7).
    Eval(EvalArgs),
    /// Cross-validated evaluation (default split kfold:10).
    Cv(EvalArgs),
    /// Write the synthetic 4-class texture benchmark as a PNG tree.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Args)]
pub struct DescriptorArgs {
    #[arg(long, env = "BITW_WAVELET", default_value = "haar", value_parser = ["haar", "db1", "db2", "db4"])]
    pub wavelet: String,
    #[arg(long, env = "BITW_BOUNDARY", default_value = "symmetric", value_parser = ["symmetric", "periodic"])]
    pub boundary: String,
    #[arg(long, env = "BITW_LEVELS", default_value_t = 3)]
    pub levels: usize,
    #[arg(long, env = "BITW_BINS", default_value_t = 256)]
    pub bins: u32,
    /// Worker threads for extraction; 0 = one per core.
    #[arg(long, env = "BITW_THREADS", default_value_t = 0)]
    pub threads: usize,
    /// Comma-separated image extensions (case-insensitive).
    #[arg(long, env = "BITW_EXT")]
    pub ext: Option<String>,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(long, env = "BITW_DATASET")]
    pub dataset: PathBuf,
    #[arg(long, env = "BITW_OUT")]
    pub out: PathBuf,
    #[command(flatten)]
    pub descriptor: DescriptorArgs,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Dataset tree to extract on the fly.
    #[arg(long, env = "BITW_DATASET", conflicts_with = "features", required_unless_present = "features")]
    pub dataset: Option<PathBuf>,
    /// Previously extracted feature CSV.
    #[arg(long, env = "BITW_FEATURES")]
    pub features: Option<PathBuf>,
    /// Report file (key=value lines).
    #[arg(long, env = "BITW_OUT")]
    pub out: Option<PathBuf>,
    #[arg(long, env = "BITW_CLASSIFIER", default_value = "lda", value_parser = ["lda", "knn"])]
    pub classifier: String,
    #[arg(long = "knn-k", env = "BITW_KNN_K", default_value_t = 5)]
    pub knn_k: usize,
    /// `holdout:F` or `kfold:K`.
    #[arg(long, env = "BITW_SPLIT")]
    pub split: Option<String>,
    #[arg(long, env = "BITW_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Keep samples whose paths share this regex's first capture group in the
    /// same fold (k-fold only).
    #[arg(long = "group-regex", env = "BITW_GROUP_REGEX")]
    pub group_regex: Option<String>,
    #[command(flatten)]
    pub descriptor: DescriptorArgs,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, env = "BITW_OUT")]
    pub out: PathBuf,
    #[arg(long = "per-class", default_value_t = 50)]
    pub per_class: usize,
    #[arg(long, default_value_t = 64)]
    pub size: usize,
    #[arg(long, env = "BITW_SEED", default_value_t = 0)]
    pub seed: u64,
}

/// Parsed `--split`.
pub fn parse_split(s: &str) -> Result<SplitMode, CliError> {
    let bad = || CliError::usage(format!("bad --split {s:?}; expected holdout:F or kfold:K"));
    let (kind, value) = s.split_once(':').ok_or_else(bad)?;
    match kind {
        "holdout" => {
            let f = f64::from_str(value).map_err(|_| bad())?;
            if !(f > 0.0 && f < 1.0) {
                return Err(CliError::usage(format!("holdout fraction {f} must be in (0, 1)")));
            }
            Ok(SplitMode::Holdout { train_fraction: f })
        }
        "kfold" => {
            let k = usize::from_str(value).map_err(|_| bad())?;
            if k < 2 {
                return Err(CliError::usage(format!("kfold needs k >= 2, got {k}")));
            }
            Ok(SplitMode::KFold { k })
        }
        _ => Err(bad()),
    }
}

fn split_label(mode: SplitMode) -> String {
    match mode {
        SplitMode::Holdout { train_fraction } => format!("holdout:{train_fraction}"),
        SplitMode::KFold { k } => format!("kfold:{k}"),
    }
}

impl DescriptorArgs {
    pub fn config(&self) -> Result<DescriptorConfig, CliError> {
        if self.levels < 1 {
            return Err(CliError::usage("--levels must be at least 1"));
        }
        if self.bins < 2 {
            return Err(CliError::usage("--bins must be at least 2"));
        }
        Ok(DescriptorConfig {
            wavelet: WaveletConfig {
                wavelet: Wavelet::from_str(&self.wavelet)?,
                levels: self.levels,
                boundary: Boundary::from_str(&self.boundary)?,
            },
            bins: self.bins,
        })
    }
}

/// Extraction outcome: the table plus `(path, error)` for skipped files.
pub struct Extracted {
    pub table: FeatureTable,
    pub skipped: Vec<(String, String)>,
}

fn extract_table(dataset: &Path, descriptor: &DescriptorArgs) -> Result<Extracted, CliError> {
    let config = descriptor.config()?;
    let manifest = scan_dataset(dataset, descriptor.ext.as_deref())?;
    let dim = feature_dimension(config.wavelet.levels);
    let mut table = FeatureTable {
        paths: Vec::new(),
        labels: Vec::new(),
        columns: (0..dim).map(|i| bitw_core::features::column_id(i, dim)).collect(),
        rows: Vec::new(),
    };
    let mut skipped = Vec::new();
    for item in extract_batch(&manifest, &config, descriptor.threads)? {
        let entry = &manifest.samples[item.index];
        let rel = entry.path.strip_prefix(&manifest.root).unwrap_or(&entry.path);
        let rel = rel.to_string_lossy().replace('\\', "/");
        match item.result {
            Ok(fv) => {
                table.paths.push(rel);
                table.labels.push(entry.label.clone());
                table.rows.push(fv.values);
            }
            Err(e) => skipped.push((rel, e.to_string())),
        }
    }
    Ok(Extracted { table, skipped })
}

fn report_skips(skipped: &[(String, String)]) {
    for (path, err) in skipped {
        eprintln!("skipped {path}: {err}");
    }
}

pub fn cmd_extract(args: &ExtractArgs) -> Result<String, CliError> {
    let config = args.descriptor.config()?;
    let Extracted { table, skipped } = extract_table(&args.dataset, &args.descriptor)?;
    let mut writer = FeatureCsvWriter::create(&args.out, table.columns.len())?;
    for ((p, l), row) in table.paths.iter().zip(&table.labels).zip(&table.rows) {
        writer.write_row(p, l, row)?;
    }
    writer.finish()?;
    write_names_sidecar(&names_sidecar_path(&args.out), &feature_names(config.wavelet.levels))?;
    let log_path = PathBuf::from(format!("{}.errors", args.out.display()));
    let summary = format!(
        "extracted {} of {} images ({} features) to {}; skipped {}",
        table.len(),
        table.len() + skipped.len(),
        table.columns.len(),
        args.out.display(),
        skipped.len()
    );
    if skipped.is_empty() {
        if log_path.exists() {
            std::fs::remove_file(&log_path)?;
        }
        Ok(summary)
    } else {
        report_skips(&skipped);
        let log: String = skipped.iter().map(|(p, e)| format!("{p}\t{e}\n")).collect();
        std::fs::write(&log_path, log)?;
        Err(CliError::data(format!("{summary}; see {}", log_path.display())))
    }
}

fn group_ids(paths: &[String], pattern: &str) -> Result<Vec<String>, CliError> {
    let re = Regex::new(pattern).map_err(|e| CliError::usage(format!("bad --group-regex: {e}")))?;
    paths
        .iter()
        .map(|p| {
            re.captures(p)
                .and_then(|c| c.get(1).or_else(|| c.get(0)))
                .map(|m| m.as_str().to_owned())
                .ok_or_else(|| CliError::data(format!("--group-regex does not match {p}")))
        })
        .collect()
}

/// Shared body of `eval` and `cv`; returns the key=value report.
pub fn cmd_evaluate(command: &str, args: &EvalArgs, default_split: &str) -> Result<String, CliError> {
    let mode = parse_split(args.split.as_deref().unwrap_or(default_split))?;
    let classifier = match args.classifier.as_str() {
        "knn" => Classifier::Knn { k: args.knn_k },
        _ => Classifier::Lda,
    };
    if let Classifier::Knn { k: 0 } = classifier {
        return Err(CliError::usage("--knn-k must be at least 1"));
    }
    let table = match (&args.features, &args.dataset) {
        (Some(f), _) => read_feature_csv(f)?,
        (None, Some(d)) => {
            let ex = extract_table(d, &args.descriptor)?;
            report_skips(&ex.skipped);
            ex.table
        }
        (None, None) => return Err(CliError::usage("one of --dataset or --features is required")),
    };
    let classes = table.classes();
    let labels = table.class_indices();
    let plan = match (&args.group_regex, mode) {
        (Some(re), SplitMode::KFold { k }) => make_group_splits(&group_ids(&table.paths, re)?, k, args.seed)?,
        (Some(_), SplitMode::Holdout { .. }) => return Err(CliError::usage("--group-regex requires a kfold split")),
        (None, _) => make_splits(&labels, classes.len(), mode, args.seed)?,
    };
    let outcome = run_protocol(&table.rows, &labels, classes.len(), &plan, classifier)?;
    let report = format_report(command, &classes, table.len(), classifier, mode, args.seed, &outcome);
    if let Some(out) = &args.out {
        std::fs::write(out, &report)?;
    }
    Ok(report)
}

/// Line-oriented `key=value` report. Reals use the shortest round-trip form.
pub fn format_report(
    command: &str,
    classes: &[String],
    samples: usize,
    classifier: Classifier,
    mode: SplitMode,
    seed: u64,
    outcome: &ProtocolOutcome,
) -> String {
    let r = &outcome.report;
    let mut s = String::new();
    let _ = writeln!(s, "command={command}");
    let _ = writeln!(s, "classifier={classifier}");
    let _ = writeln!(s, "split={}", split_label(mode));
    let _ = writeln!(s, "seed={seed}");
    let _ = writeln!(s, "samples={samples}");
    let _ = writeln!(s, "classes={}", classes.join(","));
    let _ = writeln!(s, "folds={}", outcome.folds.len());
    let _ = writeln!(s, "accuracy={}", r.accuracy);
    let _ = writeln!(s, "accuracy_sd={}", r.accuracy_sd);
    let _ = writeln!(s, "auc={}", r.auc);
    for f in &outcome.folds {
        let _ = writeln!(s, "fold.{}.accuracy={}", f.fold, f.report.accuracy);
        let _ = writeln!(s, "fold.{}.auc={}", f.fold, f.report.auc);
    }
    for (class, row) in classes.iter().zip(&r.confusion) {
        let counts: Vec<String> = row.iter().map(usize::to_string).collect();
        let _ = writeln!(s, "confusion.{class}={}", counts.join(","));
    }
    s
}

pub fn cmd_synth(args: &SynthArgs) -> Result<String, CliError> {
    if args.size < bitw_core::raster::MIN_SIDE {
        return Err(CliError::usage(format!("--size must be at least {}", bitw_core::raster::MIN_SIDE)));
    }
    let m = bitw_core::synth::write_benchmark(&args.out, args.per_class, args.size, args.seed)?;
    Ok(format!("wrote {} images in {} classes to {}", m.len(), m.classes.len(), args.out.display()))
}

pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Extract(a) => cmd_extract(a),
        Command::Eval(a) => cmd_evaluate("eval", a, "holdout:0.7"),
        Command::Cv(a) => cmd_evaluate("cv", a, "kfold:10"),
        Command::Synth(a) => cmd_synth(a),
    }
}
