//! Batch commands behind the `rxlearn` binary.
//!
//! The binary parses flags into a [`RunConfig`] (optionally starting from a
//! TOML file, see [`RunConfig::from_toml_str`]) and calls one of the `cmd_*`
//! functions. Every failure maps to an exit code through [`CliError`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annealer::{run_psaw, run_psaw_i, run_psaw_p, AnnealConfig, PartitionMode, TrainError, TrainResult};
use crate::corpus::{
    generate_synthetic_corpus, load_corpus, load_stop_words, write_corpus, CorpusError, CorpusFormat, LabeledCorpus,
    SynthSpec, TokenizerConfig, TokenizerMode,
};
use crate::embeddings::{build_fallback_embeddings, load_embeddings, EmbeddingTable};
use crate::evaluator::{EvalError, EvalMetrics, Evaluator};
use crate::regex_model::{decode, format_rule, parse_classifier_file, write_classifier_file, ClassifierFile};

/// Co-occurrence window of the fallback embeddings.
pub const FALLBACK_WINDOW: usize = 2;
/// Context features of the fallback embeddings.
pub const FALLBACK_DIMENSION: usize = 300;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("training failed: {0}")]
    Training(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Data(_) => 2,
            CliError::Training(_) => 3,
        }
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        match e {
            CorpusError::InvalidSpec(_) => CliError::Config(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<TrainError> for CliError {
    fn from(e: TrainError) -> Self {
        match e {
            TrainError::Config(_) => CliError::Config(e.to_string()),
            TrainError::Corpus(_) | TrainError::Eval(_) => CliError::Data(e.to_string()),
            TrainError::NoKeywords(_) | TrainError::Mutation(_) => CliError::Training(e.to_string()),
        }
    }
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    fs::write(path, content).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    #[default]
    Psaw,
    PsawI,
    PsawPKmeans,
    PsawPRandom,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Strategy::Psaw, Strategy::PsawI, Strategy::PsawPKmeans, Strategy::PsawPRandom];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Psaw => "psaw",
            Strategy::PsawI => "psaw-i",
            Strategy::PsawPKmeans => "psaw-p-kmeans",
            Strategy::PsawPRandom => "psaw-p-random",
        }
    }

    pub fn run(
        self,
        dataset: &crate::corpus::BinaryDataset,
        embeddings: &EmbeddingTable<f64>,
        config: &AnnealConfig<f64>,
    ) -> Result<TrainResult<f64>, TrainError> {
        match self {
            Strategy::Psaw => run_psaw(dataset, embeddings, config),
            Strategy::PsawI => run_psaw_i(dataset, embeddings, config),
            Strategy::PsawPKmeans => run_psaw_p(dataset, embeddings, config, PartitionMode::KMeans),
            Strategy::PsawPRandom => run_psaw_p(dataset, embeddings, config, PartitionMode::Random),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| format!("unknown strategy `{s}` (expected psaw, psaw-i, psaw-p-kmeans or psaw-p-random)"))
    }
}

/// Where word vectors come from: a file, or co-occurrence vectors built from
/// the training corpus (`fallback`).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "String", into = "String")]
pub enum EmbeddingSource {
    #[default]
    Fallback,
    File(PathBuf),
}

impl From<String> for EmbeddingSource {
    fn from(s: String) -> Self {
        if s == "fallback" {
            EmbeddingSource::Fallback
        } else {
            EmbeddingSource::File(PathBuf::from(s))
        }
    }
}

impl From<EmbeddingSource> for String {
    fn from(s: EmbeddingSource) -> Self {
        match s {
            EmbeddingSource::Fallback => "fallback".to_owned(),
            EmbeddingSource::File(p) => p.display().to_string(),
        }
    }
}

impl EmbeddingSource {
    pub fn load(&self, corpus: &LabeledCorpus) -> Result<EmbeddingTable<f64>, CliError> {
        match self {
            EmbeddingSource::Fallback => build_fallback_embeddings(
                corpus.documents().iter().map(|d| d.as_ref()),
                FALLBACK_WINDOW,
                FALLBACK_DIMENSION,
            )
            .map_err(|e| CliError::Data(format!("fallback embeddings: {e}"))),
            EmbeddingSource::File(path) => load_embeddings(path).map_err(|e| CliError::Data(e.to_string())),
        }
    }
}

/// Everything a training run needs.
///
/// TOML form (every key optional):
///
/// ```toml
/// corpus = "train.tsv"
/// test_corpus = "test.tsv"
/// classes = ["child_fever"]      # empty: every class in the corpus
/// embeddings = "fallback"        # or a path to a text/word2vec file
/// strategy = "psaw"
/// tokenizer = "whitespace"       # or "per-character"
/// stop_words = "stop.txt"
/// out = "model"
///
/// [anneal]
/// seed = 7
/// total_iterations = 500
/// workers = 4
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub corpus: Option<PathBuf>,
    pub test_corpus: Option<PathBuf>,
    pub classes: Vec<String>,
    pub embeddings: EmbeddingSource,
    pub strategy: Strategy,
    pub tokenizer: TokenizerMode,
    pub stop_words: Option<PathBuf>,
    pub out: PathBuf,
    pub anneal: AnnealConfig<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            corpus: None,
            test_corpus: None,
            classes: Vec::new(),
            embeddings: EmbeddingSource::Fallback,
            strategy: Strategy::Psaw,
            tokenizer: TokenizerMode::Whitespace,
            stop_words: None,
            out: PathBuf::from("rxlearn-out"),
            anneal: AnnealConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn tokenizer_config(&self) -> Result<TokenizerConfig, CliError> {
        tokenizer_config(self.tokenizer, self.stop_words.as_deref())
    }
}

pub fn tokenizer_config(mode: TokenizerMode, stop_words: Option<&Path>) -> Result<TokenizerConfig, CliError> {
    let mut config = TokenizerConfig::new(mode);
    if let Some(path) = stop_words {
        config = config.with_stop_words(load_stop_words(path).map_err(|e| CliError::Config(e.to_string()))?);
    }
    Ok(config)
}

fn read_corpus(path: &Path, tokenizer: &TokenizerConfig) -> Result<LabeledCorpus, CliError> {
    load_corpus(path, CorpusFormat::from_path(path), tokenizer)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

/// File-name stem for a class: ASCII letters, digits, `-` and `_` are kept,
/// everything else becomes `_`.
pub fn class_slug(class: &str) -> String {
    let slug: String =
        class.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect();
    if slug.is_empty() {
        "class".to_owned()
    } else {
        slug
    }
}

fn unique_slugs<'a>(classes: impl IntoIterator<Item = &'a str>) -> Vec<String> {
    let mut seen = BTreeSet::new();
    classes
        .into_iter()
        .map(|c| {
            let base = class_slug(c);
            let mut slug = base.clone();
            let mut n = 2;
            while !seen.insert(slug.clone()) {
                slug = format!("{base}-{n}");
                n += 1;
            }
            slug
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassOutcome {
    pub class: String,
    pub slug: String,
    pub rules: usize,
    pub complexity: usize,
    pub rounds: usize,
    pub train: EvalMetrics<f64>,
    /// `None` without a test corpus or when the class has no test positives.
    pub test: Option<EvalMetrics<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassFailure {
    pub class: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub strategy: Strategy,
    pub seed: u64,
    pub beta: f64,
    pub classes: Vec<ClassOutcome>,
    pub failed: Vec<ClassFailure>,
}

impl TrainReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "strategy {}  seed {}  beta {}", self.strategy, self.seed, self.beta);
        let _ = writeln!(
            out,
            "{:<24} {:>5} {:>6} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9}",
            "class", "rules", "size", "train_p", "train_r", "train_f", "test_p", "test_r", "test_f"
        );
        for c in &self.classes {
            let test =
                |f: fn(&EvalMetrics<f64>) -> f64| c.test.as_ref().map_or("-".to_owned(), |m| format!("{:.4}", f(m)));
            let _ = writeln!(
                out,
                "{:<24} {:>5} {:>6} {:>9.4} {:>9.4} {:>9.4} {:>9} {:>9} {:>9}",
                c.class,
                c.rules,
                c.complexity,
                c.train.precision,
                c.train.recall,
                c.train.f_beta,
                test(|m| m.precision),
                test(|m| m.recall),
                test(|m| m.f_beta),
            );
        }
        for f in &self.failed {
            let _ = writeln!(out, "FAILED {}: {}", f.class, f.error);
        }
        out
    }
}

/// Trains one classifier per requested class and writes, into `config.out`:
/// `<slug>.classifier`, `<slug>.patterns.txt`, `<slug>.metrics.json`,
/// `<slug>.history.jsonl`, plus `train_report.txt` and `train_report.json`.
///
/// Classes whose training fails are reported and skipped; the run then ends
/// with [`CliError::Training`] after all other classes are written.
pub fn cmd_train(config: &RunConfig) -> Result<TrainReport, CliError> {
    config.anneal.validate().map_err(CliError::from)?;
    if matches!(config.strategy, Strategy::PsawPKmeans | Strategy::PsawPRandom) && config.anneal.rules_per_solution < 2
    {
        return Err(CliError::Config("the partitioned strategies need at least 2 rules".into()));
    }
    let corpus_path = config.corpus.as_deref().ok_or_else(|| CliError::Config("no training corpus given".into()))?;
    let tokenizer = config.tokenizer_config()?;
    let corpus = read_corpus(corpus_path, &tokenizer)?;
    let test = config.test_corpus.as_deref().map(|p| read_corpus(p, &tokenizer)).transpose()?;

    let classes: Vec<String> =
        if config.classes.is_empty() { corpus.classes().iter().cloned().collect() } else { config.classes.clone() };
    if let Some(missing) = classes.iter().find(|c| !corpus.classes().contains(*c)) {
        return Err(CliError::Data(format!("unknown class `{missing}` in {}", corpus_path.display())));
    }
    let embeddings = config.embeddings.load(&corpus)?;
    fs::create_dir_all(&config.out).map_err(|e| CliError::Data(format!("{}: {e}", config.out.display())))?;

    let beta = config.anneal.beta;
    let mut report = TrainReport {
        strategy: config.strategy,
        seed: config.anneal.seed,
        beta,
        classes: Vec::new(),
        failed: Vec::new(),
    };
    for (class, slug) in classes.iter().zip(unique_slugs(classes.iter().map(String::as_str))) {
        let dataset = corpus.binary_split(class)?;
        let started = Instant::now();
        let result = match config.strategy.run(&dataset, &embeddings, &config.anneal) {
            Ok(r) => r,
            Err(e @ (TrainError::NoKeywords(_) | TrainError::Mutation(_))) => {
                log::error!("class `{class}`: {e}");
                report.failed.push(ClassFailure { class: class.clone(), error: e.to_string() });
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        log::info!(
            "class `{class}`: F = {:.4} after {} rounds in {:.2?}",
            result.metrics.f_beta,
            result.history.len(),
            started.elapsed()
        );
        let test_metrics = match &test {
            Some(t) if t.classes().contains(class) => {
                let split = t.binary_split(class)?;
                Some(Evaluator::new(&split).metrics(&result.best, beta).map_err(|e| CliError::Data(e.to_string()))?)
            }
            Some(_) => {
                log::warn!("class `{class}` does not occur in the test corpus");
                None
            }
            None => None,
        };

        let file = ClassifierFile { class: class.clone(), classifier: result.best.clone() };
        write_file(&config.out.join(format!("{slug}.classifier")), &write_classifier_file(&file))?;
        write_file(&config.out.join(format!("{slug}.patterns.txt")), &export_text(&file))?;
        let mut history = String::new();
        for record in &result.history {
            history.push_str(&serde_json::to_string(record).expect("history record serializes"));
            history.push('\n');
        }
        write_file(&config.out.join(format!("{slug}.history.jsonl")), &history)?;
        let outcome = ClassOutcome {
            class: class.clone(),
            slug: slug.clone(),
            rules: result.best.rules.len(),
            complexity: result.best.complexity(),
            rounds: result.history.len(),
            train: result.metrics,
            test: test_metrics,
        };
        let metrics_json = serde_json::to_string_pretty(&outcome).expect("metrics serialize");
        write_file(&config.out.join(format!("{slug}.metrics.json")), &(metrics_json + "\n"))?;
        report.classes.push(outcome);
    }

    write_file(&config.out.join("train_report.txt"), &report.to_text())?;
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    write_file(&config.out.join("train_report.json"), &(json + "\n"))?;
    if !report.failed.is_empty() {
        let names: Vec<&str> = report.failed.iter().map(|f| f.class.as_str()).collect();
        return Err(CliError::Training(format!("no classifier learned for {}", names.join(", "))));
    }
    Ok(report)
}

/// Counts of values in `[0, 0.1)`, `[0.1, 0.2)`, ..., `[0.9, 1.0]`.
pub fn decile_histogram(values: impl IntoIterator<Item = f64>) -> [u64; 10] {
    let mut bins = [0u64; 10];
    for v in values {
        let b = ((v * 10.0).floor().max(0.0) as usize).min(9);
        bins[b] += 1;
    }
    bins
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRow {
    pub class: String,
    pub source: PathBuf,
    pub metrics: EvalMetrics<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub beta: f64,
    pub rows: Vec<EvalRow>,
    /// Classes of loaded classifiers that have no positive document in the
    /// corpus; they have no recall and are left out of the rows.
    pub absent: Vec<String>,
    pub precision_deciles: [u64; 10],
    pub recall_deciles: [u64; 10],
    pub f_beta_deciles: [u64; 10],
}

impl EvalReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<24} {:>8} {:>8} {:>8} {:>9} {:>9} {:>9}",
            "class", "matched", "false", "pos", "precision", "recall", "f_beta"
        );
        for r in &self.rows {
            let c = r.metrics.counts;
            let _ = writeln!(
                out,
                "{:<24} {:>8} {:>8} {:>8} {:>9.4} {:>9.4} {:>9.4}",
                r.class,
                c.true_matches,
                c.false_matches,
                c.positives_total,
                r.metrics.precision,
                r.metrics.recall,
                r.metrics.f_beta
            );
        }
        for a in &self.absent {
            let _ = writeln!(out, "{a:<24} (no positive documents in this corpus)");
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "classifiers per decile (beta {}):", self.beta);
        let _ = writeln!(out, "{:<12} {:>9} {:>9} {:>9}", "range", "precision", "recall", "f_beta");
        for b in 0..10 {
            let range = format!("{:.1}-{:.1}", b as f64 / 10.0, (b + 1) as f64 / 10.0);
            let _ = writeln!(
                out,
                "{:<12} {:>9} {:>9} {:>9}",
                range, self.precision_deciles[b], self.recall_deciles[b], self.f_beta_deciles[b]
            );
        }
        out
    }
}

/// Classifier files named by `paths`; directories contribute their
/// `*.classifier` entries in name order.
pub fn classifier_paths(paths: &[PathBuf]) -> Result<Vec<PathBuf>, CliError> {
    let mut out = Vec::new();
    for path in paths {
        if path.is_dir() {
            let entries = fs::read_dir(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
            let mut found: Vec<PathBuf> = entries
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "classifier"))
                .collect();
            found.sort();
            out.extend(found);
        } else {
            out.push(path.clone());
        }
    }
    if out.is_empty() {
        return Err(CliError::Data("no classifier files given".into()));
    }
    Ok(out)
}

pub fn read_classifier(path: &Path) -> Result<ClassifierFile, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    parse_classifier_file(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

/// Scores each classifier against its own class in `corpus`.
pub fn cmd_eval(
    paths: &[PathBuf],
    corpus: &Path,
    beta: f64,
    tokenizer: &TokenizerConfig,
) -> Result<EvalReport, CliError> {
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(CliError::Config(EvalError::InvalidBeta.to_string()));
    }
    let files: Vec<(PathBuf, ClassifierFile)> =
        classifier_paths(paths)?.into_iter().map(|p| read_classifier(&p).map(|f| (p, f))).collect::<Result<_, _>>()?;
    let corpus = read_corpus(corpus, tokenizer)?;
    let mut splits = BTreeMap::new();
    let mut rows = Vec::new();
    let mut absent = Vec::new();
    for (path, file) in files {
        if !corpus.classes().contains(&file.class) {
            absent.push(file.class);
            continue;
        }
        if !splits.contains_key(&file.class) {
            splits.insert(file.class.clone(), corpus.binary_split(&file.class)?);
        }
        let split = &splits[&file.class];
        let metrics =
            Evaluator::new(split).metrics(&file.classifier, beta).map_err(|e| CliError::Data(e.to_string()))?;
        rows.push(EvalRow { class: file.class, source: path, metrics });
    }
    Ok(EvalReport {
        beta,
        precision_deciles: decile_histogram(rows.iter().map(|r| r.metrics.precision)),
        recall_deciles: decile_histogram(rows.iter().map(|r| r.metrics.recall)),
        f_beta_deciles: decile_histogram(rows.iter().map(|r| r.metrics.f_beta)),
        rows,
        absent,
    })
}

/// Writes `eval_report.txt` and `eval_report.json` into `out`.
pub fn write_eval_report(report: &EvalReport, out: &Path) -> Result<(), CliError> {
    fs::create_dir_all(out).map_err(|e| CliError::Data(format!("{}: {e}", out.display())))?;
    write_file(&out.join("eval_report.txt"), &report.to_text())?;
    let json = serde_json::to_string_pretty(report).expect("report serializes");
    write_file(&out.join("eval_report.json"), &(json + "\n"))
}

/// Annotated classifier text: the decoded patterns of every rule with the
/// accept rule spelled out. The output is itself a valid classifier file.
pub fn export_text(file: &ClassifierFile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# class {}: a text belongs to the class when, for some rule,", file.class);
    let _ = writeln!(out, "# the positive pattern matches and the negative pattern does not.");
    let _ = writeln!(out, "# Patterns expect dot-matches-newline mode.");
    let _ = writeln!(out, "class {}", serde_json::to_string(&file.class).expect("string serializes"));
    let _ = writeln!(out, "rules {}", file.classifier.rules.len());
    for (i, rule) in file.classifier.rules.iter().enumerate() {
        let decoded = decode(rule);
        let _ = writeln!(out, "rule {}", i + 1);
        if rule.positive.is_empty() {
            let _ = writeln!(out, "# positive part is empty: this rule accepts nothing");
        }
        let _ = writeln!(out, "positive {}", decoded.positive);
        if rule.negative.is_empty() {
            let _ = writeln!(out, "# negative part is empty: nothing is excluded");
        }
        let _ = writeln!(out, "negative {}", decoded.negative);
        let _ = writeln!(out, "ast {}", format_rule(rule));
    }
    out
}

pub fn cmd_export(path: &Path) -> Result<String, CliError> {
    Ok(export_text(&read_classifier(path)?))
}

/// Generates a corpus from the TOML spec at `spec` and writes it to `out`
/// (JSONL for `.jsonl`/`.json`, TSV otherwise). Returns the document count.
pub fn cmd_synth(spec: &Path, seed: u64, out: &Path) -> Result<usize, CliError> {
    let text = fs::read_to_string(spec).map_err(|e| CliError::Config(format!("{}: {e}", spec.display())))?;
    let spec = SynthSpec::from_toml_str(&text).map_err(|e| CliError::Config(e.to_string()))?;
    let corpus = generate_synthetic_corpus(&spec, seed).map_err(|e| CliError::Config(e.to_string()))?;
    let mut bytes = Vec::new();
    write_corpus(&corpus, &mut bytes, CorpusFormat::from_path(out)).map_err(|e| CliError::Data(e.to_string()))?;
    fs::write(out, bytes).map_err(|e| CliError::Data(format!("{}: {e}", out.display())))?;
    Ok(corpus.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slugs_are_unique_and_safe() {
        assert_eq!(class_slug("child fever/2"), "child_fever_2");
        assert_eq!(class_slug(""), "class");
        assert_eq!(unique_slugs(["a b", "a_b", "a?b"]), vec!["a_b", "a_b-2", "a_b-3"]);
    }

    #[test]
    fn deciles() {
        assert_eq!(decile_histogram([0.0, 0.05, 0.1, 0.95, 1.0]), [2, 1, 0, 0, 0, 0, 0, 0, 0, 2]);
    }

    #[test]
    fn config_file_and_defaults() {
        let c = RunConfig::from_toml_str(
            "corpus = \"a.tsv\"\nstrategy = \"psaw-p-kmeans\"\nembeddings = \"vec.txt\"\n[anneal]\nseed = 9\n",
        )
        .unwrap();
        assert_eq!(c.strategy, Strategy::PsawPKmeans);
        assert_eq!(c.embeddings, EmbeddingSource::File("vec.txt".into()));
        assert_eq!(c.anneal.seed, 9);
        assert_eq!(c.anneal.pool_capacity, 10);
        assert!(matches!(RunConfig::from_toml_str("bogus = 1"), Err(CliError::Config(_))));
        assert_eq!(RunConfig::default().embeddings, EmbeddingSource::Fallback);
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in Strategy::ALL {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
        assert!("psaw-x".parse::<Strategy>().is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Config(String::new()).exit_code(), 1);
        assert_eq!(CliError::Data(String::new()).exit_code(), 2);
        assert_eq!(CliError::Training(String::new()).exit_code(), 3);
        assert_eq!(CliError::from(TrainError::NoKeywords("x".into())).exit_code(), 3);
    }
}
