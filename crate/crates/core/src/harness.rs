//! Config-driven experiment runs.
//!
//! [`run_grid`] trains every (task, model) cell on a seeded 800/200/200
//! tweet split and scores it in binary mode and, for three-way tasks, in
//! multiclass mode. [`run_cross_domain`] trains binary logistic regression
//! on tweets, essays and both, and tests each model on both test sets.
//! All randomness derives from `ExperimentConfig::seed`.

use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{load_essay_conll, load_tweet_corpus, EssayParagraph, TweetRecord};
use crate::embeddings::{load_vec, EmbeddingTable};
use crate::eval::{report_table, CellMetrics, ClassScore, EvalMode};
use crate::models::{ModelKind, TrainConfig};
use crate::preprocess::{preprocess, tokenize};
use crate::tasks::{
    collapse_to_binary, predictions_from_binary, run_task, train_binary, Example, PredictionSet,
    TaskConfig, TaskKind, DEFAULT_LAMBDA_GRID,
};
use crate::{Error, Result, TaskLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitSizes {
    pub train: usize,
    pub val: usize,
    pub test: usize,
}

impl Default for SplitSizes {
    fn default() -> Self {
        Self {
            train: 800,
            val: 200,
            test: 200,
        }
    }
}

impl SplitSizes {
    pub fn total(&self) -> usize {
        self.train + self.val + self.test
    }
}

fn default_tasks() -> Vec<TaskKind> {
    TaskKind::ALL.to_vec()
}

fn default_models() -> Vec<ModelKind> {
    vec![ModelKind::NaiveBayes, ModelKind::LogisticRegression]
}

fn default_lambda_grid() -> Vec<f64> {
    DEFAULT_LAMBDA_GRID.to_vec()
}

fn yes() -> bool {
    true
}

/// JSON experiment description. Only `tweets`, `embeddings` and `seed`
/// are required.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Annotated tweet corpus (JSONL).
    pub tweets: PathBuf,
    /// Directory with the essay `train*`, `dev*` and `test*` CONLL files.
    #[serde(default)]
    pub essays: Option<PathBuf>,
    /// Word vectors in `.vec` format.
    pub embeddings: PathBuf,
    /// Read at most this many vectors.
    #[serde(default)]
    pub embedding_limit: Option<usize>,
    pub seed: u64,
    #[serde(default)]
    pub split: SplitSizes,
    #[serde(default = "default_tasks")]
    pub tasks: Vec<TaskKind>,
    #[serde(default = "default_models")]
    pub models: Vec<ModelKind>,
    #[serde(default = "default_lambda_grid")]
    pub lambda_grid: Vec<f64>,
    /// Optimizer settings; its seed is overwritten by `seed`.
    #[serde(default)]
    pub train: TrainConfig,
    #[serde(default = "yes")]
    pub standardize: bool,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    /// A config with default settings for the given inputs.
    pub fn new(tweets: impl Into<PathBuf>, embeddings: impl Into<PathBuf>, seed: u64) -> Self {
        Self {
            tweets: tweets.into(),
            essays: None,
            embeddings: embeddings.into(),
            embedding_limit: None,
            seed,
            split: SplitSizes::default(),
            tasks: default_tasks(),
            models: default_models(),
            lambda_grid: default_lambda_grid(),
            train: TrainConfig::default(),
            standardize: true,
            output_dir: None,
        }
    }

    /// Parses a config file; relative paths are taken relative to its directory.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config: ExperimentConfig = serde_json::from_str(&text)
            .map_err(|e| Error::from(e).context(format!("config {}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        resolve(&mut config.tweets);
        resolve(&mut config.embeddings);
        config.essays.as_mut().map(resolve);
        config.output_dir.as_mut().map(resolve);
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.tasks.is_empty() || self.models.is_empty() {
            return Err(Error::invalid("task and model lists must be nonempty"));
        }
        if self.lambda_grid.is_empty()
            || self
                .lambda_grid
                .iter()
                .any(|l| !(l.is_finite() && *l >= 0.0))
        {
            return Err(Error::invalid(
                "lambda_grid must hold finite non-negative values",
            ));
        }
        self.train.validate()
    }

    pub fn task_config(&self, model: ModelKind) -> TaskConfig {
        TaskConfig {
            model,
            train: TrainConfig {
                seed: self.seed,
                ..self.train
            },
            lambda_grid: self.lambda_grid.clone(),
            standardize: self.standardize,
        }
    }
}

/// Seeded uniform shuffle, then contiguous train/val/test slices.
pub fn split_tweets<T: Clone>(
    records: &[T],
    seed: u64,
    sizes: SplitSizes,
) -> Result<(Vec<T>, Vec<T>, Vec<T>)> {
    if sizes.total() != records.len() {
        return Err(Error::invalid(format!(
            "split sizes {}+{}+{} do not add up to {} records",
            sizes.train,
            sizes.val,
            sizes.test,
            records.len()
        )));
    }
    let mut order: Vec<usize> = (0..records.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let pick = |idx: &[usize]| idx.iter().map(|&i| records[i].clone()).collect::<Vec<T>>();
    let (train, rest) = order.split_at(sizes.train);
    let (val, test) = rest.split_at(sizes.val);
    Ok((pick(train), pick(val), pick(test)))
}

pub fn tweet_examples(records: &[TweetRecord], table: &EmbeddingTable) -> Vec<Example> {
    records
        .iter()
        .map(|r| Example {
            id: r.id.clone(),
            features: table.embed_document(&preprocess(&r.text)).values,
            label: TaskLabel::from(r.label),
        })
        .collect()
}

/// Essay tokens are re-joined and run through the tweet tokenizer.
pub fn essay_examples(paragraphs: &[EssayParagraph], table: &EmbeddingTable) -> Vec<Example> {
    paragraphs
        .iter()
        .map(|p| Example {
            id: p.doc_id(),
            features: table.embed_document(&tokenize(&p.tokens.join(" "))).values,
            label: TaskLabel::from(p.label),
        })
        .collect()
}

/// Featurized train/validation/test documents of one domain.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Splits {
    pub train: Vec<Example>,
    pub val: Vec<Example>,
    pub test: Vec<Example>,
}

impl Splits {
    fn zero_vector_docs(&self) -> usize {
        [&self.train, &self.val, &self.test]
            .into_iter()
            .flatten()
            .filter(|e| e.features.iter().all(|&v| v == 0.0))
            .count()
    }
}

fn load_table(config: &ExperimentConfig) -> Result<EmbeddingTable> {
    load_vec(&config.embeddings, config.embedding_limit)
}

fn tweet_splits(config: &ExperimentConfig, table: &EmbeddingTable) -> Result<Splits> {
    let records = load_tweet_corpus(&config.tweets)?;
    let (train, val, test) = split_tweets(&records, config.seed, config.split)?;
    Ok(Splits {
        train: tweet_examples(&train, table),
        val: tweet_examples(&val, table),
        test: tweet_examples(&test, table),
    })
}

fn essay_splits(config: &ExperimentConfig, table: &EmbeddingTable) -> Result<Splits> {
    let dir = config
        .essays
        .as_ref()
        .ok_or_else(|| Error::invalid("config has no `essays` directory"))?;
    let corpus = load_essay_conll(dir)?;
    Ok(Splits {
        train: essay_examples(&corpus.train, table),
        val: essay_examples(&corpus.dev, table),
        test: essay_examples(&corpus.test, table),
    })
}

/// Metadata of one trained (task, model) cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub task: TaskKind,
    pub model: ModelKind,
    pub task_config: TaskConfig,
    pub selected_lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stage2_lambda: Option<f64>,
    pub n_train: usize,
    pub n_val: usize,
    pub n_test: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridReport {
    pub seed: u64,
    pub config: ExperimentConfig,
    pub notes: Vec<String>,
    pub runs: Vec<RunRecord>,
    pub cells: Vec<CellMetrics>,
    #[serde(skip)]
    pub predictions: Vec<PredictionSet>,
}

impl GridReport {
    pub fn table(&self) -> String {
        report_table(&self.cells)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Writes `report.tsv`, `report.json` and one prediction TSV per run.
    pub fn write_to(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        write_file(&dir.join("report.tsv"), self.table().as_bytes())?;
        write_file(
            &dir.join("report.json"),
            (self.to_json()? + "\n").as_bytes(),
        )?;
        for p in &self.predictions {
            let path = dir.join(format!("predictions_{}_{}.tsv", p.task, p.model));
            let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
            let mut out = BufWriter::new(file);
            p.write_tsv(&mut out)
                .and_then(|_| out.flush())
                .map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

const ESSAY_NOTE: &str = "essay paragraphs are re-tokenized with the tweet tokenizer";

/// Loads the corpus and vectors named in `config` and runs the grid.
pub fn run_grid(config: &ExperimentConfig) -> Result<GridReport> {
    config.validate()?;
    let table = load_table(config)?;
    let splits = tweet_splits(config, &table)?;
    run_grid_on(config, &splits)
}

/// Runs the grid on already featurized splits. Cells run in parallel;
/// results keep the config's model-then-task order.
pub fn run_grid_on(config: &ExperimentConfig, splits: &Splits) -> Result<GridReport> {
    config.validate()?;
    let jobs: Vec<(ModelKind, TaskKind)> = config
        .models
        .iter()
        .flat_map(|&m| config.tasks.iter().map(move |&t| (m, t)))
        .collect();

    let results: Vec<Result<PredictionSet>> = jobs
        .par_iter()
        .map(|&(model, task)| {
            run_task(
                task,
                &splits.train,
                &splits.val,
                &splits.test,
                &config.task_config(model),
            )
            .map_err(|e| e.context(format!("{task}/{model}")))
        })
        .collect();

    let mut runs = Vec::new();
    let mut cells = Vec::new();
    let mut predictions = Vec::new();
    for result in results {
        let p = result?;
        runs.push(RunRecord {
            task: p.task,
            model: p.model,
            task_config: p.meta.config.clone(),
            selected_lambda: p.meta.selected_lambda,
            stage2_lambda: p.meta.stage2_lambda,
            n_train: splits.train.len(),
            n_val: splits.val.len(),
            n_test: splits.test.len(),
        });
        if p.task == TaskKind::Binary {
            cells.push(CellMetrics {
                eval_mode: EvalMode::Binary,
                task: p.task,
                model: p.model,
                metrics: p.metrics(),
            });
        } else {
            cells.push(CellMetrics {
                eval_mode: EvalMode::Binary,
                task: p.task,
                model: p.model,
                metrics: collapse_to_binary(&p)?.metrics(),
            });
            cells.push(CellMetrics {
                eval_mode: EvalMode::Multiclass,
                task: p.task,
                model: p.model,
                metrics: p.metrics(),
            });
        }
        predictions.push(p);
    }

    let mut notes = vec![format!(
        "{} documents have no known token and use the zero vector",
        splits.zero_vector_docs()
    )];
    if config.essays.is_some() {
        notes.push(ESSAY_NOTE.to_string());
    }
    Ok(GridReport {
        seed: config.seed,
        config: config.clone(),
        notes,
        runs,
        cells,
        predictions,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Twitter,
    Essay,
    Combined,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Twitter => "twitter",
            Source::Essay => "essay",
            Source::Combined => "combined",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Claim-class scores of one train/test domain pairing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossDomainCell {
    pub train_source: Source,
    pub test_source: Source,
    pub selected_lambda: Option<f64>,
    pub claim: ClassScore<TaskLabel>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossDomainReport {
    pub seed: u64,
    pub config: ExperimentConfig,
    pub notes: Vec<String>,
    pub cells: Vec<CrossDomainCell>,
}

impl CrossDomainReport {
    pub fn cell(&self, train: Source, test: Source) -> Option<&CrossDomainCell> {
        self.cells
            .iter()
            .find(|c| c.train_source == train && c.test_source == test)
    }

    /// `train  test  P  R  F1`, two decimals.
    pub fn table(&self) -> String {
        let mut out = String::from("train\ttest\tP\tR\tF1\n");
        for c in &self.cells {
            out.push_str(&format!(
                "{}\t{}\t{:.2}\t{:.2}\t{:.2}\n",
                c.train_source, c.test_source, c.claim.precision, c.claim.recall, c.claim.f1
            ));
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Writes `cross_domain.tsv` and `cross_domain.json`.
    pub fn write_to(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        write_file(&dir.join("cross_domain.tsv"), self.table().as_bytes())?;
        write_file(
            &dir.join("cross_domain.json"),
            (self.to_json()? + "\n").as_bytes(),
        )
    }
}

const CROSS_CELLS: [(Source, Source); 6] = [
    (Source::Twitter, Source::Twitter),
    (Source::Essay, Source::Twitter),
    (Source::Combined, Source::Twitter),
    (Source::Essay, Source::Essay),
    (Source::Twitter, Source::Essay),
    (Source::Combined, Source::Essay),
];

pub fn run_cross_domain(config: &ExperimentConfig) -> Result<CrossDomainReport> {
    config.validate()?;
    let table = load_table(config)?;
    let tweets = tweet_splits(config, &table)?;
    let essays = essay_splits(config, &table)?;
    run_cross_domain_on(config, &tweets, &essays)
}

/// Binary logistic regression only. The combined model trains on both
/// training splits, oversampled as one pool, and is tuned on the tweet
/// validation split; the essay model is tuned on the essay dev split.
pub fn run_cross_domain_on(
    config: &ExperimentConfig,
    tweets: &Splits,
    essays: &Splits,
) -> Result<CrossDomainReport> {
    config.validate()?;
    let task_config = config.task_config(ModelKind::LogisticRegression);
    let combined: Vec<Example> = tweets.train.iter().chain(&essays.train).cloned().collect();

    let sources = [Source::Twitter, Source::Essay, Source::Combined];
    let models = sources
        .par_iter()
        .map(|source| {
            let (train, val) = match source {
                Source::Twitter => (&tweets.train[..], &tweets.val[..]),
                Source::Essay => (&essays.train[..], &essays.val[..]),
                Source::Combined => (&combined[..], &tweets.val[..]),
            };
            train_binary(train, val, &task_config)
                .map_err(|e| e.context(format!("training on {source}")))
        })
        .collect::<Result<Vec<_>>>()?;

    let cells = CROSS_CELLS
        .iter()
        .map(|&(train_source, test_source)| {
            let model = &models[sources
                .iter()
                .position(|s| *s == train_source)
                .expect("known source")];
            let test = match test_source {
                Source::Essay => &essays.test,
                _ => &tweets.test,
            };
            let p = predictions_from_binary(model, test, &task_config)?;
            let claim = p
                .metrics()
                .get(&TaskLabel::Claim)
                .cloned()
                .expect("binary metrics include the claim class");
            Ok(CrossDomainCell {
                train_source,
                test_source,
                selected_lambda: model.selected_lambda,
                claim,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(CrossDomainReport {
        seed: config.seed,
        config: config.clone(),
        notes: vec![ESSAY_NOTE.to_string()],
        cells,
    })
}
