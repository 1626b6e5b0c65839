//! Binary, three-way and two-stage pipeline claim classification.
//!
//! Every run trains on an oversampled copy of its training split, picks the
//! logistic-regression penalty on the validation split (macro F1, first
//! grid value wins ties) and predicts the untouched test split.

use std::collections::HashSet;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::eval::{confusion, prf_per_class, ClassMetrics};
use crate::labels::LabelSpace;
use crate::models::{
    lg_fit, nb_fit, oversample_indices, FeatureScaler, Model, ModelKind, TrainConfig,
};
use crate::{Error, Result, TaskLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    Binary,
    Multiclass,
    Pipeline,
}

impl TaskKind {
    pub const ALL: [TaskKind; 3] = [TaskKind::Binary, TaskKind::Multiclass, TaskKind::Pipeline];

    pub fn as_str(self) -> &'static str {
        match self {
            TaskKind::Binary => "binary",
            TaskKind::Multiclass => "multiclass",
            TaskKind::Pipeline => "pipeline",
        }
    }

    pub fn label_space(self) -> LabelSpace {
        match self {
            TaskKind::Binary => LabelSpace::Binary,
            TaskKind::Multiclass | TaskKind::Pipeline => LabelSpace::ThreeWay,
        }
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TaskKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TaskKind::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown task `{s}`")))
    }
}

/// A featurized, labeled document.
#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub id: String,
    pub features: Vec<f64>,
    pub label: TaskLabel,
}

pub const DEFAULT_LAMBDA_GRID: [f64; 4] = [1e-4, 1e-3, 1e-2, 1e-1];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskConfig {
    pub model: ModelKind,
    pub train: TrainConfig,
    /// Candidate L2 penalties for logistic regression.
    pub lambda_grid: Vec<f64>,
    /// Standardize features with statistics of the training split.
    pub standardize: bool,
}

impl TaskConfig {
    pub fn new(model: ModelKind) -> Self {
        Self {
            model,
            train: TrainConfig::default(),
            lambda_grid: DEFAULT_LAMBDA_GRID.to_vec(),
            standardize: true,
        }
    }
}

/// A classifier over a fixed, ordered label list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageModel {
    pub classes: Vec<TaskLabel>,
    pub scaler: Option<FeatureScaler>,
    pub model: Model,
    pub selected_lambda: Option<f64>,
}

impl StageModel {
    /// Trains on `train` (labels passed through `project`), selecting the
    /// penalty on `val`.
    pub fn train(
        train: &[&Example],
        val: &[&Example],
        classes: &[TaskLabel],
        project: fn(TaskLabel) -> TaskLabel,
        config: &TaskConfig,
        seed: u64,
    ) -> Result<Self> {
        let class_id = |e: &Example| -> Result<usize> {
            let l = project(e.label);
            classes.iter().position(|c| *c == l).ok_or_else(|| {
                Error::invalid(format!(
                    "document `{}` has label {l}, expected one of {classes:?}",
                    e.id
                ))
            })
        };
        let y: Vec<usize> = train.iter().map(|e| class_id(e)).collect::<Result<_>>()?;
        if train.is_empty() {
            return Err(Error::EmptyInput("training split is empty"));
        }
        let mut present = vec![false; classes.len()];
        y.iter().for_each(|&c| present[c] = true);
        if let Some(missing) = present.iter().position(|p| !p) {
            return Err(Error::MissingClass {
                class: classes[missing].to_string(),
            });
        }

        let scaler = if config.standardize {
            Some(FeatureScaler::fit(
                &train.iter().map(|e| &e.features[..]).collect::<Vec<_>>(),
            )?)
        } else {
            None
        };
        let transform = |e: &Example| -> Result<Vec<f64>> {
            match &scaler {
                Some(s) => s.transform(&e.features),
                None => Ok(e.features.clone()),
            }
        };
        let x: Vec<Vec<f64>> = train.iter().map(|e| transform(e)).collect::<Result<_>>()?;

        let idx = oversample_indices(&y, seed)?;
        let x_bal: Vec<&[f64]> = idx.iter().map(|&i| &x[i][..]).collect();
        let y_bal: Vec<usize> = idx.iter().map(|&i| y[i]).collect();

        let (model, selected_lambda) = match config.model {
            ModelKind::NaiveBayes => (
                Model::NaiveBayes(nb_fit(&x_bal, &y_bal, classes.len())?),
                None,
            ),
            ModelKind::LogisticRegression => {
                if config.lambda_grid.is_empty() {
                    return Err(Error::invalid("lambda_grid is empty"));
                }
                let val_x: Vec<Vec<f64>> =
                    val.iter().map(|e| transform(e)).collect::<Result<_>>()?;
                let val_y: Vec<usize> = val.iter().map(|e| class_id(e)).collect::<Result<_>>()?;
                let mut best: Option<(f64, Model, f64)> = None;
                for &lambda in &config.lambda_grid {
                    let params = lg_fit(&x_bal, &y_bal, classes.len(), &config.train, lambda)?;
                    let model = Model::LogisticRegression(params);
                    let score = if val_x.is_empty() {
                        0.0
                    } else {
                        let pred: Vec<usize> = val_x
                            .iter()
                            .map(|v| model.predict(v))
                            .collect::<Result<_>>()?;
                        let ids: Vec<usize> = (0..classes.len()).collect();
                        prf_per_class(&confusion(&val_y, &pred, &ids)?).macro_f1()
                    };
                    if best.as_ref().is_none_or(|(s, _, _)| score > *s) {
                        best = Some((score, model, lambda));
                    }
                    if val_x.is_empty() {
                        break;
                    }
                }
                let (_, model, lambda) = best.expect("grid is nonempty");
                (model, Some(lambda))
            }
        };
        Ok(Self {
            classes: classes.to_vec(),
            scaler,
            model,
            selected_lambda,
        })
    }

    pub fn predict(&self, features: &[f64]) -> Result<TaskLabel> {
        let id = match &self.scaler {
            Some(s) => self.model.predict(&s.transform(features)?)?,
            None => self.model.predict(features)?,
        };
        Ok(self.classes[id])
    }
}

fn identity(l: TaskLabel) -> TaskLabel {
    l
}

fn stage2_seed(seed: u64) -> u64 {
    seed ^ 0x9e37_79b9_7f4a_7c15
}

/// Claim vs non-claim model, the binary task and pipeline stage 1.
pub fn train_binary(train: &[Example], val: &[Example], config: &TaskConfig) -> Result<StageModel> {
    let train: Vec<&Example> = train.iter().collect();
    let val: Vec<&Example> = val.iter().collect();
    StageModel::train(
        &train,
        &val,
        LabelSpace::Binary.classes(),
        TaskLabel::to_binary,
        config,
        config.train.seed,
    )
}

pub fn train_multiclass(
    train: &[Example],
    val: &[Example],
    config: &TaskConfig,
) -> Result<StageModel> {
    let train: Vec<&Example> = train.iter().collect();
    let val: Vec<&Example> = val.iter().collect();
    StageModel::train(
        &train,
        &val,
        LabelSpace::ThreeWay.classes(),
        identity,
        config,
        config.train.seed,
    )
}

/// Explicit vs implicit model trained and tuned on gold claims only.
pub fn train_claim_type(
    train: &[Example],
    val: &[Example],
    config: &TaskConfig,
) -> Result<StageModel> {
    fn gold_claims(s: &[Example]) -> Vec<&Example> {
        s.iter().filter(|e| e.label.is_claim()).collect()
    }
    StageModel::train(
        &gold_claims(train),
        &gold_claims(val),
        &[TaskLabel::ExplicitClaim, TaskLabel::ImplicitClaim],
        identity,
        config,
        stage2_seed(config.train.seed),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub config: TaskConfig,
    pub selected_lambda: Option<f64>,
    /// Penalty of the explicit/implicit stage of a pipeline run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stage2_lambda: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionSet {
    pub task: TaskKind,
    pub model: ModelKind,
    pub space: LabelSpace,
    pub ids: Vec<String>,
    pub gold: Vec<TaskLabel>,
    pub predicted: Vec<TaskLabel>,
    pub meta: RunMeta,
}

impl PredictionSet {
    pub fn new(
        task: TaskKind,
        space: LabelSpace,
        ids: Vec<String>,
        gold: Vec<TaskLabel>,
        predicted: Vec<TaskLabel>,
        meta: RunMeta,
    ) -> Result<Self> {
        if ids.len() != gold.len() || gold.len() != predicted.len() {
            return Err(Error::invalid(format!(
                "{} ids, {} gold labels, {} predictions",
                ids.len(),
                gold.len(),
                predicted.len()
            )));
        }
        if let Some(bad) = gold.iter().chain(&predicted).find(|l| !space.contains(**l)) {
            return Err(Error::invalid(format!(
                "label {bad} outside the {space:?} label space"
            )));
        }
        Ok(Self {
            task,
            model: meta.config.model,
            space,
            ids,
            gold,
            predicted,
            meta,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn metrics(&self) -> ClassMetrics<TaskLabel> {
        let cm = confusion(&self.gold, &self.predicted, self.space.classes())
            .expect("labels validated at construction");
        prf_per_class(&cm)
    }

    /// `doc_id  gold  predicted  task  model`, tab-separated with a header.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "doc_id\tgold\tpredicted\ttask\tmodel")?;
        for ((id, g), p) in self.ids.iter().zip(&self.gold).zip(&self.predicted) {
            writeln!(out, "{id}\t{g}\t{p}\t{}\t{}", self.task, self.model)?;
        }
        Ok(())
    }
}

/// Maps explicit and implicit claims to `Claim` in gold and predictions.
pub fn collapse_to_binary(p: &PredictionSet) -> Result<PredictionSet> {
    if p.space == LabelSpace::Binary {
        return Err(Error::invalid("prediction set is already binary"));
    }
    let mut out = p.clone();
    out.space = LabelSpace::Binary;
    out.gold.iter_mut().for_each(|l| *l = l.to_binary());
    out.predicted.iter_mut().for_each(|l| *l = l.to_binary());
    Ok(out)
}

fn check_disjoint(splits: [&[Example]; 3]) -> Result<()> {
    let mut seen = HashSet::new();
    for e in splits.into_iter().flatten() {
        if !seen.insert(e.id.as_str()) {
            return Err(Error::SplitOverlap(e.id.clone()));
        }
    }
    Ok(())
}

fn predict_all(model: &StageModel, docs: &[Example]) -> Result<Vec<TaskLabel>> {
    docs.iter().map(|e| model.predict(&e.features)).collect()
}

fn three_way_gold(test: &[Example]) -> Result<Vec<TaskLabel>> {
    test.iter()
        .map(|e| {
            if LabelSpace::ThreeWay.contains(e.label) {
                Ok(e.label)
            } else {
                Err(Error::invalid(format!(
                    "document `{}` has no explicit/implicit distinction",
                    e.id
                )))
            }
        })
        .collect()
}

pub fn run_binary(
    train: &[Example],
    val: &[Example],
    test: &[Example],
    config: &TaskConfig,
) -> Result<PredictionSet> {
    check_disjoint([train, val, test])?;
    let model = train_binary(train, val, config)?;
    predictions_from_binary(&model, test, config)
}

/// Packages the predictions of an already trained binary model.
pub fn predictions_from_binary(
    model: &StageModel,
    test: &[Example],
    config: &TaskConfig,
) -> Result<PredictionSet> {
    PredictionSet::new(
        TaskKind::Binary,
        LabelSpace::Binary,
        test.iter().map(|e| e.id.clone()).collect(),
        test.iter().map(|e| e.label.to_binary()).collect(),
        predict_all(model, test)?,
        RunMeta {
            config: config.clone(),
            selected_lambda: model.selected_lambda,
            stage2_lambda: None,
        },
    )
}

pub fn run_multiclass(
    train: &[Example],
    val: &[Example],
    test: &[Example],
    config: &TaskConfig,
) -> Result<PredictionSet> {
    check_disjoint([train, val, test])?;
    let gold = three_way_gold(test)?;
    let model = train_multiclass(train, val, config)?;
    PredictionSet::new(
        TaskKind::Multiclass,
        LabelSpace::ThreeWay,
        test.iter().map(|e| e.id.clone()).collect(),
        gold,
        predict_all(&model, test)?,
        RunMeta {
            config: config.clone(),
            selected_lambda: model.selected_lambda,
            stage2_lambda: None,
        },
    )
}

/// Two-stage prediction: claim detection, then explicit/implicit on the
/// predicted claims. Stage-1 negatives are `NonClaim`.
pub fn run_pipeline(
    train: &[Example],
    val: &[Example],
    test: &[Example],
    config: &TaskConfig,
) -> Result<PredictionSet> {
    check_disjoint([train, val, test])?;
    let gold = three_way_gold(test)?;
    let stage1 = train_binary(train, val, config)?;
    let stage2 = train_claim_type(train, val, config)?;
    let predicted = compose_pipeline(&stage1, &stage2, test)?;
    PredictionSet::new(
        TaskKind::Pipeline,
        LabelSpace::ThreeWay,
        test.iter().map(|e| e.id.clone()).collect(),
        gold,
        predicted,
        RunMeta {
            config: config.clone(),
            selected_lambda: stage1.selected_lambda,
            stage2_lambda: stage2.selected_lambda,
        },
    )
}

pub fn compose_pipeline(
    stage1: &StageModel,
    stage2: &StageModel,
    docs: &[Example],
) -> Result<Vec<TaskLabel>> {
    docs.iter()
        .map(|e| match stage1.predict(&e.features)? {
            TaskLabel::NonClaim => Ok(TaskLabel::NonClaim),
            _ => stage2.predict(&e.features),
        })
        .collect()
}

pub fn run_task(
    task: TaskKind,
    train: &[Example],
    val: &[Example],
    test: &[Example],
    config: &TaskConfig,
) -> Result<PredictionSet> {
    match task {
        TaskKind::Binary => run_binary(train, val, test, config),
        TaskKind::Multiclass => run_multiclass(train, val, test, config),
        TaskKind::Pipeline => run_pipeline(train, val, test, config),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::{synthetic_examples, SyntheticSpec};

    fn splits(seed: u64) -> (Vec<Example>, Vec<Example>, Vec<Example>) {
        let all = synthetic_examples(&SyntheticSpec::default(), seed);
        let mut it = all.into_iter();
        let train: Vec<_> = it.by_ref().take(120).collect();
        let val: Vec<_> = it.by_ref().take(30).collect();
        let test: Vec<_> = it.collect();
        (train, val, test)
    }

    fn ex(id: &str, f: f64, label: TaskLabel) -> Example {
        Example {
            id: id.into(),
            features: vec![f],
            label,
        }
    }

    #[test]
    fn degenerate_all_non_claim_passes_through() {
        let train = vec![
            ex("a", -1.0, TaskLabel::NonClaim),
            ex("b", -0.8, TaskLabel::NonClaim),
            ex("c", 1.0, TaskLabel::ExplicitClaim),
        ];
        let test = vec![
            ex("t1", -1.0, TaskLabel::NonClaim),
            ex("t2", -0.9, TaskLabel::NonClaim),
        ];
        let p = run_binary(&train, &[], &test, &TaskConfig::new(ModelKind::NaiveBayes)).unwrap();
        assert_eq!(p.predicted, vec![TaskLabel::NonClaim; 2]);
        let m = p.metrics();
        assert_eq!(m.get(&TaskLabel::Claim).unwrap().recall, 0.0);
        assert_eq!(m.get(&TaskLabel::Claim).unwrap().support, 0);
    }

    #[test]
    fn split_overlap_rejected() {
        let (train, val, mut test) = splits(1);
        test.push(train[0].clone());
        let cfg = TaskConfig::new(ModelKind::NaiveBayes);
        assert!(matches!(
            run_binary(&train, &val, &test, &cfg),
            Err(Error::SplitOverlap(_))
        ));
    }

    #[test]
    fn multiclass_missing_class_is_an_error() {
        let (mut train, val, test) = splits(2);
        train.retain(|e| e.label != TaskLabel::ImplicitClaim);
        let cfg = TaskConfig::new(ModelKind::LogisticRegression);
        assert!(matches!(
            run_multiclass(&train, &val, &test, &cfg),
            Err(Error::MissingClass { class }) if class == "implicit"
        ));
    }

    #[test]
    fn reruns_are_identical() {
        let (train, val, test) = splits(3);
        for model in [ModelKind::NaiveBayes, ModelKind::LogisticRegression] {
            let cfg = TaskConfig::new(model);
            for task in TaskKind::ALL {
                let a = run_task(task, &train, &val, &test, &cfg).unwrap();
                let b = run_task(task, &train, &val, &test, &cfg).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn pipeline_stage1_matches_binary_run() {
        let (train, val, test) = splits(4);
        let cfg = TaskConfig::new(ModelKind::LogisticRegression);
        let bin = run_binary(&train, &val, &test, &cfg).unwrap();
        let pipe = run_pipeline(&train, &val, &test, &cfg).unwrap();
        let collapsed = collapse_to_binary(&pipe).unwrap();
        assert_eq!(collapsed.predicted, bin.predicted);
        assert_eq!(collapsed.gold, bin.gold);
        assert_eq!(pipe.meta.selected_lambda, bin.meta.selected_lambda);
        assert!(pipe.meta.stage2_lambda.is_some());
    }

    #[test]
    fn collapse_rules() {
        let (train, val, test) = splits(5);
        let cfg = TaskConfig::new(ModelKind::NaiveBayes);
        let bin = run_binary(&train, &val, &test, &cfg).unwrap();
        assert!(collapse_to_binary(&bin).is_err());

        let meta = bin.meta.clone();
        let p = PredictionSet::new(
            TaskKind::Multiclass,
            LabelSpace::ThreeWay,
            vec!["x".into()],
            vec![TaskLabel::ImplicitClaim],
            vec![TaskLabel::ExplicitClaim],
            meta,
        )
        .unwrap();
        let c = collapse_to_binary(&p).unwrap();
        assert_eq!(
            (c.gold[0], c.predicted[0]),
            (TaskLabel::Claim, TaskLabel::Claim)
        );
        assert_eq!(c.metrics().get(&TaskLabel::Claim).unwrap().f1, 1.0);
    }

    #[test]
    fn prediction_set_validates_label_space() {
        let meta = RunMeta {
            config: TaskConfig::new(ModelKind::NaiveBayes),
            selected_lambda: None,
            stage2_lambda: None,
        };
        let bad = PredictionSet::new(
            TaskKind::Binary,
            LabelSpace::Binary,
            vec!["x".into()],
            vec![TaskLabel::ExplicitClaim],
            vec![TaskLabel::Claim],
            meta,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn tsv_layout() {
        let (train, val, test) = splits(6);
        let cfg = TaskConfig::new(ModelKind::NaiveBayes);
        let p = run_multiclass(&train, &val, &test[..2], &cfg).unwrap();
        let mut buf = Vec::new();
        p.write_tsv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "doc_id\tgold\tpredicted\ttask\tmodel");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].ends_with("\tmulticlass\tNB"));
    }

    #[test]
    fn oversampling_leaves_test_distribution_alone() {
        let (train, val, test) = splits(7);
        let cfg = TaskConfig::new(ModelKind::NaiveBayes);
        let p = run_multiclass(&train, &val, &test, &cfg).unwrap();
        let gold: Vec<TaskLabel> = test.iter().map(|e| e.label).collect();
        assert_eq!(p.gold, gold);
    }
}
