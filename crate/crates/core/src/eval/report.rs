//! Wide per-class result table, one column group per model.
//!
//! Rows are `(mode, task, class)`. In binary mode every task is scored on
//! claim vs non-claim (three-way predictions are collapsed first); in
//! multiclass mode only the three-way tasks appear. Values are rounded to
//! two decimals here; the JSON report keeps full precision.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::ClassMetrics;
use crate::models::ModelKind;
use crate::tasks::TaskKind;
use crate::TaskLabel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalMode {
    Binary,
    Multiclass,
}

impl EvalMode {
    pub const ALL: [EvalMode; 2] = [EvalMode::Binary, EvalMode::Multiclass];

    pub fn as_str(self) -> &'static str {
        match self {
            EvalMode::Binary => "binary",
            EvalMode::Multiclass => "multiclass",
        }
    }

    /// Row order of the classes in this mode.
    pub fn row_classes(self) -> &'static [TaskLabel] {
        match self {
            EvalMode::Binary => &[TaskLabel::Claim, TaskLabel::NonClaim],
            EvalMode::Multiclass => &[
                TaskLabel::ExplicitClaim,
                TaskLabel::ImplicitClaim,
                TaskLabel::NonClaim,
            ],
        }
    }
}

impl fmt::Display for EvalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Scores of one (task, model) run under one evaluation mode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellMetrics {
    pub eval_mode: EvalMode,
    pub task: TaskKind,
    pub model: ModelKind,
    pub metrics: ClassMetrics<TaskLabel>,
}

const MODELS: [ModelKind; 2] = [ModelKind::NaiveBayes, ModelKind::LogisticRegression];

/// Tab-separated table; missing cells are `-`, no input gives the header only.
pub fn report_table(cells: &[CellMetrics]) -> String {
    let models: Vec<ModelKind> = MODELS
        .into_iter()
        .filter(|m| cells.iter().any(|c| c.model == *m))
        .collect();
    let mut out = String::from("mode\ttask\tclass");
    for m in &models {
        out.push_str(&format!("\t{m}_P\t{m}_R\t{m}_F1"));
    }
    out.push('\n');

    for mode in EvalMode::ALL {
        for task in TaskKind::ALL {
            let row_cells: Vec<Option<&CellMetrics>> = models
                .iter()
                .map(|m| {
                    cells
                        .iter()
                        .find(|c| c.eval_mode == mode && c.task == task && c.model == *m)
                })
                .collect();
            if row_cells.iter().all(Option::is_none) {
                continue;
            }
            for class in mode.row_classes() {
                out.push_str(&format!("{mode}\t{task}\t{}", class.short_name()));
                for cell in &row_cells {
                    match cell.and_then(|c| c.metrics.get(class)) {
                        Some(s) => out.push_str(&format!(
                            "\t{:.2}\t{:.2}\t{:.2}",
                            s.precision, s.recall, s.f1
                        )),
                        None => out.push_str("\t-\t-\t-"),
                    }
                }
                out.push('\n');
            }
        }
    }
    out
}
