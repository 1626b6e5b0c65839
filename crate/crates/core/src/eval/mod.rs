//! Confusion matrices, per-class scores, agreement and reports.

mod agreement;
mod metrics;
mod report;

pub use agreement::{
    annotation_agreement, cohen_kappa, token_span_kappa, AgreementLevel, AgreementResult, SpanDoc,
};
pub use metrics::{confusion, f1_score, prf_per_class, ClassMetrics, ClassScore, ConfusionMatrix};
pub use report::{report_table, CellMetrics, EvalMode};
