//! Claim detection toolkit for biomedical tweets.
//!
//! The crate covers the whole experimental loop:
//!
//! * [`corpus`]: ingestion of the annotated tweet corpus (JSONL), raw-dump
//!   filtering and stratified sampling, the paragraph-level essay corpus
//!   (CONLL), and descriptive statistics.
//! * [`preprocess`]: mention normalization and a deterministic tweet tokenizer.
//! * [`embeddings`]: `.vec` word-vector loading and averaged document vectors.
//! * [`models`]: Gaussian naive Bayes and L2-regularized softmax regression
//!   trained from scratch, plus minority-class oversampling.
//! * [`tasks`]: the binary, three-way and two-stage pipeline formulations.
//! * [`eval`]: confusion matrices, per-class P/R/F1, Cohen's kappa and
//!   tabular reports.
//! * [`harness`]: config-driven in-domain grid and cross-domain runs.
//!
//! ```
//! use bioclaim_core::eval::cohen_kappa;
//!
//! let a = ["c", "c", "c", "n", "n", "n"];
//! let b = ["c", "c", "n", "n", "n", "c"];
//! let agreement = cohen_kappa(&a, &b).unwrap();
//! assert!((agreement.kappa - 1.0 / 3.0).abs() < 1e-12);
//! ```

pub mod corpus;
pub mod embeddings;
mod error;
pub mod eval;
pub mod harness;
pub mod labels;
pub mod models;
pub mod preprocess;
pub mod synthetic;
pub mod tasks;

pub use error::{Error, Result};
pub use labels::{BinaryLabel, Label, TaskLabel};
