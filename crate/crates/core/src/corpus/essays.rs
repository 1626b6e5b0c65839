//! Paragraph-level CONLL reader for the argument-annotated essay corpus.
//!
//! Each split is one or more files whose name starts with `train`, `dev` or
//! `test`. A file holds one token per line with tab-separated columns; the
//! last column is the BIO tag (`O`, `B-Claim:For`, `I-MajorClaim`,
//! `B-Premise`, ...). Paragraphs are separated by blank lines.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::{BinaryLabel, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EssaySplit {
    Train,
    Dev,
    Test,
}

impl EssaySplit {
    pub const ALL: [EssaySplit; 3] = [EssaySplit::Train, EssaySplit::Dev, EssaySplit::Test];

    fn file_prefix(self) -> &'static str {
        match self {
            EssaySplit::Train => "train",
            EssaySplit::Dev => "dev",
            EssaySplit::Test => "test",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EssayParagraph {
    /// File stem the paragraph came from.
    pub essay_id: String,
    pub paragraph_index: usize,
    pub tokens: Vec<String>,
    pub label: BinaryLabel,
    pub split: EssaySplit,
}

impl EssayParagraph {
    /// Corpus-wide unique id.
    pub fn doc_id(&self) -> String {
        format!("essay:{}:{}", self.essay_id, self.paragraph_index)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EssayCorpus {
    pub train: Vec<EssayParagraph>,
    pub dev: Vec<EssayParagraph>,
    pub test: Vec<EssayParagraph>,
}

impl EssayCorpus {
    pub fn split(&self, split: EssaySplit) -> &[EssayParagraph] {
        match split {
            EssaySplit::Train => &self.train,
            EssaySplit::Dev => &self.dev,
            EssaySplit::Test => &self.test,
        }
    }

    pub fn sizes(&self) -> (usize, usize, usize) {
        (self.train.len(), self.dev.len(), self.test.len())
    }
}

/// Whether a BIO tag marks a claim or major claim token.
pub fn is_claim_tag(tag: &str) -> bool {
    let body = tag
        .strip_prefix("B-")
        .or_else(|| tag.strip_prefix("I-"))
        .unwrap_or(tag);
    let kind = body.split(':').next().unwrap_or_default();
    kind == "Claim" || kind == "MajorClaim"
}

/// Paragraph label from its tags; depends only on the tag multiset.
pub fn label_from_tags<S: AsRef<str>>(tags: &[S]) -> BinaryLabel {
    if tags.iter().any(|t| is_claim_tag(t.as_ref())) {
        BinaryLabel::Claim
    } else {
        BinaryLabel::NonClaim
    }
}

/// Parses one CONLL file into paragraphs.
pub fn parse_conll(path: &Path, contents: &str, split: EssaySplit) -> Result<Vec<EssayParagraph>> {
    let essay_id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();

    let mut paragraphs = Vec::new();
    let mut tokens = Vec::new();
    let mut tags: Vec<String> = Vec::new();
    let mut columns: Option<usize> = None;

    let mut flush = |tokens: &mut Vec<String>, tags: &mut Vec<String>| {
        if tokens.is_empty() {
            return;
        }
        paragraphs.push(EssayParagraph {
            essay_id: essay_id.clone(),
            paragraph_index: paragraphs.len(),
            tokens: std::mem::take(tokens),
            label: label_from_tags(tags),
            split,
        });
        tags.clear();
    };

    for (idx, line) in contents.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            flush(&mut tokens, &mut tags);
            continue;
        }
        let fields: Vec<&str> = if line.contains('\t') {
            line.split('\t').collect()
        } else {
            line.split_whitespace().collect()
        };
        let expected = *columns.get_or_insert(fields.len());
        if fields.len() != expected || expected < 2 {
            return Err(Error::Format {
                path: path.to_path_buf(),
                line: idx + 1,
                message: format!(
                    "expected {expected} columns (at least 2), found {}",
                    fields.len()
                ),
            });
        }
        // index, token, ..., tag  or  token, tag
        let token = if expected >= 3 { fields[1] } else { fields[0] };
        tokens.push(token.to_string());
        tags.push(fields[expected - 1].to_string());
    }
    flush(&mut tokens, &mut tags);
    Ok(paragraphs)
}

fn split_files(dir: &Path, split: EssaySplit) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path();
        let name = entry.file_name().to_string_lossy().to_lowercase();
        if path.is_file() && name.starts_with(split.file_prefix()) {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

/// Loads the train, dev and test paragraphs from `dir`.
pub fn load_essay_conll(dir: impl AsRef<Path>) -> Result<EssayCorpus> {
    let dir = dir.as_ref();
    let mut corpus = EssayCorpus::default();
    for split in EssaySplit::ALL {
        let files = split_files(dir, split)?;
        if files.is_empty() {
            return Err(Error::invalid(format!(
                "no `{}*` file in {}",
                split.file_prefix(),
                dir.display()
            )));
        }
        let target = match split {
            EssaySplit::Train => &mut corpus.train,
            EssaySplit::Dev => &mut corpus.dev,
            EssaySplit::Test => &mut corpus.test,
        };
        for file in files {
            let contents = fs::read_to_string(&file).map_err(|e| Error::io(&file, e))?;
            target.extend(parse_conll(&file, &contents, split)?);
        }
    }
    Ok(corpus)
}
