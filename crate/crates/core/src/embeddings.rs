//! Pretrained word vectors in the `.vec` text format and document averaging.
//!
//! The format is a header line `count dim` followed by one row per word:
//! the word, then `dim` space-separated floats.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct EmbeddingTable {
    dim: usize,
    vectors: HashMap<String, Vec<f32>>,
}

impl EmbeddingTable {
    /// Builds a table from in-memory pairs; the first occurrence of a word wins.
    pub fn from_pairs<I, S>(dim: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<f32>)>,
        S: Into<String>,
    {
        if dim == 0 {
            return Err(Error::invalid("embedding dimension must be positive"));
        }
        let mut vectors = HashMap::new();
        for (word, v) in pairs {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            vectors.entry(word.into()).or_insert(v);
        }
        Ok(Self { dim, vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Exact lookup, then lowercase fallback.
    pub fn lookup(&self, token: &str) -> Option<&[f32]> {
        if let Some(v) = self.vectors.get(token) {
            return Some(v);
        }
        let lower = token.to_lowercase();
        if lower != token {
            self.vectors.get(&lower).map(Vec::as_slice)
        } else {
            None
        }
    }

    /// Averages the vectors of known tokens. Unknown tokens are skipped.
    pub fn embed_document<S: AsRef<str>>(&self, tokens: &[S]) -> DocVector {
        let mut sum = vec![0.0f64; self.dim];
        let mut n_known = 0;
        for token in tokens {
            if let Some(v) = self.lookup(token.as_ref()) {
                for (acc, &x) in sum.iter_mut().zip(v) {
                    *acc += f64::from(x);
                }
                n_known += 1;
            }
        }
        if n_known > 0 {
            let n = n_known as f64;
            sum.iter_mut().for_each(|x| *x /= n);
        }
        DocVector {
            values: sum,
            n_known,
        }
    }
}

/// Averaged embedding of a document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocVector {
    pub values: Vec<f64>,
    /// Number of tokens that contributed to the mean.
    pub n_known: usize,
}

impl AsRef<[f64]> for DocVector {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

/// Writes the table in `.vec` format, words sorted so output is reproducible.
pub fn write_vec<W: Write>(mut out: W, table: &EmbeddingTable) -> std::io::Result<()> {
    writeln!(out, "{} {}", table.vectors.len(), table.dim)?;
    let mut words: Vec<&String> = table.vectors.keys().collect();
    words.sort();
    for w in words {
        write!(out, "{w}")?;
        for v in &table.vectors[w] {
            write!(out, " {v}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn embed_document<S: AsRef<str>>(tokens: &[S], table: &EmbeddingTable) -> DocVector {
    table.embed_document(tokens)
}

/// Loads a `.vec` file, keeping at most `limit` rows in file order.
///
/// Duplicate words keep their first vector and are reported through `log`.
pub fn load_vec(path: impl AsRef<Path>, limit: Option<usize>) -> Result<EmbeddingTable> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut lines = BufReader::new(file).lines();

    let format_err = |line: usize, message: String| Error::Format {
        path: path.to_path_buf(),
        line,
        message,
    };

    let header = match lines.next() {
        Some(line) => line.map_err(|e| Error::io(path, e))?,
        None => return Err(format_err(1, "missing `count dim` header".into())),
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (count, dim) = match fields.as_slice() {
        [c, d] => match (c.parse::<usize>(), d.parse::<usize>()) {
            (Ok(c), Ok(d)) if d > 0 => (c, d),
            _ => return Err(format_err(1, format!("bad header `{header}`"))),
        },
        _ => return Err(format_err(1, format!("bad header `{header}`"))),
    };

    let cap = limit.unwrap_or(count).min(count);
    let mut vectors: HashMap<String, Vec<f32>> = HashMap::with_capacity(cap);
    let mut rows = 0;
    for (idx, line) in lines.enumerate() {
        if limit.is_some_and(|l| rows >= l) {
            break;
        }
        let line_no = idx + 2;
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.trim_end_matches(['\r', ' ']);
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split(' ');
        let word = parts.next().unwrap_or_default();
        let mut values = Vec::with_capacity(dim);
        for p in parts {
            let v: f32 = p
                .parse()
                .map_err(|_| format_err(line_no, format!("bad float `{p}`")))?;
            values.push(v);
        }
        if values.len() != dim {
            return Err(format_err(
                line_no,
                format!("expected {dim} values for `{word}`, found {}", values.len()),
            ));
        }
        rows += 1;
        if vectors.contains_key(word) {
            log::warn!(
                "{}:{line_no}: duplicate word `{word}`, keeping first",
                path.display()
            );
            continue;
        }
        vectors.insert(word.to_string(), values);
    }
    Ok(EmbeddingTable { dim, vectors })
}
