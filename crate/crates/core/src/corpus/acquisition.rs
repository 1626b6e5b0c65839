//! Raw-dump filtering and per-cell sampling used to build the annotation set.

use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{QueryCategory, Topic};
use crate::{Error, Result};

/// A crawled tweet before annotation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawTweet {
    pub id: String,
    pub text: String,
    pub is_retweet: bool,
    pub topic: Topic,
    pub query_category: QueryCategory,
}

pub fn load_raw_dump(path: impl AsRef<Path>) -> Result<Vec<RawTweet>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let tweet: RawTweet = serde_json::from_str(&line).map_err(|e| Error::Format {
            path: path.to_path_buf(),
            line: idx + 1,
            message: e.to_string(),
        })?;
        out.push(tweet);
    }
    Ok(out)
}

pub fn write_raw_dump<W: Write>(mut out: W, tweets: &[RawTweet]) -> Result<()> {
    for t in tweets {
        serde_json::to_writer(&mut out, t)?;
        out.write_all(b"\n").map_err(|e| Error::io("<output>", e))?;
    }
    Ok(())
}

/// True if the text holds `http://`, `https://` or a `www.`-prefixed token.
/// Matching ignores ASCII case.
pub fn contains_url(text: &str) -> bool {
    let lower = text.to_ascii_lowercase();
    lower.contains("http://")
        || lower.contains("https://")
        || lower.split_whitespace().any(|t| t.starts_with("www."))
}

/// Drops retweets, tweets with URLs, and repeated ids (first one wins).
/// Order is preserved.
pub fn filter_acquisition(records: Vec<RawTweet>) -> Vec<RawTweet> {
    let mut seen = HashSet::new();
    records
        .into_iter()
        .filter(|r| !r.is_retweet && !contains_url(&r.text))
        .filter(|r| seen.insert(r.id.clone()))
        .collect()
}

/// Draws exactly `per_cell` tweets from every nonempty (topic, query
/// category) cell, uniformly without replacement.
///
/// Cells are visited in `(topic, category)` order with one seeded generator;
/// within a cell the sampled tweets keep their input order.
pub fn stratified_sample(
    records: &[RawTweet],
    per_cell: usize,
    seed: u64,
) -> Result<Vec<RawTweet>> {
    let mut cells: BTreeMap<(Topic, QueryCategory), Vec<usize>> = BTreeMap::new();
    for (i, r) in records.iter().enumerate() {
        cells
            .entry((r.topic, r.query_category))
            .or_default()
            .push(i);
    }
    if let Some(((topic, cat), members)) = cells.iter().find(|(_, m)| m.len() < per_cell) {
        return Err(Error::UndersizedCell {
            cell: format!("{topic}/{cat}"),
            available: members.len(),
            requested: per_cell,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(per_cell * cells.len());
    for members in cells.values() {
        let mut picked = rand::seq::index::sample(&mut rng, members.len(), per_cell).into_vec();
        picked.sort_unstable();
        out.extend(picked.into_iter().map(|k| records[members[k]].clone()));
    }
    Ok(out)
}
