use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Indices of a class-balanced resample of `y`.
///
/// All original indices come first, in order. Every class below the majority
/// count is then topped up with draws (uniform, with replacement) from its
/// own members, classes visited in ascending id order.
pub fn oversample_indices(y: &[usize], seed: u64) -> Result<Vec<usize>> {
    if y.is_empty() {
        return Err(Error::EmptyInput("nothing to oversample"));
    }
    let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &c) in y.iter().enumerate() {
        members.entry(c).or_default().push(i);
    }
    let majority = members.values().map(Vec::len).max().unwrap_or(0);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<usize> = (0..y.len()).collect();
    for idx in members.values() {
        for _ in idx.len()..majority {
            out.push(idx[rng.random_range(0..idx.len())]);
        }
    }
    Ok(out)
}

/// Balances `(x, y)` by duplicating minority-class rows.
pub fn oversample<T: Clone>(x: &[T], y: &[usize], seed: u64) -> Result<(Vec<T>, Vec<usize>)> {
    if x.len() != y.len() {
        return Err(Error::invalid(format!(
            "{} feature rows but {} labels",
            x.len(),
            y.len()
        )));
    }
    let idx = oversample_indices(y, seed)?;
    Ok((
        idx.iter().map(|&i| x[i].clone()).collect(),
        idx.iter().map(|&i| y[i]).collect(),
    ))
}
