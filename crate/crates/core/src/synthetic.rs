//! Seeded synthetic corpora for tests, benchmarks and smoke runs.
//!
//! Labels follow the class proportions of the annotated tweet corpus
//! (about 55/31/14 non-claim/explicit/implicit). Features and word vectors
//! are drawn around per-class centroids, so classifiers do better than
//! chance without the task being trivial.

use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{CharSpan, QueryCategory, Topic, TweetRecord};
use crate::embeddings::EmbeddingTable;
use crate::tasks::Example;
use crate::{Error, Label, Result, TaskLabel};

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub n_docs: usize,
    pub dim: usize,
    /// Distance scale between class centroids.
    pub separation: f64,
    /// Per-feature noise standard deviation.
    pub noise: f64,
    /// Probabilities of non-claim, explicit and implicit.
    pub class_weights: [f64; 3],
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            n_docs: 200,
            dim: 8,
            separation: 1.0,
            noise: 1.0,
            class_weights: [0.5525, 0.3083, 0.1392],
        }
    }
}

fn gaussian(rng: &mut impl Rng) -> f64 {
    // Box-Muller
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn draw_label(rng: &mut impl Rng, w: &[f64; 3]) -> Label {
    let total: f64 = w.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (i, &p) in w.iter().enumerate() {
        if u < p {
            return Label::ALL[i];
        }
        u -= p;
    }
    Label::ImplicitClaim
}

fn centroids(rng: &mut impl Rng, dim: usize, separation: f64) -> Vec<Vec<f64>> {
    (0..3)
        .map(|_| (0..dim).map(|_| separation * gaussian(rng)).collect())
        .collect()
}

/// Labeled feature vectors with ids `syn-0`, `syn-1`, ...
pub fn synthetic_examples(spec: &SyntheticSpec, seed: u64) -> Vec<Example> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centers = centroids(&mut rng, spec.dim, spec.separation);
    (0..spec.n_docs)
        .map(|i| {
            let label = draw_label(&mut rng, &spec.class_weights);
            let c = &centers[label as usize];
            Example {
                id: format!("syn-{i}"),
                features: c
                    .iter()
                    .map(|m| m + spec.noise * gaussian(&mut rng))
                    .collect(),
                label: TaskLabel::from(label),
            }
        })
        .collect()
}

const CUE_WORDS: usize = 12;
const FILLER_WORDS: usize = 40;

fn cue_word(class: usize, k: usize) -> String {
    ["plain", "states", "hints"][class].to_string() + &k.to_string()
}

fn filler_word(k: usize) -> String {
    format!("word{k}")
}

/// A tweet corpus plus a matching embedding table.
///
/// Each tweet mixes class cue words with filler words; cue vectors sit
/// near their class centroid, filler vectors near the origin. Some words
/// are capitalized or wrapped in hashtags and mentions to exercise
/// preprocessing.
pub fn synthetic_tweet_corpus(
    spec: &SyntheticSpec,
    seed: u64,
) -> (Vec<TweetRecord>, EmbeddingTable) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centers = centroids(&mut rng, spec.dim, spec.separation);

    let mut pairs: Vec<(String, Vec<f32>)> = Vec::new();
    for (class, center) in centers.iter().enumerate() {
        for k in 0..CUE_WORDS {
            let v = center
                .iter()
                .map(|m| (m + 0.5 * spec.noise * gaussian(&mut rng)) as f32)
                .collect();
            pairs.push((cue_word(class, k), v));
        }
    }
    for k in 0..FILLER_WORDS {
        let v = (0..spec.dim)
            .map(|_| (spec.noise * gaussian(&mut rng)) as f32)
            .collect();
        pairs.push((filler_word(k), v));
    }
    let table = EmbeddingTable::from_pairs(spec.dim, pairs).expect("dims are consistent");

    let records = (0..spec.n_docs)
        .map(|i| {
            let label = draw_label(&mut rng, &spec.class_weights);
            let class = label as usize;
            let len = rng.random_range(4..30);
            let mut words: Vec<String> = (0..len)
                .map(|_| {
                    // a third of the words carry a class cue; some cues are
                    // borrowed from another class to blur the boundary
                    if rng.random_bool(0.33) {
                        let c = if rng.random_bool(0.7) {
                            class
                        } else {
                            rng.random_range(0..3)
                        };
                        let w = cue_word(c, rng.random_range(0..CUE_WORDS));
                        match rng.random_range(0..6) {
                            0 => format!("#{w}"),
                            1 => w.to_uppercase(),
                            _ => w,
                        }
                    } else {
                        filler_word(rng.random_range(0..FILLER_WORDS))
                    }
                })
                .collect();
            if rng.random_bool(0.2) {
                words.insert(0, format!("@user{}", rng.random_range(0..100)));
            }
            let mut text = words.join(" ");
            if rng.random_bool(0.5) {
                text.push('!');
            }
            let claim_span = (label == Label::ExplicitClaim).then(|| {
                let n = text.chars().count();
                let start = rng.random_range(0..n / 2);
                CharSpan::new(start, rng.random_range(start + 1..=n))
            });
            TweetRecord {
                id: format!("tw-{i}"),
                text,
                topic: Topic::ALL[rng.random_range(0..4)],
                query_category: QueryCategory::ALL[rng.random_range(0..4)],
                label,
                claim_span,
                inferred_claim: (label == Label::ImplicitClaim)
                    .then(|| "an implied claim".to_string()),
            }
        })
        .collect();
    (records, table)
}

/// Writes `train.dat`, `dev.dat` and `test.dat` in paragraph-level CONLL,
/// with `sizes` paragraphs per split, creating `dir` if needed. Words come
/// from the vocabulary of [`synthetic_tweet_corpus`].
pub fn write_synthetic_essays(dir: &Path, sizes: [usize; 3], seed: u64) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(17));
    for (name, &n) in ["train.dat", "dev.dat", "test.dat"].iter().zip(&sizes) {
        let mut out = String::new();
        for _ in 0..n {
            let is_claim = rng.random_bool(0.7);
            let len = rng.random_range(10..40);
            let claim_at = is_claim.then(|| rng.random_range(0..len));
            for t in 0..len {
                let (word, tag) = match claim_at {
                    Some(at) if t >= at && t < at + 4 => {
                        let kind = if rng.random_bool(0.3) {
                            "MajorClaim"
                        } else {
                            "Claim:For"
                        };
                        let bio = if t == at { "B" } else { "I" };
                        (
                            cue_word(1, rng.random_range(0..CUE_WORDS)),
                            format!("{bio}-{kind}"),
                        )
                    }
                    _ if rng.random_bool(0.3) => (
                        cue_word(0, rng.random_range(0..CUE_WORDS)),
                        "B-Premise".to_string(),
                    ),
                    _ => (
                        filler_word(rng.random_range(0..FILLER_WORDS)),
                        "O".to_string(),
                    ),
                };
                out.push_str(&format!("{}\t{word}\t{tag}\n", t + 1));
            }
            out.push('\n');
        }
        let path = dir.join(name);
        fs::write(&path, out).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}
