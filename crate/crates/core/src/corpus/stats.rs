//! Class distribution, length statistics and the length-by-class crosstab.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::{Topic, TweetRecord};
use crate::{Error, Label, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ClassStats {
    pub count: usize,
    /// Fraction of the whole corpus, in `[0, 1]`.
    pub percent: f64,
    /// Mean tokens per tweet; 0 for an empty class.
    pub mean_token_length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusStats {
    pub non_claim: ClassStats,
    pub claim: ClassStats,
    pub explicit: ClassStats,
    pub implicit: ClassStats,
    pub total: ClassStats,
    /// Mean tokens in the marked span of explicit claims, if any exist.
    pub mean_claim_phrase_length: Option<f64>,
    /// Fraction of each topic's tweets that contain a claim.
    pub topic_claim_rates: BTreeMap<Topic, f64>,
}

#[derive(Default)]
struct Acc {
    count: usize,
    tokens: usize,
}

impl Acc {
    fn add(&mut self, n: usize) {
        self.count += 1;
        self.tokens += n;
    }

    fn finish(&self, total: usize) -> ClassStats {
        ClassStats {
            count: self.count,
            percent: self.count as f64 / total as f64,
            mean_token_length: if self.count == 0 {
                0.0
            } else {
                self.tokens as f64 / self.count as f64
            },
        }
    }
}

pub fn corpus_stats<F>(records: &[TweetRecord], tokenizer: F) -> Result<CorpusStats>
where
    F: Fn(&str) -> Vec<String>,
{
    if records.is_empty() {
        return Err(Error::EmptyInput(
            "corpus statistics need at least one record",
        ));
    }
    let (mut non, mut claim, mut expl, mut impl_, mut total) = (
        Acc::default(),
        Acc::default(),
        Acc::default(),
        Acc::default(),
        Acc::default(),
    );
    let mut phrase = Acc::default();
    let mut per_topic: BTreeMap<Topic, (usize, usize)> = BTreeMap::new();

    for r in records {
        let n = tokenizer(&r.text).len();
        total.add(n);
        let topic = per_topic.entry(r.topic).or_default();
        topic.0 += 1;
        match r.label {
            Label::NonClaim => non.add(n),
            Label::ExplicitClaim => {
                claim.add(n);
                expl.add(n);
                topic.1 += 1;
                if let Some(span) = r.claim_text() {
                    phrase.add(tokenizer(span).len());
                }
            }
            Label::ImplicitClaim => {
                claim.add(n);
                impl_.add(n);
                topic.1 += 1;
            }
        }
    }

    let n = records.len();
    Ok(CorpusStats {
        non_claim: non.finish(n),
        claim: claim.finish(n),
        explicit: expl.finish(n),
        implicit: impl_.finish(n),
        total: total.finish(n),
        mean_claim_phrase_length: (phrase.count > 0)
            .then(|| phrase.tokens as f64 / phrase.count as f64),
        topic_claim_rates: per_topic
            .into_iter()
            .map(|(t, (all, claims))| (t, claims as f64 / all as f64))
            .collect(),
    })
}

impl CorpusStats {
    /// Tab-separated class table: class, count, percent (0-100), mean length.
    pub fn to_tsv(&self) -> String {
        fn row(out: &mut String, name: &str, s: &ClassStats) {
            let _ = writeln!(
                out,
                "{name}\t{}\t{:.2}\t{:.2}",
                s.count,
                s.percent * 100.0,
                s.mean_token_length
            );
        }

        let mut out = String::from("class\tcount\tpercent\tmean_length\n");
        row(&mut out, "non-claim", &self.non_claim);
        row(&mut out, "claim (I+E)", &self.claim);
        row(&mut out, "expl. claim", &self.explicit);
        let phrase = self
            .mean_claim_phrase_length
            .map_or_else(String::new, |m| format!("{m:.2}"));
        let _ = writeln!(out, "claim phrase\t\t\t{phrase}");
        row(&mut out, "impl. claim", &self.implicit);
        row(&mut out, "total", &self.total);
        for (topic, rate) in &self.topic_claim_rates {
            let _ = writeln!(out, "claim rate {topic}\t\t{:.2}\t", rate * 100.0);
        }
        out
    }
}

/// Counts of short (`<= threshold` tokens) and long tweets per binary class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct LengthCrosstab {
    pub short_non_claim: usize,
    pub short_claim: usize,
    pub long_non_claim: usize,
    pub long_claim: usize,
}

impl LengthCrosstab {
    pub fn total(&self) -> usize {
        self.short_non_claim + self.short_claim + self.long_non_claim + self.long_claim
    }
}

pub fn length_class_crosstab<F>(
    records: &[TweetRecord],
    threshold: usize,
    tokenizer: F,
) -> LengthCrosstab
where
    F: Fn(&str) -> Vec<String>,
{
    let mut t = LengthCrosstab::default();
    for r in records {
        let short = tokenizer(&r.text).len() <= threshold;
        let cell = match (short, r.label == Label::NonClaim) {
            (true, true) => &mut t.short_non_claim,
            (true, false) => &mut t.short_claim,
            (false, true) => &mut t.long_non_claim,
            (false, false) => &mut t.long_claim,
        };
        *cell += 1;
    }
    t
}
