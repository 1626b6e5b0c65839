use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::{Error, Label, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topic {
    Covid19,
    Measles,
    CysticFibrosis,
    Depression,
}

impl Topic {
    pub const ALL: [Topic; 4] = [
        Topic::Covid19,
        Topic::Measles,
        Topic::CysticFibrosis,
        Topic::Depression,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Topic::Covid19 => "covid19",
            Topic::Measles => "measles",
            Topic::CysticFibrosis => "cystic_fibrosis",
            Topic::Depression => "depression",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QueryCategory {
    DiseaseName,
    TopicalHashtag,
    Combination,
    Drug,
}

impl QueryCategory {
    pub const ALL: [QueryCategory; 4] = [
        QueryCategory::DiseaseName,
        QueryCategory::TopicalHashtag,
        QueryCategory::Combination,
        QueryCategory::Drug,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            QueryCategory::DiseaseName => "disease_name",
            QueryCategory::TopicalHashtag => "topical_hashtag",
            QueryCategory::Combination => "combination",
            QueryCategory::Drug => "drug",
        }
    }
}

macro_rules! str_enum_impls {
    ($ty:ty, $what:literal) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                <$ty>::ALL
                    .into_iter()
                    .find(|v| v.as_str() == s)
                    .ok_or_else(|| Error::invalid(format!(concat!("unknown ", $what, " `{}`"), s)))
            }
        }
    };
}

str_enum_impls!(Topic, "topic");
str_enum_impls!(QueryCategory, "query category");

/// Half-open character range `[start, end)` into a tweet's text.
///
/// Offsets count Unicode scalar values, not bytes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct CharSpan {
    pub start: usize,
    pub end: usize,
}

impl CharSpan {
    pub fn new(start: usize, end: usize) -> Self {
        Self { start, end }
    }

    pub fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Slices `text` by character offsets.
    pub fn slice<'a>(&self, text: &'a str) -> &'a str {
        let byte_at = |ci: usize| text.char_indices().nth(ci).map_or(text.len(), |(b, _)| b);
        &text[byte_at(self.start)..byte_at(self.end)]
    }
}

impl From<[usize; 2]> for CharSpan {
    fn from([start, end]: [usize; 2]) -> Self {
        Self { start, end }
    }
}

impl From<CharSpan> for [usize; 2] {
    fn from(s: CharSpan) -> Self {
        [s.start, s.end]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TweetRecord {
    pub id: String,
    pub text: String,
    pub topic: Topic,
    pub query_category: QueryCategory,
    pub label: Label,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claim_span: Option<CharSpan>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inferred_claim: Option<String>,
}

impl TweetRecord {
    /// Checks the per-record invariants, returning the offending field name.
    pub fn validate(&self) -> std::result::Result<(), (&'static str, String)> {
        if self.id.is_empty() {
            return Err(("id", "must be nonempty".into()));
        }
        match (self.label, self.claim_span) {
            (Label::ExplicitClaim, None) => {
                return Err(("claim_span", "required for explicit claims".into()))
            }
            (Label::ExplicitClaim, Some(span)) => {
                let n = self.text.chars().count();
                if span.start >= span.end || span.end > n {
                    return Err((
                        "claim_span",
                        format!(
                            "[{}, {}) is not a nonempty range within {n} characters",
                            span.start, span.end
                        ),
                    ));
                }
            }
            (_, Some(_)) => return Err(("claim_span", "only allowed for explicit claims".into())),
            _ => {}
        }
        if self.inferred_claim.is_some() && self.label != Label::ImplicitClaim {
            return Err(("inferred_claim", "only allowed for implicit claims".into()));
        }
        Ok(())
    }

    pub fn claim_text(&self) -> Option<&str> {
        self.claim_span.map(|s| s.slice(&self.text))
    }
}

fn field<'a>(
    obj: &'a Map<String, Value>,
    name: &'static str,
) -> std::result::Result<&'a Value, (&'static str, String)> {
    obj.get(name).ok_or((name, "missing".to_string()))
}

fn string_field(
    obj: &Map<String, Value>,
    name: &'static str,
) -> std::result::Result<String, (&'static str, String)> {
    match field(obj, name)? {
        Value::String(s) => Ok(s.clone()),
        other => Err((name, format!("expected string, found {other}"))),
    }
}

fn parsed_field<T: FromStr<Err = Error>>(
    obj: &Map<String, Value>,
    name: &'static str,
) -> std::result::Result<T, (&'static str, String)> {
    string_field(obj, name)?
        .parse()
        .map_err(|e: Error| (name, e.to_string()))
}

pub(crate) fn parse_tweet(line: &str) -> std::result::Result<TweetRecord, (&'static str, String)> {
    let value: Value = serde_json::from_str(line).map_err(|e| ("<json>", e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or(("<json>", "expected a JSON object".to_string()))?;

    let claim_span = match obj.get("claim_span") {
        None | Some(Value::Null) => None,
        Some(v) => {
            let pair: [usize; 2] = serde_json::from_value(v.clone())
                .map_err(|_| ("claim_span", format!("expected [start, end], found {v}")))?;
            Some(CharSpan::from(pair))
        }
    };
    let inferred_claim = match obj.get("inferred_claim") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(other) => return Err(("inferred_claim", format!("expected string, found {other}"))),
    };

    let record = TweetRecord {
        id: string_field(obj, "id")?,
        text: string_field(obj, "text")?,
        topic: parsed_field(obj, "topic")?,
        query_category: parsed_field(obj, "query_category")?,
        label: parsed_field(obj, "label")?,
        claim_span,
        inferred_claim,
    };
    record.validate()?;
    Ok(record)
}

/// Reads the annotated corpus, one JSON object per line.
///
/// Blank lines are skipped. Ids must be unique across the file.
pub fn load_tweet_corpus(path: impl AsRef<Path>) -> Result<Vec<TweetRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record_err = |field: &str, message: String| Error::Record {
            path: path.to_path_buf(),
            line: idx + 1,
            field: field.to_string(),
            message,
        };
        let record = parse_tweet(&line).map_err(|(f, m)| record_err(f, m))?;
        if !seen.insert(record.id.clone()) {
            return Err(record_err("id", format!("duplicate id `{}`", record.id)));
        }
        records.push(record);
    }
    Ok(records)
}

pub fn write_tweet_corpus<W: Write>(mut out: W, records: &[TweetRecord]) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n").map_err(|e| Error::io("<output>", e))?;
    }
    Ok(())
}
