//! Cohen's kappa for two annotators, at document and token level.

use std::collections::HashMap;
use std::hash::Hash;
use std::ops::Range;

use serde::Serialize;

use crate::corpus::{CharSpan, TweetRecord};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AgreementResult {
    pub kappa: f64,
    /// Fraction of items both annotators labeled identically.
    pub observed: f64,
    /// Agreement expected from the annotators' marginals alone.
    pub expected: f64,
    pub n_items: usize,
}

/// `(p_o - p_e) / (1 - p_e)`; defined as 1 when `1 - p_e` vanishes.
pub fn cohen_kappa<L: Eq + Hash + Clone>(a: &[L], b: &[L]) -> Result<AgreementResult> {
    if a.len() != b.len() {
        return Err(Error::invalid(format!(
            "annotators labeled {} and {} items",
            a.len(),
            b.len()
        )));
    }
    if a.is_empty() {
        return Err(Error::EmptyInput("kappa needs at least one item"));
    }

    let mut index: HashMap<L, usize> = HashMap::new();
    let mut marg_a: Vec<usize> = Vec::new();
    let mut marg_b: Vec<usize> = Vec::new();
    let mut slot = |l: &L, marg_a: &mut Vec<usize>, marg_b: &mut Vec<usize>| {
        let next = index.len();
        let i = *index.entry(l.clone()).or_insert(next);
        if i == marg_a.len() {
            marg_a.push(0);
            marg_b.push(0);
        }
        i
    };

    let mut agree = 0usize;
    for (x, y) in a.iter().zip(b) {
        let i = slot(x, &mut marg_a, &mut marg_b);
        let j = slot(y, &mut marg_a, &mut marg_b);
        marg_a[i] += 1;
        marg_b[j] += 1;
        if x == y {
            agree += 1;
        }
    }

    let n = a.len() as f64;
    let observed = agree as f64 / n;
    let expected: f64 = marg_a
        .iter()
        .zip(&marg_b)
        .map(|(&ca, &cb)| (ca as f64 / n) * (cb as f64 / n))
        .sum();
    let kappa = if 1.0 - expected < 1e-12 {
        1.0
    } else {
        (observed - expected) / (1.0 - expected)
    };
    Ok(AgreementResult {
        kappa,
        observed,
        expected,
        n_items: a.len(),
    })
}

/// Token character ranges of one document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanDoc {
    pub n_chars: usize,
    pub tokens: Vec<Range<usize>>,
}

impl SpanDoc {
    pub fn from_text(text: &str) -> Self {
        Self {
            n_chars: text.chars().count(),
            tokens: crate::preprocess::tokenize_spanned(text)
                .into_iter()
                .map(|t| t.chars)
                .collect(),
        }
    }

    /// In-span flag per token: a token is inside if its range overlaps the span.
    pub fn token_flags(&self, span: Option<CharSpan>) -> Result<Vec<bool>> {
        let Some(span) = span else {
            return Ok(vec![false; self.tokens.len()]);
        };
        if span.start >= span.end || span.end > self.n_chars {
            return Err(Error::invalid(format!(
                "span [{}, {}) outside document of {} characters",
                span.start, span.end, self.n_chars
            )));
        }
        Ok(self
            .tokens
            .iter()
            .map(|t| t.start < span.end && span.start < t.end)
            .collect())
    }
}

/// Binary in-claim/out-of-claim kappa pooled over every token of every doc.
pub fn token_span_kappa(
    docs: &[SpanDoc],
    spans_a: &[Option<CharSpan>],
    spans_b: &[Option<CharSpan>],
) -> Result<AgreementResult> {
    if docs.len() != spans_a.len() || docs.len() != spans_b.len() {
        return Err(Error::invalid(format!(
            "{} documents but {} and {} span annotations",
            docs.len(),
            spans_a.len(),
            spans_b.len()
        )));
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (doc, (sa, sb)) in docs.iter().zip(spans_a.iter().zip(spans_b)) {
        a.extend(doc.token_flags(*sa)?);
        b.extend(doc.token_flags(*sb)?);
    }
    cohen_kappa(&a, &b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AgreementLevel {
    /// Claim vs non-claim per document.
    Doc2,
    /// Explicit, implicit or non-claim per document.
    Doc3,
    /// In-claim flag per token.
    Span,
}

impl std::str::FromStr for AgreementLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "doc2" => Ok(AgreementLevel::Doc2),
            "doc3" => Ok(AgreementLevel::Doc3),
            "span" => Ok(AgreementLevel::Span),
            other => Err(Error::invalid(format!("unknown agreement level `{other}`"))),
        }
    }
}

/// Agreement between two annotations of the same tweets, matched by id.
pub fn annotation_agreement(
    a: &[TweetRecord],
    b: &[TweetRecord],
    level: AgreementLevel,
) -> Result<AgreementResult> {
    let by_id: HashMap<&str, &TweetRecord> = b.iter().map(|r| (r.id.as_str(), r)).collect();
    if a.len() != b.len() {
        return Err(Error::invalid(format!(
            "annotations cover {} and {} tweets",
            a.len(),
            b.len()
        )));
    }
    let pairs: Vec<(&TweetRecord, &TweetRecord)> = a
        .iter()
        .map(|ra| {
            let rb = by_id.get(ra.id.as_str()).ok_or_else(|| {
                Error::invalid(format!(
                    "tweet `{}` missing from the second annotation",
                    ra.id
                ))
            })?;
            if ra.text != rb.text {
                return Err(Error::invalid(format!(
                    "tweet `{}` has different texts",
                    ra.id
                )));
            }
            Ok((ra, *rb))
        })
        .collect::<Result<_>>()?;

    match level {
        AgreementLevel::Doc2 => {
            let la: Vec<_> = pairs.iter().map(|(x, _)| x.label.binary()).collect();
            let lb: Vec<_> = pairs.iter().map(|(_, y)| y.label.binary()).collect();
            cohen_kappa(&la, &lb)
        }
        AgreementLevel::Doc3 => {
            let la: Vec<_> = pairs.iter().map(|(x, _)| x.label).collect();
            let lb: Vec<_> = pairs.iter().map(|(_, y)| y.label).collect();
            cohen_kappa(&la, &lb)
        }
        AgreementLevel::Span => {
            let docs: Vec<SpanDoc> = pairs
                .iter()
                .map(|(x, _)| SpanDoc::from_text(&x.text))
                .collect();
            let sa: Vec<_> = pairs.iter().map(|(x, _)| x.claim_span).collect();
            let sb: Vec<_> = pairs.iter().map(|(_, y)| y.claim_span).collect();
            token_span_kappa(&docs, &sa, &sb)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hand_computed_cases() {
        let r = cohen_kappa(&["c", "c", "n", "n"], &["c", "n", "c", "n"]).unwrap();
        assert_eq!((r.observed, r.expected, r.kappa), (0.5, 0.5, 0.0));

        // marginals (3/4, 1/4) and (1/2, 1/2)
        let r = cohen_kappa(&["c", "c", "c", "n"], &["c", "c", "n", "n"]).unwrap();
        assert_relative_eq!(r.observed, 0.75);
        assert_relative_eq!(r.expected, 0.5);
        assert_relative_eq!(r.kappa, 0.5, epsilon = 1e-12);

        let r = cohen_kappa(
            &["c", "c", "c", "n", "n", "n"],
            &["c", "c", "n", "n", "n", "c"],
        )
        .unwrap();
        assert_relative_eq!(r.kappa, 1.0 / 3.0, epsilon = 1e-12);

        let r = cohen_kappa(&["x", "x", "x"], &["x", "x", "x"]).unwrap();
        assert_eq!(r.kappa, 1.0);
    }

    #[test]
    fn errors() {
        assert!(cohen_kappa::<u8>(&[], &[]).is_err());
        assert!(cohen_kappa(&[1], &[1, 2]).is_err());
    }

    #[test]
    fn span_identity_and_opposites() {
        let docs = vec![
            SpanDoc::from_text("Vaccines cause autism, trust me"),
            SpanDoc::from_text("just sad"),
        ];
        let spans = vec![Some(CharSpan::new(0, 21)), None];
        assert_eq!(token_span_kappa(&docs, &spans, &spans).unwrap().kappa, 1.0);

        let all = vec![Some(CharSpan::new(0, 31))];
        let none = vec![None];
        let r = token_span_kappa(&docs[..1], &all, &none).unwrap();
        assert_eq!((r.observed, r.expected, r.kappa), (0.0, 0.0, 0.0));
    }

    #[test]
    fn span_out_of_bounds() {
        let docs = vec![SpanDoc::from_text("abc")];
        assert!(token_span_kappa(&docs, &[Some(CharSpan::new(1, 9))], &[None]).is_err());
    }

    #[test]
    fn partial_overlap_marks_token() {
        let d = SpanDoc::from_text("alpha beta");
        assert_eq!(
            d.token_flags(Some(CharSpan::new(4, 5))).unwrap(),
            vec![true, false]
        );
        assert_eq!(
            d.token_flags(Some(CharSpan::new(5, 6))).unwrap(),
            vec![false, false]
        );
    }

    fn record(id: &str, label: crate::Label, span: Option<CharSpan>) -> TweetRecord {
        TweetRecord {
            id: id.into(),
            text: "masks work well".into(),
            topic: crate::corpus::Topic::Covid19,
            query_category: crate::corpus::QueryCategory::DiseaseName,
            label,
            claim_span: span,
            inferred_claim: None,
        }
    }

    #[test]
    fn annotation_levels() {
        use crate::Label::*;
        let a = vec![
            record("1", ExplicitClaim, Some(CharSpan::new(0, 10))),
            record("2", NonClaim, None),
        ];
        // same documents, other order, one explicit relabeled implicit
        let b = vec![
            record("2", NonClaim, None),
            record("1", ImplicitClaim, None),
        ];
        assert_eq!(
            annotation_agreement(&a, &b, AgreementLevel::Doc2)
                .unwrap()
                .kappa,
            1.0
        );
        assert!(
            annotation_agreement(&a, &b, AgreementLevel::Doc3)
                .unwrap()
                .kappa
                < 1.0
        );
        let span = annotation_agreement(&a, &b, AgreementLevel::Span).unwrap();
        assert_eq!(span.n_items, 6);
        assert!(annotation_agreement(&a, &b[..1], AgreementLevel::Doc2).is_err());
        assert!("doc4".parse::<AgreementLevel>().is_err());
    }
}
