//! Tweet normalization and tokenization.
//!
//! Tokenization is whitespace splitting followed by peeling punctuation off
//! both ends of every chunk, one character per token. `#` and `@` stay
//! attached when a word character follows them, and punctuation between word
//! characters (`1/1000`, `don't`, `COVID-19`) is left inside the token. Case
//! is preserved.

use std::ops::Range;

/// The literal every `@`-mention is rewritten to.
pub const MENTION_PLACEHOLDER: &str = "@username";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedDoc {
    pub source_id: String,
    pub tokens: Vec<String>,
}

impl TokenizedDoc {
    pub fn new(source_id: impl Into<String>, text: &str) -> Self {
        Self {
            source_id: source_id.into(),
            tokens: tokenize(text),
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Token with its half-open character range in the source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpannedToken {
    pub text: String,
    pub chars: Range<usize>,
}

pub(crate) fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Replaces every `@` mention with [`MENTION_PLACEHOLDER`].
///
/// A mention is an `@` that is not preceded by a word character, followed by
/// the longest run of word characters. Email-like `name@host` is left alone.
pub fn normalize_mentions(text: &str) -> String {
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let starts_mention = c == '@'
            && (i == 0 || !is_word_char(chars[i - 1]))
            && chars.get(i + 1).is_some_and(|&n| is_word_char(n));
        if starts_mention {
            let mut j = i + 1;
            while j < chars.len() && is_word_char(chars[j]) {
                j += 1;
            }
            out.push_str(MENTION_PLACEHOLDER);
            i = j;
        } else {
            out.push(c);
            i += 1;
        }
    }
    out
}

pub fn tokenize(text: &str) -> Vec<String> {
    tokenize_spanned(text).into_iter().map(|t| t.text).collect()
}

/// Tokenizes and keeps character offsets, for span-level work.
pub fn tokenize_spanned(text: &str) -> Vec<SpannedToken> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && !chars[i].is_whitespace() {
            i += 1;
        }
        split_chunk(&chars, start, i, &mut tokens);
    }
    tokens
}

fn split_chunk(chars: &[char], start: usize, end: usize, out: &mut Vec<SpannedToken>) {
    let single = |pos: usize| SpannedToken {
        text: chars[pos].to_string(),
        chars: pos..pos + 1,
    };

    let mut lo = start;
    while lo < end && !is_word_char(chars[lo]) {
        let attaches =
            matches!(chars[lo], '#' | '@') && lo + 1 < end && is_word_char(chars[lo + 1]);
        if attaches {
            break;
        }
        out.push(single(lo));
        lo += 1;
    }
    if lo == end {
        return;
    }

    let mut hi = end;
    while hi > lo && !is_word_char(chars[hi - 1]) {
        hi -= 1;
    }

    out.push(SpannedToken {
        text: chars[lo..hi].iter().collect(),
        chars: lo..hi,
    });
    for pos in hi..end {
        out.push(single(pos));
    }
}

/// Mention normalization followed by tokenization, the order used for
/// classifier features.
pub fn preprocess(text: &str) -> Vec<String> {
    tokenize(&normalize_mentions(text))
}
