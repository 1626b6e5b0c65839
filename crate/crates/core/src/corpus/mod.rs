//! Tweet and essay corpora: loading, acquisition filtering, sampling and
//! statistics.

mod acquisition;
mod essays;
mod stats;
mod tweets;

pub use acquisition::{
    contains_url, filter_acquisition, load_raw_dump, stratified_sample, write_raw_dump, RawTweet,
};
pub use essays::{
    is_claim_tag, label_from_tags, load_essay_conll, parse_conll, EssayCorpus, EssayParagraph,
    EssaySplit,
};
pub use stats::{corpus_stats, length_class_crosstab, ClassStats, CorpusStats, LengthCrosstab};
pub use tweets::{
    load_tweet_corpus, write_tweet_corpus, CharSpan, QueryCategory, Topic, TweetRecord,
};
