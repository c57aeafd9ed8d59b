//! Tokenization, stop words, part-of-speech counts and lexicon sentiment.

mod perceptron;
mod pos;
mod sentiment;
mod stopwords;
mod tokenize;

pub use perceptron::{parse_slash_tagged, PerceptronTagger, TaggedSentence};
pub use pos::{coarse_tag, count_pos, pos_tag, CoarseTag, LexiconTagger, PosCounts, PosTagger};
pub use sentiment::{
    normalize_score, sentiment, SentimentConfig, SentimentLexicon, SentimentScore,
};
pub use stopwords::{remove_stopwords, StopWords};
pub use tokenize::{tokenize, TokenList};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TextError {
    #[error("failed to read {what}: {source}")]
    Io {
        what: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}
