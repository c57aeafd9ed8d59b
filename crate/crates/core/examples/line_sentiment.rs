//! Scores lines of dialogue with the bundled valence lexicon.
//!
//! ```text
//! cargo run --example line_sentiment -- "What a GREAT day!!" "It was awfully hard"
//! ```

use femrep::text::{sentiment, SentimentConfig, SentimentLexicon};

fn main() {
    let lexicon = SentimentLexicon::bundled();
    let config = SentimentConfig::default();
    let mut lines: Vec<String> = std::env::args().skip(1).collect();
    if lines.is_empty() {
        lines = [
            "What a GREAT day!!",
            "It was awfully hard",
            "I hate this place.",
            "Pass the salt.",
        ]
        .map(String::from)
        .to_vec();
    }
    println!("{} lexicon entries", lexicon.len());
    for line in &lines {
        let s = sentiment(line, &lexicon, &config);
        println!("{:>8.3} {:>7.3}  {line}", s.raw_sum, s.normalized);
    }
}
