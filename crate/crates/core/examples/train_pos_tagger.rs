//! Trains the averaged-perceptron tagger on a `word/TAG` corpus and writes a weights file.
//!
//! ```text
//! cargo run --release --example train_pos_tagger -- data/tagger/en_perceptron.tsv 1.0 a.txt b.txt
//! ```
//!
//! Weights smaller in magnitude than the second argument are dropped to keep the file small.

use std::env;
use std::fs;

use femrep::text::{parse_slash_tagged, PerceptronTagger, TaggedSentence};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = env::args().skip(1).collect();
    let [out, min_weight, corpora @ ..] = args.as_slice() else {
        eprintln!("usage: train_pos_tagger <output.tsv> <min-weight> <word/TAG corpus>...");
        std::process::exit(2);
    };
    let min_weight: f64 = min_weight.parse()?;
    let mut text = String::new();
    for path in corpora {
        text.push_str(&fs::read_to_string(path)?);
        text.push('\n');
    }
    // The tokenizer never yields pure punctuation, so neither does training.
    let sentences: Vec<TaggedSentence> = text
        .lines()
        .map(|l| {
            parse_slash_tagged(l)
                .into_iter()
                .filter(|(w, _)| w.chars().any(char::is_alphanumeric))
                .collect::<TaggedSentence>()
        })
        .filter(|s| !s.is_empty())
        .collect();
    let held_out = sentences.len() / 10;
    let (test, train) = sentences.split_at(held_out);
    let mut tagger = PerceptronTagger::train(train, 5, 7);
    println!("sentences: {} train, {} held out", train.len(), test.len());
    println!("held-out accuracy: {:.4}", tagger.accuracy(test));
    if min_weight > 0.0 {
        tagger.prune(min_weight);
        println!(
            "held-out accuracy after pruning: {:.4}",
            tagger.accuracy(test)
        );
    }

    let mut full = PerceptronTagger::train(&sentences, 5, 7);
    full.prune(min_weight);
    fs::write(out, full.to_tsv())?;
    println!("wrote {out} ({} classes)", full.classes().len());
    Ok(())
}
