//! Tags dialogue with the bundled perceptron tagger and prints the coarse
//! noun/verb/adjective counts.
//!
//! ```text
//! cargo run --example pos_counts -- "The old captain sailed the quiet sea."
//! ```

use femrep::text::{count_pos, pos_tag, tokenize, PerceptronTagger};

fn main() {
    let tagger = PerceptronTagger::bundled();
    let mut lines: Vec<String> = std::env::args().skip(1).collect();
    if lines.is_empty() {
        lines = vec![
            "The old captain sailed the quiet sea.".into(),
            "She quickly wrote a long letter.".into(),
        ];
    }
    for line in &lines {
        let tagged = pos_tag(&tokenize(line), tagger);
        let words: Vec<String> = tagged
            .iter()
            .map(|(w, t)| format!("{w}/{}", t.as_str()))
            .collect();
        let c = count_pos(&tagged);
        println!("{}", words.join(" "));
        println!(
            "  nouns {} verbs {} adjectives {} other {}",
            c.nouns, c.verbs, c.adjectives, c.other
        );
    }
}
