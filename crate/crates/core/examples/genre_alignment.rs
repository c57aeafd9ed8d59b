//! Measures how closely each gender's dialogue aligns with a movie's genre
//! labels in a word-embedding space.
//!
//! ```text
//! cargo run --example genre_alignment -- [vectors.txt]
//! ```
//!
//! Without an argument the small fixture vectors are used.

use std::fs::File;
use std::path::PathBuf;

use femrep::corpus::{BundleBuilder, Gender};
use femrep::embedding::{embed_tokens, genre_tag_scores, load_vectors, GenreLimit, VectorFormat};
use femrep::text::{remove_stopwords, tokenize, StopWords};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/tiny/vectors.txt")
        });
    let vectors = load_vectors(File::open(&path)?, VectorFormat::Text)?.store;

    let movie = BundleBuilder::new("m1", "Night Watch", 1999)
        .genres(&["thriller", "drama", "romance"])
        .character("u1", "ANNA", Gender::Female)
        .character("u2", "BEN", Gender::Male)
        .line("L1", "u1", "I love a happy book.")
        .line("L2", "u2", "Run and fight that bad dog!")
        .line("L3", "u1", "We cry and talk all night.")
        .build();

    let stop = StopWords::english();
    let embeddings: Vec<_> = movie
        .lines
        .iter()
        .map(|l| embed_tokens(&remove_stopwords(&tokenize(&l.text), &stop), &vectors))
        .collect();
    let scores = genre_tag_scores(&movie, &embeddings, &vectors, GenreLimit::First(3))?;
    println!("genres with embeddings: {}", scores.genres.join(", "));
    for (label, side) in [("female", &scores.female), ("male", &scores.male)] {
        match side {
            Some(s) => {
                let per: Vec<String> = scores
                    .genres
                    .iter()
                    .zip(&s.per_genre)
                    .map(|(g, v)| format!("{g} {v:.3}"))
                    .collect();
                println!(
                    "{label}: score {:.3} over {} lines ({})",
                    s.score,
                    s.lines,
                    per.join(", ")
                );
            }
            None => println!("{label}: no embedded lines"),
        }
    }
    Ok(())
}
