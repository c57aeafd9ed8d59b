//! Parses a dialogue corpus, joins it with crew and financial rows and prints one
//! line per movie.
//!
//! ```text
//! cargo run --example ingest_corpus -- [corpus-dir]
//! ```
//!
//! The directory holds the four ` +++$+++ ` files and an optional `crew.csv`.
//! It defaults to the bundled three-movie fixture.

use std::fs::File;
use std::path::PathBuf;

use femrep::corpus::{
    join_corpus, parse_characters, parse_conversations, parse_crew_csv, parse_delimited,
    parse_lines, parse_movies, CorpusTables, Encoding, ParsedTable, CHARACTER_SCHEMA,
    CONVERSATION_SCHEMA, DEFAULT_DELIMITER, LINE_SCHEMA, MOVIE_SCHEMA,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/tiny"));
    let table = |file: &str, schema: &[&str]| -> Result<ParsedTable, Box<dyn std::error::Error>> {
        let t = parse_delimited(
            File::open(dir.join(file))?,
            schema,
            DEFAULT_DELIMITER,
            Encoding::default(),
        )?;
        for d in &t.diagnostics {
            eprintln!("{file}:{}: {}", d.line, d.message);
        }
        Ok(t)
    };
    let (movies, _) = parse_movies(&table("movie_titles_metadata.txt", &MOVIE_SCHEMA)?);
    let (characters, _) =
        parse_characters(&table("movie_characters_metadata.txt", &CHARACTER_SCHEMA)?);
    let (lines, _) = parse_lines(&table("movie_lines.txt", &LINE_SCHEMA)?);
    let (conversations, _) =
        parse_conversations(&table("movie_conversations.txt", &CONVERSATION_SCHEMA)?);
    let crew = match File::open(dir.join("crew.csv")) {
        Ok(f) => parse_crew_csv(f)?,
        Err(_) => Vec::new(),
    };

    let outcome = join_corpus(CorpusTables {
        movies,
        characters,
        lines,
        conversations,
        crew,
    });
    for b in &outcome.bundles {
        let roi = match b.financials.as_ref().and_then(|f| f.roi) {
            Some(r) => format!("{r:.1}%"),
            None => "n/a".into(),
        };
        println!(
            "{} {:?} ({}): {} characters, {} lines, {} conversations, {} crew, ROI {roi}",
            b.movie.movie_id,
            b.movie.title,
            b.movie.release_year,
            b.characters.len(),
            b.lines.len(),
            b.conversations.len(),
            b.crew.len(),
        );
    }
    for e in &outcome.exclusions {
        println!("excluded {}: {}", e.movie_id, e.reason);
    }
    for d in &outcome.diagnostics {
        eprintln!("join: {d}");
    }
    Ok(())
}
