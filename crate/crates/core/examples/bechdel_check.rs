//! Runs the three Bechdel criteria on hand-built scenes.
//!
//! ```text
//! cargo run --example bechdel_check
//! ```

use femrep::corpus::{BundleBuilder, Gender, MovieBundle};
use femrep::features::{bechdel_score, WordList};

fn scene(second: &str, reply: &str) -> MovieBundle {
    BundleBuilder::new("m", "Scene", 2000)
        .character("a", "ALICE", Gender::Female)
        .character("b", second, Gender::Female)
        .line("L1", "a", "Did you finish the book?")
        .line("L2", "b", reply)
        .conversation("a", "b", &["L1", "L2"])
        .build()
}

fn main() {
    let male = WordList::male_reference();
    let blocklist = WordList::named_blocklist();
    let scenes = [
        (
            "two women discuss a book",
            scene("BETTY", "Yes, the ending was wonderful."),
        ),
        (
            "the talk turns to a man",
            scene("BETTY", "Yes, but he spoiled the ending."),
        ),
        (
            "one woman is unnamed",
            scene("WAITRESS", "Yes, the ending was wonderful."),
        ),
    ];
    for (what, movie) in &scenes {
        let r = bechdel_score(movie, &male, &blocklist);
        println!(
            "{what}: named {} / talk {} / not about a man {} => {}{}",
            r.has_two_named_females,
            r.has_female_conversation,
            r.has_non_male_topic,
            if r.passes { "pass" } else { "fail" },
            r.witness
                .map(|w| format!(" (lines {})", w.join(", ")))
                .unwrap_or_default()
        );
    }
}
