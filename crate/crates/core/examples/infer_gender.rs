//! Trains the name-based gender classifier on the bundled name list and labels
//! the names given on the command line.
//!
//! ```text
//! cargo run --release --example infer_gender -- Maria Joseph Quinn
//! ```

use femrep::gender::{train, NamesDataset};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let names = NamesDataset::bundled();
    let model = train(&names.examples, 0.9, 7)?;
    println!(
        "{} names; accuracy {:.3} on training, {:.3} held out",
        names.examples.len(),
        model.train_accuracy(),
        model.test_accuracy()
    );
    let mut queries: Vec<String> = std::env::args().skip(1).collect();
    if queries.is_empty() {
        queries = ["Maria", "Joseph", "Quinn", "Kendall"]
            .map(String::from)
            .to_vec();
    }
    for name in &queries {
        match model.predict(name) {
            Ok(p) => println!("{name}: {:?} (leaf purity {:.2})", p.gender, p.confidence),
            Err(e) => println!("{name}: {e}"),
        }
    }
    Ok(())
}
