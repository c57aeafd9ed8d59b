//! Runs PCA with KMO and Bartlett diagnostics on a feature table.
//!
//! ```text
//! cargo run --example pca_report -- features.csv [kaiser|cumulative:0.7|fixed:3]
//! ```
//!
//! Without arguments a seeded synthetic table with two latent factors is analysed.

use femrep::features::{FeatureMatrix, COLUMN_NAMES};
use femrep::mva::{run_pca, PcaOptions, RetentionRule};
use femrep::pipeline::reports::read_features_csv;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn synthetic() -> FeatureMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut movie_ids = Vec::new();
    let mut rows = Vec::new();
    for i in 0..200 {
        let (a, b): (f64, f64) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        movie_ids.push(format!("m{i}"));
        rows.push(
            (0..10)
                .map(|j| if j < 5 { 2.0 * a } else { b } + rng.random_range(-0.6..0.6))
                .collect(),
        );
    }
    FeatureMatrix {
        movie_ids,
        columns: COLUMN_NAMES.iter().map(|s| s.to_string()).collect(),
        rows,
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let matrix = match args.first() {
        Some(path) => read_features_csv(&std::fs::read_to_string(path)?)?.0,
        None => synthetic(),
    };
    let rule: RetentionRule = match args.get(1) {
        Some(r) => r.parse()?,
        None => RetentionRule::Kaiser,
    };
    let report = run_pca(
        &matrix,
        PcaOptions {
            rule,
            ..PcaOptions::default()
        },
    )?;
    print!("{}", report.adequacy_csv());
    println!();
    print!("{}", report.variance_csv());
    println!();
    print!("{}", report.component_labels_csv());
    Ok(())
}
