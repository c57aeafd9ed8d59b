//! Runs every stage of the pipeline on the bundled three-movie fixture.
//!
//! ```text
//! cargo run --example full_pipeline -- [output-dir]
//! ```

use std::path::PathBuf;

use femrep::pipeline::{run, Command, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixture = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/tiny");
    let mut cfg = RunConfig::load(Some(&fixture.join("run.toml")))?;
    cfg.output = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("femrep-demo"));
    for command in Command::ALL {
        let report = run(command, &cfg)?;
        println!("{command}:");
        for path in &report.outputs {
            println!("  wrote {}", path.display());
        }
        for (key, value) in &report.summary {
            println!("  {key} = {value}");
        }
    }
    Ok(())
}
