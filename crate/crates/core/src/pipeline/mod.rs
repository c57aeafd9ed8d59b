//! The staged command pipeline: ingest, gender-model training, per-movie
//! analysis, PCA and the standalone Bechdel and ratio reports. Every stage
//! writes into the configured output directory and records input and output
//! digests in `manifest.json`.

mod analysis;
mod config;
mod manifest;
pub mod reports;
mod stages;

pub use analysis::{analyze_movie, analyze_movies, ExtraColumn, MovieAnalysis, Resources};
pub use config::{KeyKind, RunConfig, CONFIG_ENV, CONFIG_KEYS};
pub use manifest::{FileDigest, RunManifest, StageRecord, MANIFEST_FORMAT};
pub use stages::{
    load_bundle_cache, run, BundleCache, Command, StageReport, BUNDLES_FILE, BUNDLES_FORMAT,
    MANIFEST_FILE, MODEL_FILE,
};

use std::fmt::Display;
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("cannot read {}: {message}", path.display())]
    Input { path: PathBuf, message: String },
    #[error("{0}")]
    Missing(String),
    #[error("gender model training failed: {0}")]
    Training(String),
    #[error("insufficient data: {0}")]
    Insufficient(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot write {}: {message}", path.display())]
    Output { path: PathBuf, message: String },
}

impl PipelineError {
    pub fn input(path: &Path, err: impl Display) -> Self {
        PipelineError::Input {
            path: path.to_path_buf(),
            message: err.to_string(),
        }
    }

    /// 0 success, 2 missing or unreadable input, 3 training failure,
    /// 4 insufficient data, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Input { .. } | PipelineError::Missing(_) => 2,
            PipelineError::Training(_) => 3,
            PipelineError::Insufficient(_) => 4,
            PipelineError::Config(_) | PipelineError::Output { .. } => 1,
        }
    }
}
