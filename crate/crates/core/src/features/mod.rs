//! Per-movie female-representation variables, the Bechdel scorer and yearly
//! gender-ratio reports.

mod bechdel;
mod matrix;
mod ratios;
mod vector;

pub use bechdel::{bechdel_score, BechdelResult, WordList};
pub use matrix::{assemble_matrix, FeatureExclusion, FeatureMatrix};
pub use ratios::{ratio_reports, Counts, YearRatios};
pub use vector::{
    build_feature_vector, LineAnalysis, MovieFeatureVector, COLUMN_LABELS, COLUMN_NAMES,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("need at least 2 complete feature rows, found {0}")]
    TooFewRows(usize),
}
