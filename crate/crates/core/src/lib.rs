//! Female-representation analysis for screenplay dialogue corpora.
//!
//! The crate is organised as a pipeline of independent stages:
//!
//! - [`corpus`]: parse the delimited corpus files and join them into per-movie
//!   [`corpus::MovieBundle`]s, with crew and financial data matched on title and year.
//! - [`gender`]: a decision-tree classifier over leading/trailing character n-grams of
//!   names, used to fill in missing character genders.
//! - [`text`]: tokenization, stop-word removal, part-of-speech counting and
//!   lexicon sentiment scoring.
//! - [`embedding`]: word-vector loading, dialogue embeddings and genre-alignment scores.
//! - [`features`]: the ten per-movie female-representation variables, the Bechdel
//!   scorer and the yearly gender-ratio reports.
//! - [`mva`]: standardization, correlation, KMO, Bartlett's sphericity test, Jacobi
//!   eigendecomposition, variance tables, retention rules and factor loadings.
//! - [`pipeline`]: configuration, manifests and the commands behind the `femrep` binary.
//!
//! Each capability has a runnable program under `examples/`.

pub mod corpus;
pub mod embedding;
pub mod features;
pub mod gender;
pub mod mva;
pub mod pipeline;
pub mod text;

mod fmt;

pub use corpus::{Gender, MovieBundle};
pub use features::MovieFeatureVector;
pub use gender::GenderModel;
pub use mva::PcaReport;
