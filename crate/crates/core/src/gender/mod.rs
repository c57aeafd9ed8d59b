//! Name-based gender inference: leading/trailing character n-grams fed to a
//! categorical decision tree.

mod model;
mod tree;

pub use model::{
    fill_missing_genders, load_names_csv, train, train_with, Branch, FillStats, GenderModel,
    NamesDataset, NodeKind, Prediction, TrainOptions, TreeNode, MODEL_FORMAT,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Gender;

#[derive(Debug, Error)]
pub enum GenderError {
    #[error("name {0:?} is empty after normalization")]
    InvalidName(String),
    #[error("training needs at least two examples of each class (female: {female}, male: {male})")]
    Degenerate { female: usize, male: usize },
    #[error("train fraction must lie strictly between 0 and 1, got {0}")]
    TrainFraction(f64),
    #[error("names CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("model file: {0}")]
    ModelFormat(String),
    #[error("model file: {0}")]
    Json(#[from] serde_json::Error),
}

/// Feature names in their canonical order.
pub const FEATURE_NAMES: [&str; 6] = ["first1", "last1", "first2", "last2", "first3", "last3"];

/// A labelled training name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NameExample {
    pub name: String,
    pub gender: Gender,
}

impl NameExample {
    /// Fails for unknown gender or a name that normalizes to nothing.
    pub fn new(name: impl Into<String>, gender: Gender) -> Result<Self, GenderError> {
        let name = name.into();
        if gender == Gender::Unknown || normalize_name(&name).is_empty() {
            return Err(GenderError::InvalidName(name));
        }
        Ok(NameExample { name, gender })
    }
}

/// Lowercase ASCII letters and digits, single spaces between words.
pub fn normalize_name(name: &str) -> String {
    let kept: String = name
        .chars()
        .filter(|c| c.is_ascii_alphanumeric() || c.is_whitespace())
        .map(|c| c.to_ascii_lowercase())
        .collect();
    kept.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// First and last one, two and three characters of a normalized name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NGramFeatures {
    pub first1: String,
    pub last1: String,
    pub first2: String,
    pub last2: String,
    pub first3: String,
    pub last3: String,
}

impl NGramFeatures {
    pub fn get(&self, feature: &str) -> Option<&str> {
        Some(match feature {
            "first1" => &self.first1,
            "last1" => &self.last1,
            "first2" => &self.first2,
            "last2" => &self.last2,
            "first3" => &self.first3,
            "last3" => &self.last3,
            _ => return None,
        })
    }

    /// `(feature name, value)` pairs in [`FEATURE_NAMES`] order.
    pub fn pairs(&self) -> [(&'static str, &str); 6] {
        FEATURE_NAMES.map(|f| (f, self.get(f).unwrap_or_default()))
    }
}

pub fn extract_ngram_features(name: &str) -> Result<NGramFeatures, GenderError> {
    let normalized = normalize_name(name);
    if normalized.is_empty() {
        return Err(GenderError::InvalidName(name.to_owned()));
    }
    let chars: Vec<char> = normalized.chars().collect();
    let head = |k: usize| chars[..k.min(chars.len())].iter().collect::<String>();
    let tail = |k: usize| {
        chars[chars.len().saturating_sub(k)..]
            .iter()
            .collect::<String>()
    };
    Ok(NGramFeatures {
        first1: head(1),
        last1: tail(1),
        first2: head(2),
        last2: tail(2),
        first3: head(3),
        last3: tail(3),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn mary_jane() {
        let f = extract_ngram_features("MARY JANE").unwrap();
        assert_eq!(
            (
                f.first1.as_str(),
                f.last1.as_str(),
                f.first2.as_str(),
                f.last2.as_str(),
                f.first3.as_str(),
                f.last3.as_str()
            ),
            ("m", "e", "ma", "ne", "mar", "ane")
        );
    }

    #[test]
    fn short_names_use_whole_string() {
        let f = extract_ngram_features("BO").unwrap();
        assert_eq!(f.first1, "b");
        assert_eq!(f.last1, "o");
        for v in [&f.first2, &f.last2, &f.first3, &f.last3] {
            assert_eq!(v, "bo");
        }
        let a = extract_ngram_features("A").unwrap();
        assert!(a.pairs().iter().all(|(_, v)| *v == "a"));
    }

    #[test]
    fn punctuation_and_non_ascii_are_stripped() {
        assert_eq!(normalize_name("X \u{C6}-12"), "x 12");
        assert_eq!(normalize_name("  O'Brien,   Jr. "), "obrien jr");
        assert!(matches!(
            extract_ngram_features("-- !"),
            Err(GenderError::InvalidName(_))
        ));
    }

    #[test]
    fn examples_reject_unknown_gender() {
        assert!(NameExample::new("Sam", Gender::Unknown).is_err());
        assert!(NameExample::new("...", Gender::Male).is_err());
        assert!(NameExample::new("Sam", Gender::Male).is_ok());
    }

    proptest! {
        #[test]
        fn extraction_is_idempotent_under_normalization(name in "[A-Za-z .'\\-]{1,20}") {
            let norm = normalize_name(&name);
            prop_assume!(!norm.is_empty());
            prop_assert_eq!(extract_ngram_features(&norm).unwrap(), extract_ngram_features(&name).unwrap());
        }

        #[test]
        fn feature_lengths_are_bounded(name in "[a-z]{1,12}( [a-z]{1,8})?") {
            let f = extract_ngram_features(&name).unwrap();
            prop_assert_eq!(f.first1.chars().count(), 1);
            prop_assert_eq!(f.last1.chars().count(), 1);
            prop_assert!(f.first2.chars().count() <= 2 && f.last2.chars().count() <= 2);
            prop_assert!(f.first3.chars().count() <= 3 && f.last3.chars().count() <= 3);
        }
    }
}
