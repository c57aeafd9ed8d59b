use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{tokenize, TextError};

const VADER: &str = include_str!("../../data/vader_lexicon.tsv");

/// Word valences in `[-4, 4]`, keyed by lowercase word.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SentimentLexicon {
    valences: HashMap<String, f64>,
}

impl SentimentLexicon {
    /// Parses `word<TAB>valence` lines. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, TextError> {
        let mut valences = HashMap::new();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |message: String| TextError::Format {
                line: n + 1,
                message,
            };
            let (word, value) = line
                .split_once('\t')
                .ok_or_else(|| bad("expected word<TAB>valence".into()))?;
            let v: f64 = value
                .trim()
                .parse()
                .map_err(|_| bad(format!("bad valence {value:?}")))?;
            if !(-4.0..=4.0).contains(&v) {
                return Err(bad(format!("valence {v} outside [-4, 4]")));
            }
            valences.insert(word.trim().to_lowercase(), v);
        }
        Ok(SentimentLexicon { valences })
    }

    /// The bundled general-purpose English lexicon.
    pub fn bundled() -> Self {
        Self::parse(VADER).expect("bundled lexicon parses")
    }

    pub fn get(&self, word: &str) -> Option<f64> {
        self.valences.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.valences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.valences.is_empty()
    }
}

impl<'a> FromIterator<(&'a str, f64)> for SentimentLexicon {
    fn from_iter<I: IntoIterator<Item = (&'a str, f64)>>(iter: I) -> Self {
        SentimentLexicon {
            valences: iter
                .into_iter()
                .map(|(w, v)| (w.to_lowercase(), v))
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SentimentConfig {
    /// Squashing constant; must be positive.
    pub alpha: f64,
    /// Added to the magnitude of an all-caps lexicon word.
    pub caps_boost: f64,
    /// Added to the magnitude of the total per trailing `!`.
    pub exclamation_boost: f64,
    pub max_exclamations: usize,
}

impl Default for SentimentConfig {
    fn default() -> Self {
        SentimentConfig {
            alpha: 15.0,
            caps_boost: 0.733,
            exclamation_boost: 0.292,
            max_exclamations: 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SentimentScore {
    pub raw_sum: f64,
    pub normalized: f64,
}

/// Maps a raw valence sum into `(-1, 1)`.
pub fn normalize_score(x: f64, alpha: f64) -> f64 {
    x / (x * x + alpha).sqrt()
}

fn is_shouted(word: &str) -> bool {
    word.chars().count() >= 2
        && word.chars().any(char::is_alphabetic)
        && !word.chars().any(char::is_lowercase)
}

/// Scores raw (unfiltered) text.
pub fn sentiment(
    text: &str,
    lexicon: &SentimentLexicon,
    config: &SentimentConfig,
) -> SentimentScore {
    let mut x = 0.0;
    for (lower, original) in tokenize(text).iter() {
        if let Some(mut v) = lexicon.get(lower) {
            if v != 0.0 && is_shouted(original) {
                v += config.caps_boost * v.signum();
            }
            x += v;
        }
    }
    if x != 0.0 {
        let bangs = text
            .trim_end()
            .chars()
            .rev()
            .take_while(|&c| c == '!')
            .count();
        x += x.signum() * config.exclamation_boost * bangs.min(config.max_exclamations) as f64;
    }
    SentimentScore {
        raw_sum: x,
        normalized: normalize_score(x, config.alpha),
    }
}
