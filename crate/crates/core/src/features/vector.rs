use serde::{Deserialize, Serialize};

use crate::corpus::{Gender, MovieBundle};
use crate::embedding::GenreTagScores;
use crate::text::{PosCounts, SentimentScore};

/// Column names in their fixed output order.
pub const COLUMN_NAMES: [&str; 10] = [
    "genre1_tag_female",
    "genre2_tag_female",
    "genre3_tag_female",
    "female_cast_count",
    "female_dialogue_count",
    "female_crew_count",
    "sentiment_female",
    "noun_count_female",
    "verb_count_female",
    "adjective_count_female",
];

/// Human-readable labels, aligned with [`COLUMN_NAMES`].
pub const COLUMN_LABELS: [&str; 10] = [
    "Genre1 Tag Female",
    "Genre2 Tag Female",
    "Genre3 Tag Female",
    "Number of Female Cast",
    "Number of Female Dialogues",
    "Number of Female Crew",
    "Sentiment of Female",
    "Noun counts of Female",
    "Verb counts of Female",
    "Adjective counts of Female",
];

/// Text analysis results for one dialogue line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineAnalysis {
    pub pos: PosCounts,
    pub sentiment: SentimentScore,
}

/// The ten representation variables of one movie; `None` marks a missing value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MovieFeatureVector {
    pub movie_id: String,
    pub genre1_tag_female: Option<f64>,
    pub genre2_tag_female: Option<f64>,
    pub genre3_tag_female: Option<f64>,
    pub female_cast_count: u64,
    pub female_dialogue_count: u64,
    pub female_crew_count: u64,
    pub sentiment_female: Option<f64>,
    pub noun_count_female: u64,
    pub verb_count_female: u64,
    pub adjective_count_female: u64,
    /// Optional additional numeric columns, appended after the ten.
    pub extras: Vec<(String, Option<f64>)>,
}

impl MovieFeatureVector {
    pub fn values(&self) -> [Option<f64>; 10] {
        [
            self.genre1_tag_female,
            self.genre2_tag_female,
            self.genre3_tag_female,
            Some(self.female_cast_count as f64),
            Some(self.female_dialogue_count as f64),
            Some(self.female_crew_count as f64),
            self.sentiment_female,
            Some(self.noun_count_female as f64),
            Some(self.verb_count_female as f64),
            Some(self.adjective_count_female as f64),
        ]
    }

    /// Names of the columns without a value, extras included.
    pub fn missing(&self) -> Vec<String> {
        let base = COLUMN_NAMES
            .iter()
            .zip(self.values())
            .filter(|(_, v)| v.is_none())
            .map(|(n, _)| n.to_string());
        let extra = self
            .extras
            .iter()
            .filter(|(_, v)| v.is_none())
            .map(|(n, _)| n.clone());
        base.chain(extra).collect()
    }
}

/// `lines` is aligned with `bundle.lines`. Counts are totals over female-spoken
/// lines and the sentiment is their mean normalized score.
pub fn build_feature_vector(
    bundle: &MovieBundle,
    genre_scores: Option<&GenreTagScores>,
    lines: &[LineAnalysis],
) -> MovieFeatureVector {
    let speakers = bundle.speaker_genders();
    let mut pos = PosCounts::default();
    let mut sentiment_sum = 0.0;
    let mut female_lines = 0u64;
    for (analysis, speaker) in lines.iter().zip(&speakers) {
        if *speaker == Gender::Female {
            pos += analysis.pos;
            sentiment_sum += analysis.sentiment.normalized;
            female_lines += 1;
        }
    }
    let per_genre = genre_scores
        .and_then(|g| g.female.as_ref())
        .map(|f| f.per_genre.as_slice())
        .unwrap_or_default();
    MovieFeatureVector {
        movie_id: bundle.movie.movie_id.clone(),
        genre1_tag_female: per_genre.first().copied(),
        genre2_tag_female: per_genre.get(1).copied(),
        genre3_tag_female: per_genre.get(2).copied(),
        female_cast_count: bundle
            .characters
            .iter()
            .filter(|c| c.gender == Gender::Female)
            .count() as u64,
        female_dialogue_count: female_lines,
        female_crew_count: bundle
            .crew
            .iter()
            .filter(|c| c.gender == Gender::Female)
            .count() as u64,
        sentiment_female: (female_lines > 0).then(|| sentiment_sum / female_lines as f64),
        noun_count_female: pos.nouns,
        verb_count_female: pos.verbs,
        adjective_count_female: pos.adjectives,
        extras: Vec::new(),
    }
}
