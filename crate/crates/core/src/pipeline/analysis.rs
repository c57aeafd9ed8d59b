use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::MovieBundle;
use crate::embedding::{
    embed_tokens, genre_tag_scores, GenreLimit, GenreTagScores, WordVectorStore,
};
use crate::features::{
    bechdel_score, build_feature_vector, BechdelResult, LineAnalysis, MovieFeatureVector, WordList,
};
use crate::text::{
    count_pos, pos_tag, remove_stopwords, sentiment, tokenize, PosTagger, SentimentConfig,
    SentimentLexicon, StopWords,
};

/// Optional numeric columns that can be appended to the ten features.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtraColumn {
    Roi,
    Budget,
    Revenue,
    ImdbRating,
    VoteCount,
    ReleaseYear,
}

impl ExtraColumn {
    pub fn name(self) -> &'static str {
        match self {
            ExtraColumn::Roi => "roi",
            ExtraColumn::Budget => "budget",
            ExtraColumn::Revenue => "revenue",
            ExtraColumn::ImdbRating => "imdb_rating",
            ExtraColumn::VoteCount => "vote_count",
            ExtraColumn::ReleaseYear => "release_year",
        }
    }

    pub fn value(self, bundle: &MovieBundle) -> Option<f64> {
        let fin = bundle.financials.as_ref();
        match self {
            ExtraColumn::Roi => fin.and_then(|f| f.roi),
            ExtraColumn::Budget => fin.map(|f| f.budget),
            ExtraColumn::Revenue => fin.map(|f| f.revenue),
            ExtraColumn::ImdbRating => Some(bundle.movie.imdb_rating),
            ExtraColumn::VoteCount => Some(bundle.movie.vote_count as f64),
            ExtraColumn::ReleaseYear => Some(f64::from(bundle.movie.release_year)),
        }
    }
}

impl FromStr for ExtraColumn {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "roi" => Ok(ExtraColumn::Roi),
            "budget" => Ok(ExtraColumn::Budget),
            "revenue" => Ok(ExtraColumn::Revenue),
            "imdb_rating" => Ok(ExtraColumn::ImdbRating),
            "vote_count" => Ok(ExtraColumn::VoteCount),
            "release_year" => Ok(ExtraColumn::ReleaseYear),
            other => Err(format!("unknown extra column {other:?}")),
        }
    }
}

/// Models and word lists shared by every movie's analysis.
pub struct Resources {
    pub vectors: WordVectorStore,
    pub lexicon: SentimentLexicon,
    pub stopwords: StopWords,
    pub tagger: Box<dyn PosTagger>,
    pub male_reference: WordList,
    pub named_blocklist: WordList,
    pub sentiment: SentimentConfig,
    pub genre_limit: GenreLimit,
    pub extra_columns: Vec<ExtraColumn>,
}

/// Everything computed for one movie.
#[derive(Clone, Debug, PartialEq)]
pub struct MovieAnalysis {
    /// Aligned with the bundle's lines.
    pub lines: Vec<LineAnalysis>,
    /// `None` when none of the movie's genres has an embedding.
    pub genre_scores: Option<GenreTagScores>,
    pub features: MovieFeatureVector,
    pub bechdel: BechdelResult,
}

/// Tags, scores and embeds every line, then derives the movie's features.
pub fn analyze_movie(bundle: &MovieBundle, res: &Resources) -> MovieAnalysis {
    let mut lines = Vec::with_capacity(bundle.lines.len());
    let mut embeddings = Vec::with_capacity(bundle.lines.len());
    for line in &bundle.lines {
        let tokens = tokenize(&line.text);
        let pos = count_pos(&pos_tag(&tokens, res.tagger.as_ref()));
        let score = sentiment(&line.text, &res.lexicon, &res.sentiment);
        lines.push(LineAnalysis {
            pos,
            sentiment: score,
        });
        embeddings.push(embed_tokens(
            &remove_stopwords(&tokens, &res.stopwords),
            &res.vectors,
        ));
    }
    let genre_scores = genre_tag_scores(bundle, &embeddings, &res.vectors, res.genre_limit).ok();
    let mut features = build_feature_vector(bundle, genre_scores.as_ref(), &lines);
    features.extras = res
        .extra_columns
        .iter()
        .map(|c| (c.name().to_owned(), c.value(bundle)))
        .collect();
    let bechdel = bechdel_score(bundle, &res.male_reference, &res.named_blocklist);
    MovieAnalysis {
        lines,
        genre_scores,
        features,
        bechdel,
    }
}

/// [`analyze_movie`] over all bundles on `workers` threads (0: one per core).
/// Results keep the input order.
pub fn analyze_movies(
    bundles: &[MovieBundle],
    res: &Resources,
    workers: usize,
) -> Vec<MovieAnalysis> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool starts");
    pool.install(|| bundles.par_iter().map(|b| analyze_movie(b, res)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extra_column_names_round_trip() {
        for c in [
            ExtraColumn::Roi,
            ExtraColumn::Budget,
            ExtraColumn::Revenue,
            ExtraColumn::ImdbRating,
            ExtraColumn::VoteCount,
            ExtraColumn::ReleaseYear,
        ] {
            assert_eq!(c.name().parse::<ExtraColumn>().unwrap(), c);
        }
        assert_eq!(
            "imdb-rating".parse::<ExtraColumn>().unwrap(),
            ExtraColumn::ImdbRating
        );
        assert!("height".parse::<ExtraColumn>().is_err());
    }
}
