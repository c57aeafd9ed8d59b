use serde::{Deserialize, Serialize};

use super::{EmbeddingError, WordVectorStore};
use crate::corpus::{Gender, MovieBundle};
use crate::text::{tokenize, TokenList};

/// Mean of the in-vocabulary word vectors of one dialogue line.
#[derive(Clone, Debug, PartialEq)]
pub struct DialogueEmbedding {
    pub vector: Vec<f64>,
    pub contributing_words: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenreEmbedding {
    pub label: String,
    pub vector: Vec<f64>,
}

/// Returns `None` when no token has a vector.
pub fn embed_tokens(tokens: &TokenList, store: &WordVectorStore) -> Option<DialogueEmbedding> {
    let mut sum = vec![0.0f64; store.dim()];
    let mut n = 0;
    for token in tokens.lower() {
        if let Some(v) = store.get(token) {
            for (s, x) in sum.iter_mut().zip(v) {
                *s += f64::from(*x);
            }
            n += 1;
        }
    }
    (n > 0).then(|| DialogueEmbedding {
        vector: sum.into_iter().map(|s| s / n as f64).collect(),
        contributing_words: n,
    })
}

/// Multi-word labels are embedded as the mean of their words.
pub fn embed_genre(label: &str, store: &WordVectorStore) -> Option<GenreEmbedding> {
    embed_tokens(&tokenize(label), store).map(|e| GenreEmbedding {
        label: label.to_owned(),
        vector: e.vector,
    })
}

/// Clamped to `[-1, 1]`.
pub fn cosine_similarity(u: &[f64], v: &[f64]) -> Result<f64, EmbeddingError> {
    if u.len() != v.len() {
        return Err(EmbeddingError::DimensionMismatch(u.len(), v.len()));
    }
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nv = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        return Err(EmbeddingError::ZeroNorm);
    }
    Ok((dot / (nu * nv)).clamp(-1.0, 1.0))
}

/// How many of a movie's genres take part in scoring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GenreLimit {
    /// The first `n` genres, in file order, that have an embedding.
    First(usize),
    All,
}

impl Default for GenreLimit {
    fn default() -> Self {
        GenreLimit::First(3)
    }
}

/// One gender's alignment with the movie's genres.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SideScores {
    /// Sum over lines and genres of the cosine terms.
    pub total: f64,
    /// Lines that had an embedding.
    pub lines: usize,
    /// `total / lines`.
    pub score: f64,
    /// Per-genre sums divided by `lines`, aligned with [`GenreTagScores::genres`].
    pub per_genre: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenreTagScores {
    pub genres: Vec<String>,
    pub female: Option<SideScores>,
    pub male: Option<SideScores>,
}

/// `line_embeddings` is aligned with `bundle.lines`. Lines whose speaker has
/// no resolved gender, or which have no embedding, take no part.
pub fn genre_tag_scores(
    bundle: &MovieBundle,
    line_embeddings: &[Option<DialogueEmbedding>],
    store: &WordVectorStore,
    limit: GenreLimit,
) -> Result<GenreTagScores, EmbeddingError> {
    let cap = match limit {
        GenreLimit::First(n) => n,
        GenreLimit::All => usize::MAX,
    };
    let genres: Vec<GenreEmbedding> = bundle
        .movie
        .genres
        .iter()
        .filter_map(|g| embed_genre(g, store))
        .take(cap)
        .collect();
    if genres.is_empty() {
        return Err(EmbeddingError::NoGenreEmbedding(
            bundle.movie.movie_id.clone(),
        ));
    }

    let speakers = bundle.speaker_genders();
    let side = |gender: Gender| -> Result<Option<SideScores>, EmbeddingError> {
        let mut per_genre = vec![0.0; genres.len()];
        let mut lines = 0;
        for (emb, speaker) in line_embeddings.iter().zip(&speakers) {
            let Some(emb) = emb else { continue };
            if *speaker != gender {
                continue;
            }
            lines += 1;
            for (acc, g) in per_genre.iter_mut().zip(&genres) {
                *acc += cosine_similarity(&g.vector, &emb.vector)?;
            }
        }
        if lines == 0 {
            return Ok(None);
        }
        let total: f64 = per_genre.iter().sum();
        Ok(Some(SideScores {
            total,
            lines,
            score: total / lines as f64,
            per_genre: per_genre.into_iter().map(|s| s / lines as f64).collect(),
        }))
    };
    Ok(GenreTagScores {
        genres: genres.iter().map(|g| g.label.clone()).collect(),
        female: side(Gender::Female)?,
        male: side(Gender::Male)?,
    })
}
