//! Word vectors, dialogue and genre embeddings, and genre-alignment scores.

mod genre;
mod store;

pub use genre::{
    cosine_similarity, embed_genre, embed_tokens, genre_tag_scores, DialogueEmbedding,
    GenreEmbedding, GenreLimit, GenreTagScores, SideScores,
};
pub use store::{load_vectors, write_vectors, LoadedVectors, VectorFormat, WordVectorStore};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EmbeddingError {
    #[error("failed to read vectors: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad vector header: {0}")]
    Header(String),
    #[error("header declares {declared} words but the file holds {found}")]
    CountMismatch { declared: usize, found: usize },
    #[error("row {row}: expected {expected} values, found {found}")]
    Dimension {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("vector dimensions differ ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("cosine similarity is undefined for a zero vector")]
    ZeroNorm,
    #[error("movie {0} has no genre with a word vector")]
    NoGenreEmbedding(String),
}
