//! Corpus ingestion: the four delimited screenplay files, the crew/financials CSV,
//! and the join that produces one [`MovieBundle`] per movie.

mod builder;
mod delimited;
mod join;
mod records;

pub use builder::BundleBuilder;
pub use delimited::{
    parse_delimited, parse_utterance_list, write_delimited, Encoding, ParseDiagnostic, ParsedTable,
    DEFAULT_DELIMITER,
};
pub use join::{
    compute_roi, join_corpus, normalize_title, parse_crew_csv, CorpusTables, CrewRow, Exclusion,
    ExclusionReason, JoinOutcome,
};
pub use records::{
    parse_characters, parse_conversations, parse_lines, parse_movies, CharacterRecord,
    ConversationRecord, CrewRecord, DialogueLine, Financials, Gender, GenderSource, MovieBundle,
    MovieRecord, CHARACTER_SCHEMA, CONVERSATION_SCHEMA, LINE_SCHEMA, MOVIE_SCHEMA,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("failed to read {what}: {source}")]
    Io {
        what: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed utterance list {0:?}")]
    UtteranceList(String),
    #[error("ROI is undefined when the budget is zero")]
    UndefinedRoi,
    #[error("crew CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("crew CSV is missing column {0:?}")]
    MissingColumn(&'static str),
}
