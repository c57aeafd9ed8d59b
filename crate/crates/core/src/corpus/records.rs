use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::delimited::{parse_utterance_list, ParseDiagnostic, ParsedTable};

pub const MOVIE_SCHEMA: [&str; 6] = [
    "movie_id",
    "title",
    "release_year",
    "imdb_rating",
    "vote_count",
    "genres",
];
pub const CHARACTER_SCHEMA: [&str; 6] = [
    "character_id",
    "name",
    "movie_id",
    "movie_title",
    "gender",
    "credit_position",
];
pub const LINE_SCHEMA: [&str; 5] = [
    "line_id",
    "character_id",
    "movie_id",
    "character_name",
    "text",
];
pub const CONVERSATION_SCHEMA: [&str; 4] = [
    "first_character_id",
    "second_character_id",
    "movie_id",
    "utterances",
];

#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Gender {
    Male,
    Female,
    #[default]
    Unknown,
}

impl Gender {
    /// Reads the corpus and crew-table encodings: `m`/`male`/`2` and `f`/`female`/`1`
    /// (the last pair being the numeric crew-table coding). Anything else is unknown.
    pub fn parse_label(label: &str) -> Gender {
        match label.trim().to_ascii_lowercase().as_str() {
            "m" | "male" | "2" => Gender::Male,
            "f" | "female" | "1" => Gender::Female,
            _ => Gender::Unknown,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Gender::Male => "male",
            Gender::Female => "female",
            Gender::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenderSource {
    Corpus,
    Inferred,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MovieRecord {
    pub movie_id: String,
    pub title: String,
    pub release_year: i32,
    pub imdb_rating: f64,
    pub vote_count: u64,
    /// Lowercase labels in file order; the first is the primary genre.
    pub genres: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterRecord {
    pub character_id: String,
    pub name: String,
    pub movie_id: String,
    pub gender: Gender,
    /// `None` while the gender is unknown.
    pub gender_source: Option<GenderSource>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DialogueLine {
    pub line_id: String,
    pub character_id: String,
    pub movie_id: String,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConversationRecord {
    pub movie_id: String,
    pub first_character_id: String,
    pub second_character_id: String,
    pub utterances: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrewRecord {
    pub movie_id: String,
    pub name: String,
    pub job_title: String,
    pub gender: Gender,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Financials {
    pub budget: f64,
    pub revenue: f64,
    /// Percentage return; absent when the budget is zero.
    pub roi: Option<f64>,
}

/// Everything known about one movie after the join.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MovieBundle {
    pub movie: MovieRecord,
    pub characters: Vec<CharacterRecord>,
    pub lines: Vec<DialogueLine>,
    pub conversations: Vec<ConversationRecord>,
    pub crew: Vec<CrewRecord>,
    pub financials: Option<Financials>,
}

impl MovieBundle {
    pub fn character_genders(&self) -> HashMap<&str, Gender> {
        self.characters
            .iter()
            .map(|c| (c.character_id.as_str(), c.gender))
            .collect()
    }

    /// Resolved gender of each line's speaker, aligned with `self.lines`.
    pub fn speaker_genders(&self) -> Vec<Gender> {
        let genders = self.character_genders();
        self.lines
            .iter()
            .map(|l| {
                genders
                    .get(l.character_id.as_str())
                    .copied()
                    .unwrap_or_default()
            })
            .collect()
    }

    pub fn line_index(&self) -> HashMap<&str, &DialogueLine> {
        self.lines.iter().map(|l| (l.line_id.as_str(), l)).collect()
    }
}

fn diag(line: usize, message: impl Into<String>) -> ParseDiagnostic {
    ParseDiagnostic {
        line,
        message: message.into(),
    }
}

/// Years such as `1989/I` keep their leading digits.
fn parse_year(field: &str) -> Option<i32> {
    let digits: String = field
        .trim()
        .chars()
        .take_while(char::is_ascii_digit)
        .collect();
    digits.parse().ok()
}

/// Row numbers in diagnostics are 1-based positions among the parsed rows.
pub fn parse_movies(table: &ParsedTable) -> (Vec<MovieRecord>, Vec<ParseDiagnostic>) {
    let mut out = Vec::new();
    let mut diags = Vec::new();
    for (i, row) in table.rows.iter().enumerate() {
        let movie_id = row[0].trim();
        if movie_id.is_empty() {
            diags.push(diag(i + 1, "empty movie id"));
            continue;
        }
        let Some(release_year) = parse_year(&row[2]) else {
            diags.push(diag(i + 1, format!("unparseable year {:?}", row[2])));
            continue;
        };
        let imdb_rating = row[3].trim().parse().unwrap_or(f64::NAN);
        let vote_count = row[4].trim().parse().unwrap_or(0);
        let genres = match parse_utterance_list(&row[5]) {
            Ok(g) => g
                .into_iter()
                .map(|s| s.trim().to_lowercase())
                .filter(|s| !s.is_empty())
                .collect(),
            Err(_) => {
                diags.push(diag(i + 1, format!("malformed genre list {:?}", row[5])));
                Vec::new()
            }
        };
        out.push(MovieRecord {
            movie_id: movie_id.to_owned(),
            title: row[1].trim().to_owned(),
            release_year,
            imdb_rating,
            vote_count,
            genres,
        });
    }
    (out, diags)
}

pub fn parse_characters(table: &ParsedTable) -> (Vec<CharacterRecord>, Vec<ParseDiagnostic>) {
    let mut out = Vec::new();
    let mut diags = Vec::new();
    for (i, row) in table.rows.iter().enumerate() {
        let character_id = row[0].trim();
        if character_id.is_empty() {
            diags.push(diag(i + 1, "empty character id"));
            continue;
        }
        let gender = Gender::parse_label(&row[4]);
        out.push(CharacterRecord {
            character_id: character_id.to_owned(),
            name: row[1].trim().to_owned(),
            movie_id: row[2].trim().to_owned(),
            gender,
            gender_source: (gender != Gender::Unknown).then_some(GenderSource::Corpus),
        });
    }
    (out, diags)
}

pub fn parse_lines(table: &ParsedTable) -> (Vec<DialogueLine>, Vec<ParseDiagnostic>) {
    let mut out = Vec::new();
    let mut diags = Vec::new();
    for (i, row) in table.rows.iter().enumerate() {
        let line_id = row[0].trim();
        if line_id.is_empty() {
            diags.push(diag(i + 1, "empty line id"));
            continue;
        }
        out.push(DialogueLine {
            line_id: line_id.to_owned(),
            character_id: row[1].trim().to_owned(),
            movie_id: row[2].trim().to_owned(),
            text: row[4].clone(),
        });
    }
    (out, diags)
}

pub fn parse_conversations(table: &ParsedTable) -> (Vec<ConversationRecord>, Vec<ParseDiagnostic>) {
    let mut out = Vec::new();
    let mut diags = Vec::new();
    for (i, row) in table.rows.iter().enumerate() {
        match parse_utterance_list(&row[3]) {
            Ok(utterances) if utterances.is_empty() => {
                diags.push(diag(i + 1, "conversation has no utterances"));
            }
            Ok(utterances) => out.push(ConversationRecord {
                movie_id: row[2].trim().to_owned(),
                first_character_id: row[0].trim().to_owned(),
                second_character_id: row[1].trim().to_owned(),
                utterances,
            }),
            Err(e) => diags.push(diag(i + 1, e.to_string())),
        }
    }
    (out, diags)
}
