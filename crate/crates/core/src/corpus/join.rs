use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::Read;

use serde::{Deserialize, Serialize};

use super::records::{
    CharacterRecord, ConversationRecord, CrewRecord, DialogueLine, Financials, Gender, MovieBundle,
    MovieRecord,
};
use super::CorpusError;

/// Percentage return on investment: `(revenue - budget) / budget * 100`.
pub fn compute_roi(budget: f64, revenue: f64) -> Result<f64, CorpusError> {
    if budget == 0.0 {
        return Err(CorpusError::UndefinedRoi);
    }
    Ok((revenue - budget) / budget * 100.0)
}

/// Lowercases and collapses whitespace so titles from different sources compare equal.
pub fn normalize_title(title: &str) -> String {
    title
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

/// One row of the crew/financials CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct CrewRow {
    pub movie_title: String,
    pub year: Option<i32>,
    pub crew_name: String,
    pub job_title: String,
    pub gender: Gender,
    pub budget: Option<f64>,
    pub revenue: Option<f64>,
}

const CREW_COLUMNS: [&str; 7] = [
    "movie_title",
    "year",
    "crew_name",
    "job_title",
    "gender",
    "budget",
    "revenue",
];

/// Reads the crew CSV. Columns are located by header name, so their order is free.
pub fn parse_crew_csv<R: Read>(reader: R) -> Result<Vec<CrewRow>, CorpusError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let mut idx = [0usize; 7];
    for (slot, name) in idx.iter_mut().zip(CREW_COLUMNS) {
        *slot = headers
            .iter()
            .position(|h| h.trim().eq_ignore_ascii_case(name))
            .ok_or(CorpusError::MissingColumn(name))?;
    }
    let num = |s: &str| s.trim().parse::<f64>().ok().filter(|v| v.is_finite());
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let get = |i: usize| record.get(idx[i]).unwrap_or("");
        rows.push(CrewRow {
            movie_title: get(0).to_owned(),
            year: get(1).trim().parse().ok(),
            crew_name: get(2).trim().to_owned(),
            job_title: get(3).trim().to_owned(),
            gender: Gender::parse_label(get(4)),
            budget: num(get(5)),
            revenue: num(get(6)),
        });
    }
    Ok(rows)
}

/// All parsed inputs of one corpus.
#[derive(Clone, Debug, Default)]
pub struct CorpusTables {
    pub movies: Vec<MovieRecord>,
    pub characters: Vec<CharacterRecord>,
    pub lines: Vec<DialogueLine>,
    pub conversations: Vec<ConversationRecord>,
    pub crew: Vec<CrewRow>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExclusionReason {
    DuplicateMovieId,
    NoCharacters,
    NoDialogue,
}

impl fmt::Display for ExclusionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExclusionReason::DuplicateMovieId => "duplicate_movie_id",
            ExclusionReason::NoCharacters => "no_characters",
            ExclusionReason::NoDialogue => "no_dialogue",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exclusion {
    pub movie_id: String,
    pub reason: ExclusionReason,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct JoinOutcome {
    pub bundles: Vec<MovieBundle>,
    pub exclusions: Vec<Exclusion>,
    /// Retained movies for which no crew/financial row matched on (title, year).
    pub unmatched_financials: Vec<String>,
    /// Records dropped because a reference did not resolve.
    pub diagnostics: Vec<String>,
}

/// Joins the parsed tables into one bundle per metadata row.
///
/// Movies without characters or dialogue are excluded with a reason, so
/// `bundles.len() + exclusions.len() == tables.movies.len()`.
pub fn join_corpus(tables: CorpusTables) -> JoinOutcome {
    let CorpusTables {
        movies,
        characters,
        lines,
        conversations,
        crew,
    } = tables;
    let mut diagnostics = Vec::new();

    let mut char_movie: HashMap<String, String> = HashMap::new();
    let mut chars_by_movie: HashMap<String, Vec<CharacterRecord>> = HashMap::new();
    for c in characters {
        if char_movie.contains_key(&c.character_id) {
            diagnostics.push(format!("duplicate character id {}", c.character_id));
            continue;
        }
        char_movie.insert(c.character_id.clone(), c.movie_id.clone());
        chars_by_movie
            .entry(c.movie_id.clone())
            .or_default()
            .push(c);
    }

    let mut line_movie: HashMap<String, String> = HashMap::new();
    let mut lines_by_movie: HashMap<String, Vec<DialogueLine>> = HashMap::new();
    for l in lines {
        if line_movie.contains_key(&l.line_id) {
            diagnostics.push(format!("duplicate line id {}", l.line_id));
            continue;
        }
        match char_movie.get(&l.character_id) {
            Some(m) if *m == l.movie_id => {}
            Some(_) => {
                diagnostics.push(format!(
                    "line {} speaker {} belongs to another movie",
                    l.line_id, l.character_id
                ));
                continue;
            }
            None => {
                diagnostics.push(format!(
                    "line {} has unknown speaker {}",
                    l.line_id, l.character_id
                ));
                continue;
            }
        }
        line_movie.insert(l.line_id.clone(), l.movie_id.clone());
        lines_by_movie
            .entry(l.movie_id.clone())
            .or_default()
            .push(l);
    }

    let mut convs_by_movie: HashMap<String, Vec<ConversationRecord>> = HashMap::new();
    for c in conversations {
        let speakers_ok = [&c.first_character_id, &c.second_character_id]
            .iter()
            .all(|id| char_movie.get(*id) == Some(&c.movie_id));
        let unresolved = c
            .utterances
            .iter()
            .find(|id| line_movie.get(*id) != Some(&c.movie_id));
        if !speakers_ok {
            diagnostics.push(format!(
                "conversation {}/{} in {} references unknown characters",
                c.first_character_id, c.second_character_id, c.movie_id
            ));
        } else if let Some(id) = unresolved {
            diagnostics.push(format!(
                "conversation in {} references unresolved line {id}",
                c.movie_id
            ));
        } else {
            convs_by_movie
                .entry(c.movie_id.clone())
                .or_default()
                .push(c);
        }
    }

    let mut crew_by_key: HashMap<(String, Option<i32>), Vec<CrewRow>> = HashMap::new();
    for row in crew {
        crew_by_key
            .entry((normalize_title(&row.movie_title), row.year))
            .or_default()
            .push(row);
    }

    let mut seen = HashSet::new();
    let mut outcome = JoinOutcome::default();
    for movie in movies {
        let id = movie.movie_id.clone();
        if !seen.insert(id.clone()) {
            outcome.exclusions.push(Exclusion {
                movie_id: id,
                reason: ExclusionReason::DuplicateMovieId,
            });
            continue;
        }
        let characters = chars_by_movie.remove(&id).unwrap_or_default();
        if characters.is_empty() {
            outcome.exclusions.push(Exclusion {
                movie_id: id,
                reason: ExclusionReason::NoCharacters,
            });
            continue;
        }
        let lines = lines_by_movie.remove(&id).unwrap_or_default();
        if lines.is_empty() {
            outcome.exclusions.push(Exclusion {
                movie_id: id,
                reason: ExclusionReason::NoDialogue,
            });
            continue;
        }
        let key = (normalize_title(&movie.title), Some(movie.release_year));
        let crew_rows = crew_by_key.get(&key);
        if crew_rows.is_none() {
            outcome.unmatched_financials.push(id.clone());
        }
        let crew_rows = crew_rows.map(Vec::as_slice).unwrap_or_default();
        let crew = crew_rows
            .iter()
            .filter(|r| !r.crew_name.is_empty())
            .map(|r| CrewRecord {
                movie_id: id.clone(),
                name: r.crew_name.clone(),
                job_title: r.job_title.clone(),
                gender: r.gender,
            })
            .collect();
        let financials = crew_rows.iter().find_map(|r| {
            let (budget, revenue) = (r.budget?, r.revenue?);
            Some(Financials {
                budget,
                revenue,
                roi: compute_roi(budget, revenue).ok(),
            })
        });
        outcome.bundles.push(MovieBundle {
            conversations: convs_by_movie.remove(&id).unwrap_or_default(),
            movie,
            characters,
            lines,
            crew,
            financials,
        });
    }
    outcome.diagnostics = diagnostics;
    outcome
}
