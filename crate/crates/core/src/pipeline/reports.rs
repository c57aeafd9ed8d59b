//! CSV renderings of every pipeline table. Numbers use six fixed decimals;
//! a missing value is `NA`.

use super::MovieAnalysis;
use crate::corpus::{Exclusion, Gender, MovieBundle};
use crate::features::{
    BechdelResult, FeatureExclusion, FeatureMatrix, MovieFeatureVector, YearRatios, COLUMN_NAMES,
};
use crate::fmt::{csv_string, fixed6, fixed6_opt};

fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|s| s.to_string()).collect()
}

fn table(cols: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    csv_string(std::iter::once(header(cols)).chain(rows))
}

pub fn exclusions_csv(exclusions: &[Exclusion]) -> String {
    table(
        &["movie_id", "reason"],
        exclusions
            .iter()
            .map(|e| vec![e.movie_id.clone(), e.reason.to_string()]),
    )
}

pub fn unmatched_financials_csv(bundles: &[MovieBundle], unmatched: &[String]) -> String {
    let rows = bundles
        .iter()
        .filter(|b| unmatched.contains(&b.movie.movie_id))
        .map(|b| {
            vec![
                b.movie.movie_id.clone(),
                b.movie.title.clone(),
                b.movie.release_year.to_string(),
            ]
        });
    table(&["movie_id", "title", "year"], rows)
}

/// `(source, line, message)`; a line of 0 means the problem is not tied to one line.
pub fn diagnostics_csv(diagnostics: &[(String, usize, String)]) -> String {
    let rows = diagnostics.iter().map(|(src, line, msg)| {
        let line = if *line == 0 {
            String::new()
        } else {
            line.to_string()
        };
        vec![src.clone(), line, msg.clone()]
    });
    table(&["source", "line", "message"], rows)
}

pub fn features_csv(vectors: &[MovieFeatureVector]) -> String {
    let mut cols: Vec<&str> = vec!["movie_id"];
    cols.extend(COLUMN_NAMES);
    if let Some(v) = vectors.first() {
        cols.extend(v.extras.iter().map(|(n, _)| n.as_str()));
    }
    let rows = vectors.iter().map(|v| {
        let mut row = vec![v.movie_id.clone()];
        row.extend(v.values().into_iter().map(fixed6_opt));
        row.extend(v.extras.iter().map(|(_, x)| fixed6_opt(*x)));
        row
    });
    table(&cols, rows)
}

pub fn feature_exclusions_csv(exclusions: &[FeatureExclusion]) -> String {
    table(
        &["movie_id", "missing"],
        exclusions
            .iter()
            .map(|e| vec![e.movie_id.clone(), e.missing.join(";")]),
    )
}

/// Reads a feature table back; rows with any `NA` become exclusions.
pub fn read_features_csv(text: &str) -> Result<(FeatureMatrix, Vec<FeatureExclusion>), String> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| e.to_string())?.clone();
    if headers.get(0) != Some("movie_id") || headers.len() < 2 {
        return Err("feature table must start with a movie_id column".into());
    }
    let columns: Vec<String> = headers.iter().skip(1).map(str::to_owned).collect();
    let mut matrix = FeatureMatrix {
        movie_ids: Vec::new(),
        columns: columns.clone(),
        rows: Vec::new(),
    };
    let mut exclusions = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| e.to_string())?;
        let id = record.get(0).unwrap_or("").to_owned();
        let mut row = Vec::with_capacity(columns.len());
        let mut missing = Vec::new();
        for (j, name) in columns.iter().enumerate() {
            let cell = record.get(j + 1).unwrap_or("NA").trim();
            if cell == "NA" {
                missing.push(name.clone());
                continue;
            }
            let v: f64 = cell
                .parse()
                .map_err(|_| format!("row {}: column {name} holds {cell:?}", i + 2))?;
            row.push(v);
        }
        if missing.is_empty() {
            matrix.movie_ids.push(id);
            matrix.rows.push(row);
        } else {
            exclusions.push(FeatureExclusion {
                movie_id: id,
                missing,
            });
        }
    }
    Ok((matrix, exclusions))
}

pub fn bechdel_csv(bundles: &[MovieBundle], analyses: &[MovieAnalysis]) -> String {
    let results: Vec<BechdelResult> = analyses.iter().map(|a| a.bechdel.clone()).collect();
    bechdel_csv_from(bundles, &results)
}

pub fn bechdel_csv_from(bundles: &[MovieBundle], results: &[BechdelResult]) -> String {
    let rows = bundles.iter().zip(results).map(|(b, r)| {
        vec![
            b.movie.movie_id.clone(),
            b.movie.title.clone(),
            r.has_two_named_females.to_string(),
            r.has_female_conversation.to_string(),
            r.has_non_male_topic.to_string(),
            r.passes.to_string(),
            r.witness.as_ref().map(|w| w.join(";")).unwrap_or_default(),
        ]
    });
    table(
        &[
            "movie_id",
            "title",
            "two_named_females",
            "female_conversation",
            "non_male_topic",
            "passes",
            "witness_lines",
        ],
        rows,
    )
}

/// One row per movie, gender and scored genre.
pub fn genre_scores_csv(bundles: &[MovieBundle], analyses: &[MovieAnalysis]) -> String {
    let mut rows = Vec::new();
    for (b, a) in bundles.iter().zip(analyses) {
        let Some(g) = &a.genre_scores else { continue };
        for (gender, side) in [(Gender::Female, &g.female), (Gender::Male, &g.male)] {
            let Some(side) = side else { continue };
            for (rank, (genre, score)) in g.genres.iter().zip(&side.per_genre).enumerate() {
                rows.push(vec![
                    b.movie.movie_id.clone(),
                    gender.as_str().to_owned(),
                    (rank + 1).to_string(),
                    genre.clone(),
                    side.lines.to_string(),
                    fixed6(*score),
                    fixed6(side.score),
                ]);
            }
        }
    }
    table(
        &[
            "movie_id",
            "gender",
            "genre_rank",
            "genre",
            "lines",
            "genre_score",
            "overall_score",
        ],
        rows,
    )
}

pub fn cast_crew_ratios_csv(years: &[YearRatios]) -> String {
    let rows = years.iter().map(|y| {
        vec![
            y.year.to_string(),
            y.movies.to_string(),
            y.cast.male.to_string(),
            y.cast.female.to_string(),
            fixed6_opt(y.cast.ratio()),
            y.crew.male.to_string(),
            y.crew.female.to_string(),
            fixed6_opt(y.crew.ratio()),
        ]
    });
    table(
        &[
            "year",
            "movies",
            "cast_male",
            "cast_female",
            "cast_male_per_female",
            "crew_male",
            "crew_female",
            "crew_male_per_female",
        ],
        rows,
    )
}

pub fn dialogue_pos_ratios_csv(years: &[YearRatios]) -> String {
    let rows = years.iter().map(|y| {
        vec![
            y.year.to_string(),
            y.movies.to_string(),
            y.dialogue.male.to_string(),
            y.dialogue.female.to_string(),
            fixed6_opt(y.dialogue.ratio()),
            y.pos.male.to_string(),
            y.pos.female.to_string(),
            fixed6_opt(y.pos.ratio()),
        ]
    });
    table(
        &[
            "year",
            "movies",
            "dialogue_male",
            "dialogue_female",
            "dialogue_male_per_female",
            "pos_male",
            "pos_female",
            "pos_male_per_female",
        ],
        rows,
    )
}

pub fn financials_csv(bundles: &[MovieBundle]) -> String {
    let rows = bundles.iter().map(|b| {
        let f = b.financials.as_ref();
        vec![
            b.movie.movie_id.clone(),
            b.movie.title.clone(),
            b.movie.release_year.to_string(),
            fixed6_opt(f.map(|f| f.budget)),
            fixed6_opt(f.map(|f| f.revenue)),
            fixed6_opt(f.and_then(|f| f.roi)),
        ]
    });
    table(
        &[
            "movie_id",
            "title",
            "year",
            "budget",
            "revenue",
            "roi_percent",
        ],
        rows,
    )
}

pub fn characters_csv(bundles: &[MovieBundle]) -> String {
    let rows = bundles.iter().flat_map(|b| {
        b.characters.iter().map(|c| {
            let source = match c.gender_source {
                Some(crate::corpus::GenderSource::Corpus) => "corpus",
                Some(crate::corpus::GenderSource::Inferred) => "inferred",
                None => "",
            };
            vec![
                c.movie_id.clone(),
                c.character_id.clone(),
                c.name.clone(),
                c.gender.as_str().to_owned(),
                source.to_owned(),
            ]
        })
    });
    table(
        &[
            "movie_id",
            "character_id",
            "name",
            "gender",
            "gender_source",
        ],
        rows,
    )
}

pub fn line_sentiment_csv(bundles: &[MovieBundle], analyses: &[MovieAnalysis]) -> String {
    let mut rows = Vec::new();
    for (b, a) in bundles.iter().zip(analyses) {
        for ((line, gender), la) in b.lines.iter().zip(b.speaker_genders()).zip(&a.lines) {
            rows.push(vec![
                b.movie.movie_id.clone(),
                line.line_id.clone(),
                line.character_id.clone(),
                gender.as_str().to_owned(),
                fixed6(la.sentiment.raw_sum),
                fixed6(la.sentiment.normalized),
            ]);
        }
    }
    table(
        &[
            "movie_id",
            "line_id",
            "character_id",
            "gender",
            "raw_sum",
            "normalized",
        ],
        rows,
    )
}

pub fn line_pos_csv(bundles: &[MovieBundle], analyses: &[MovieAnalysis]) -> String {
    let mut rows = Vec::new();
    for (b, a) in bundles.iter().zip(analyses) {
        for ((line, gender), la) in b.lines.iter().zip(b.speaker_genders()).zip(&a.lines) {
            let p = la.pos;
            rows.push(vec![
                b.movie.movie_id.clone(),
                line.line_id.clone(),
                line.character_id.clone(),
                gender.as_str().to_owned(),
                p.nouns.to_string(),
                p.verbs.to_string(),
                p.adjectives.to_string(),
                p.other.to_string(),
            ]);
        }
    }
    table(
        &[
            "movie_id",
            "line_id",
            "character_id",
            "gender",
            "nouns",
            "verbs",
            "adjectives",
            "other",
        ],
        rows,
    )
}
