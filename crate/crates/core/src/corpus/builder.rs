use super::{
    compute_roi, CharacterRecord, ConversationRecord, CrewRecord, DialogueLine, Financials, Gender,
    GenderSource, MovieBundle, MovieRecord,
};

/// Assembles a [`MovieBundle`] by hand, for fixtures and examples.
#[derive(Clone, Debug)]
pub struct BundleBuilder {
    bundle: MovieBundle,
}

impl BundleBuilder {
    pub fn new(movie_id: &str, title: &str, year: i32) -> Self {
        BundleBuilder {
            bundle: MovieBundle {
                movie: MovieRecord {
                    movie_id: movie_id.to_owned(),
                    title: title.to_owned(),
                    release_year: year,
                    imdb_rating: 0.0,
                    vote_count: 0,
                    genres: Vec::new(),
                },
                characters: Vec::new(),
                lines: Vec::new(),
                conversations: Vec::new(),
                crew: Vec::new(),
                financials: None,
            },
        }
    }

    pub fn genres(mut self, genres: &[&str]) -> Self {
        self.bundle.movie.genres = genres.iter().map(|g| g.to_lowercase()).collect();
        self
    }

    pub fn character(mut self, id: &str, name: &str, gender: Gender) -> Self {
        self.bundle.characters.push(CharacterRecord {
            character_id: id.to_owned(),
            name: name.to_owned(),
            movie_id: self.bundle.movie.movie_id.clone(),
            gender,
            gender_source: (gender != Gender::Unknown).then_some(GenderSource::Corpus),
        });
        self
    }

    pub fn line(mut self, line_id: &str, character_id: &str, text: &str) -> Self {
        self.bundle.lines.push(DialogueLine {
            line_id: line_id.to_owned(),
            character_id: character_id.to_owned(),
            movie_id: self.bundle.movie.movie_id.clone(),
            text: text.to_owned(),
        });
        self
    }

    pub fn conversation(mut self, first: &str, second: &str, line_ids: &[&str]) -> Self {
        self.bundle.conversations.push(ConversationRecord {
            movie_id: self.bundle.movie.movie_id.clone(),
            first_character_id: first.to_owned(),
            second_character_id: second.to_owned(),
            utterances: line_ids.iter().map(|s| s.to_string()).collect(),
        });
        self
    }

    pub fn crew(mut self, name: &str, job_title: &str, gender: Gender) -> Self {
        self.bundle.crew.push(CrewRecord {
            movie_id: self.bundle.movie.movie_id.clone(),
            name: name.to_owned(),
            job_title: job_title.to_owned(),
            gender,
        });
        self
    }

    pub fn financials(mut self, budget: f64, revenue: f64) -> Self {
        self.bundle.financials = Some(Financials {
            budget,
            revenue,
            roi: compute_roi(budget, revenue).ok(),
        });
        self
    }

    pub fn build(self) -> MovieBundle {
        self.bundle
    }
}
