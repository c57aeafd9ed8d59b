use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::corpus::{Gender, MovieBundle};
use crate::text::tokenize;

const MALE_REFERENCE: &str = include_str!("../../data/male_reference.txt");
const NAMED_BLOCKLIST: &str = include_str!("../../data/named_blocklist.txt");

/// A case-insensitive word list read from one-word-per-line text.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WordList {
    words: HashSet<String>,
}

impl WordList {
    pub fn parse(text: &str) -> Self {
        WordList {
            words: text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_lowercase)
                .collect(),
        }
    }

    /// Pronouns and relations that refer to a man.
    pub fn male_reference() -> Self {
        Self::parse(MALE_REFERENCE)
    }

    /// Generic role names that do not count as a character name.
    pub fn named_blocklist() -> Self {
        Self::parse(NAMED_BLOCKLIST)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(&word.to_lowercase())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BechdelResult {
    pub has_two_named_females: bool,
    pub has_female_conversation: bool,
    pub has_non_male_topic: bool,
    pub passes: bool,
    /// Line ids of the first qualifying conversation.
    pub witness: Option<Vec<String>>,
}

impl BechdelResult {
    pub fn flags(&self) -> (bool, bool, bool) {
        (
            self.has_two_named_females,
            self.has_female_conversation,
            self.has_non_male_topic,
        )
    }
}

fn is_named(name: &str, blocklist: &WordList) -> bool {
    let name = name.trim();
    !name.is_empty() && !blocklist.contains(name)
}

/// Scores the three criteria. A conversation is about something other than a
/// man when none of its lines mentions a male-reference word or the first name
/// of one of the movie's male characters.
pub fn bechdel_score(
    bundle: &MovieBundle,
    male_reference: &WordList,
    blocklist: &WordList,
) -> BechdelResult {
    let genders = bundle.character_genders();
    let named_females = bundle
        .characters
        .iter()
        .filter(|c| c.gender == Gender::Female && is_named(&c.name, blocklist))
        .count();

    let mut male_words: HashSet<String> = male_reference.words.clone();
    for c in bundle
        .characters
        .iter()
        .filter(|c| c.gender == Gender::Male)
    {
        if let Some(first) = tokenize(&c.name).lower().first() {
            male_words.insert(first.clone());
        }
    }

    let lines = bundle.line_index();
    let female = |id: &str| genders.get(id) == Some(&Gender::Female);
    let mut has_female_conversation = false;
    let mut witness = None;
    for conv in &bundle.conversations {
        let pair = (&conv.first_character_id, &conv.second_character_id);
        if pair.0 == pair.1 || !(female(pair.0) && female(pair.1)) {
            continue;
        }
        has_female_conversation = true;
        let mentions_man = conv.utterances.iter().any(|id| {
            lines.get(id.as_str()).is_some_and(|l| {
                tokenize(&l.text)
                    .lower()
                    .iter()
                    .any(|w| male_words.contains(w))
            })
        });
        if !mentions_man {
            witness = Some(conv.utterances.clone());
            break;
        }
    }

    let has_two_named_females = named_females >= 2;
    let has_non_male_topic = witness.is_some();
    let passes = has_two_named_females && has_female_conversation && has_non_male_topic;
    BechdelResult {
        has_two_named_females,
        has_female_conversation,
        has_non_male_topic,
        passes,
        witness: if passes { witness } else { None },
    }
}
