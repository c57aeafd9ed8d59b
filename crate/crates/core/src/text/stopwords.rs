use std::collections::HashSet;

use super::TokenList;

const ENGLISH: &str = include_str!("../../data/stopwords_en.txt");

/// A case-insensitive stop-word set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StopWords {
    words: HashSet<String>,
}

impl StopWords {
    /// One word per line; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Self {
        text.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect()
    }

    /// The bundled 127-word English list.
    pub fn english() -> Self {
        Self::parse(ENGLISH)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(&word.to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

impl<'a> FromIterator<&'a str> for StopWords {
    fn from_iter<I: IntoIterator<Item = &'a str>>(iter: I) -> Self {
        StopWords {
            words: iter.into_iter().map(str::to_lowercase).collect(),
        }
    }
}

pub fn remove_stopwords(tokens: &TokenList, stoplist: &StopWords) -> TokenList {
    tokens.retain(|w| !stoplist.words.contains(w))
}
