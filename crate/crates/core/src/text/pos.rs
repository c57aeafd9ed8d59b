use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::TokenList;

/// Anything that assigns one fine-grained (Penn-style) tag per token.
pub trait PosTagger: Send + Sync {
    /// Returns exactly `tokens.len()` tags.
    fn tag(&self, tokens: &[String]) -> Vec<String>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CoarseTag {
    Noun,
    Verb,
    Adj,
    Other,
}

impl CoarseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CoarseTag::Noun => "NOUN",
            CoarseTag::Verb => "VERB",
            CoarseTag::Adj => "ADJ",
            CoarseTag::Other => "OTHER",
        }
    }
}

/// `NN*` nouns, `VB*` verbs, `JJ*` adjectives, everything else other.
pub fn coarse_tag(fine: &str) -> CoarseTag {
    if fine.starts_with("NN") {
        CoarseTag::Noun
    } else if fine.starts_with("VB") {
        CoarseTag::Verb
    } else if fine.starts_with("JJ") {
        CoarseTag::Adj
    } else {
        CoarseTag::Other
    }
}

/// Tags the original-case tokens and pairs each lowercase token with its coarse tag.
pub fn pos_tag(tokens: &TokenList, tagger: &dyn PosTagger) -> Vec<(String, CoarseTag)> {
    if tokens.is_empty() {
        return Vec::new();
    }
    let fine = tagger.tag(tokens.original());
    assert_eq!(
        fine.len(),
        tokens.len(),
        "tagger must return one tag per token"
    );
    tokens
        .lower()
        .iter()
        .cloned()
        .zip(fine.iter().map(|t| coarse_tag(t)))
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosCounts {
    pub nouns: u64,
    pub verbs: u64,
    pub adjectives: u64,
    pub other: u64,
}

impl PosCounts {
    pub fn total(&self) -> u64 {
        self.nouns + self.verbs + self.adjectives + self.other
    }

    /// Nouns, verbs and adjectives together.
    pub fn content(&self) -> u64 {
        self.nouns + self.verbs + self.adjectives
    }
}

impl std::ops::AddAssign for PosCounts {
    fn add_assign(&mut self, rhs: PosCounts) {
        self.nouns += rhs.nouns;
        self.verbs += rhs.verbs;
        self.adjectives += rhs.adjectives;
        self.other += rhs.other;
    }
}

pub fn count_pos<S>(tagged: &[(S, CoarseTag)]) -> PosCounts {
    let mut c = PosCounts::default();
    for (_, tag) in tagged {
        match tag {
            CoarseTag::Noun => c.nouns += 1,
            CoarseTag::Verb => c.verbs += 1,
            CoarseTag::Adj => c.adjectives += 1,
            CoarseTag::Other => c.other += 1,
        }
    }
    c
}

/// Looks every word up in a fixed dictionary, falling back to one default tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexiconTagger {
    tags: HashMap<String, String>,
    fallback: String,
}

impl LexiconTagger {
    pub fn new(fallback: impl Into<String>) -> Self {
        LexiconTagger {
            tags: HashMap::new(),
            fallback: fallback.into(),
        }
    }

    pub fn with(mut self, word: &str, tag: &str) -> Self {
        self.tags.insert(word.to_lowercase(), tag.to_owned());
        self
    }
}

impl<T: PosTagger + ?Sized> PosTagger for &T {
    fn tag(&self, tokens: &[String]) -> Vec<String> {
        (**self).tag(tokens)
    }
}

impl PosTagger for LexiconTagger {
    fn tag(&self, tokens: &[String]) -> Vec<String> {
        tokens
            .iter()
            .map(|t| {
                self.tags
                    .get(&t.to_lowercase())
                    .unwrap_or(&self.fallback)
                    .clone()
            })
            .collect()
    }
}
