use serde::{Deserialize, Serialize};

/// Tokens of one text in two parallel forms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenList {
    lower: Vec<String>,
    original: Vec<String>,
}

impl TokenList {
    pub fn lower(&self) -> &[String] {
        &self.lower
    }

    /// The tokens as written, for case-sensitive heuristics.
    pub fn original(&self) -> &[String] {
        &self.original
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.lower
            .iter()
            .map(String::as_str)
            .zip(self.original.iter().map(String::as_str))
    }

    /// Keeps the tokens whose lowercase form satisfies `keep`.
    pub fn retain(&self, mut keep: impl FnMut(&str) -> bool) -> TokenList {
        let mut out = TokenList::default();
        for (lower, original) in self.iter() {
            if keep(lower) {
                out.lower.push(lower.to_owned());
                out.original.push(original.to_owned());
            }
        }
        out
    }
}

impl FromIterator<String> for TokenList {
    fn from_iter<I: IntoIterator<Item = String>>(iter: I) -> Self {
        let mut out = TokenList::default();
        for token in iter {
            out.lower.push(token.to_lowercase());
            out.original.push(token);
        }
        out
    }
}

/// Splits on every run of characters that are not letters, digits or apostrophes.
/// Curly apostrophes count as straight ones; apostrophes at token edges are dropped.
pub fn tokenize(text: &str) -> TokenList {
    text.replace('\u{2019}', "'")
        .split(|c: char| !(c.is_alphanumeric() || c == '\''))
        .map(|t| t.trim_matches('\''))
        .filter(|t| !t.is_empty())
        .map(str::to_owned)
        .collect()
}
