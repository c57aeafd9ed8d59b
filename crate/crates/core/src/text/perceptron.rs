use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{coarse_tag, CoarseTag, PosTagger, TextError};

const BUNDLED: &str = include_str!("../../data/tagger/en_perceptron.tsv");
const START: [&str; 2] = ["-START-", "-START2-"];
const END: [&str; 2] = ["-END-", "-END2-"];
const FALLBACK_TAG: &str = "NN";

/// One training sentence as `(word, tag)` pairs.
pub type TaggedSentence = Vec<(String, String)>;

/// Greedy averaged-perceptron tagger with a dictionary of unambiguous frequent words.
#[derive(Clone, Debug, Default)]
pub struct PerceptronTagger {
    classes: Vec<String>,
    weights: HashMap<String, Vec<(u16, f64)>>,
    tagdict: HashMap<String, String>,
}

fn normalize(word: &str) -> String {
    if word.contains('-') && !word.starts_with('-') {
        "!HYPHEN".into()
    } else if word.len() == 4 && word.bytes().all(|b| b.is_ascii_digit()) {
        "!YEAR".into()
    } else if word.starts_with(|c: char| c.is_ascii_digit()) {
        "!DIGITS".into()
    } else {
        word.to_lowercase()
    }
}

fn suffix(word: &str) -> &str {
    let start = word.char_indices().rev().nth(2).map_or(0, |(i, _)| i);
    &word[start..]
}

fn features(i: usize, word: &str, context: &[String], prev: &str, prev2: &str) -> Vec<String> {
    let i = i + START.len();
    let first = word.chars().next().map(String::from).unwrap_or_default();
    vec![
        "bias".to_owned(),
        format!("i suffix {}", suffix(word)),
        format!("i pref1 {first}"),
        format!("i-1 tag {prev}"),
        format!("i-2 tag {prev2}"),
        format!("i tag+i-2 tag {prev} {prev2}"),
        format!("i word {}", context[i]),
        format!("i-1 tag+i word {prev} {}", context[i]),
        format!("i-1 word {}", context[i - 1]),
        format!("i-1 suffix {}", suffix(&context[i - 1])),
        format!("i-2 word {}", context[i - 2]),
        format!("i+1 word {}", context[i + 1]),
        format!("i+1 suffix {}", suffix(&context[i + 1])),
        format!("i+2 word {}", context[i + 2]),
    ]
}

fn context_of<'a>(words: impl Iterator<Item = &'a str>) -> Vec<String> {
    START
        .iter()
        .map(|s| s.to_string())
        .chain(words.map(normalize))
        .chain(END.iter().map(|s| s.to_string()))
        .collect()
}

/// Highest score wins; equal scores go to the later class name.
fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s >= scores[best] {
            best = i;
        }
    }
    best
}

/// Splits `word/TAG word/TAG ...` lines; the tag follows the last slash.
pub fn parse_slash_tagged(line: &str) -> TaggedSentence {
    line.split_whitespace()
        .filter_map(|tok| {
            let (w, t) = tok.rsplit_once('/')?;
            (!w.is_empty() && !t.is_empty()).then(|| (w.to_owned(), t.to_owned()))
        })
        .collect()
}

#[derive(Default, Clone, Copy)]
struct Param {
    weight: f64,
    total: f64,
    stamp: u64,
}

impl PerceptronTagger {
    /// The bundled English model.
    pub fn bundled() -> &'static PerceptronTagger {
        static MODEL: OnceLock<PerceptronTagger> = OnceLock::new();
        MODEL.get_or_init(|| PerceptronTagger::parse(BUNDLED).expect("bundled tagger parses"))
    }

    /// Parses `w<TAB>feature<TAB>TAG<TAB>weight` and `tag<TAB>word<TAB>TAG` lines.
    pub fn parse(text: &str) -> Result<Self, TextError> {
        let mut classes: BTreeMap<String, ()> = BTreeMap::new();
        let mut raw: Vec<(String, String, f64)> = Vec::new();
        let mut tagdict = HashMap::new();
        for (n, line) in text.lines().enumerate() {
            let bad = |message: &str| TextError::Format {
                line: n + 1,
                message: message.to_owned(),
            };
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            match fields.as_slice() {
                ["w", feature, class, weight] => {
                    let w: f64 = weight.parse().map_err(|_| bad("bad weight"))?;
                    classes.insert(class.to_string(), ());
                    raw.push((feature.to_string(), class.to_string(), w));
                }
                ["tag", word, tag] => {
                    tagdict.insert(word.to_string(), tag.to_string());
                }
                _ => return Err(bad("expected a `w` or `tag` record")),
            }
        }
        let classes: Vec<String> = classes.into_keys().collect();
        let mut weights: HashMap<String, Vec<(u16, f64)>> = HashMap::new();
        for (feature, class, w) in raw {
            let c = classes.binary_search(&class).expect("class collected") as u16;
            weights.entry(feature).or_default().push((c, w));
        }
        Ok(PerceptronTagger {
            classes,
            weights,
            tagdict,
        })
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("# averaged perceptron POS tagger\n");
        let mut feats: Vec<_> = self.weights.iter().collect();
        feats.sort_by(|a, b| a.0.cmp(b.0));
        for (feature, ws) in feats {
            let mut ws = ws.clone();
            ws.sort_by_key(|&(c, _)| c);
            for (c, w) in ws {
                writeln!(out, "w\t{feature}\t{}\t{w}", self.classes[c as usize]).unwrap();
            }
        }
        let mut dict: Vec<_> = self.tagdict.iter().collect();
        dict.sort();
        for (word, tag) in dict {
            writeln!(out, "tag\t{word}\t{tag}").unwrap();
        }
        out
    }

    /// Drops weights whose magnitude is below `min_abs`.
    pub fn prune(&mut self, min_abs: f64) {
        for ws in self.weights.values_mut() {
            ws.retain(|(_, w)| w.abs() >= min_abs);
        }
        self.weights.retain(|_, ws| !ws.is_empty());
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    fn predict(&self, feats: &[String]) -> usize {
        let mut scores = vec![0.0; self.classes.len()];
        for f in feats {
            if let Some(ws) = self.weights.get(f) {
                for &(c, w) in ws {
                    scores[c as usize] += w;
                }
            }
        }
        argmax(&scores)
    }

    /// Trains for `iterations` passes, shuffling sentences with `seed` between passes.
    pub fn train(sentences: &[TaggedSentence], iterations: usize, seed: u64) -> Self {
        let mut counts: HashMap<&str, BTreeMap<&str, usize>> = HashMap::new();
        let mut class_set = BTreeMap::new();
        for s in sentences {
            for (w, t) in s {
                *counts.entry(w).or_default().entry(t).or_default() += 1;
                class_set.insert(t.clone(), ());
            }
        }
        let classes: Vec<String> = class_set.into_keys().collect();
        let mut tagdict = HashMap::new();
        for (word, tags) in &counts {
            let n: usize = tags.values().sum();
            let (tag, mode) = tags
                .iter()
                .max_by_key(|&(t, c)| (*c, std::cmp::Reverse(*t)))
                .unwrap();
            if n >= 20 && *mode as f64 / n as f64 >= 0.97 {
                tagdict.insert(word.to_string(), tag.to_string());
            }
        }

        let mut tagger = PerceptronTagger {
            classes,
            weights: HashMap::new(),
            tagdict,
        };
        let mut params: HashMap<(String, u16), Param> = HashMap::new();
        let mut step: u64 = 0;
        let mut order: Vec<usize> = (0..sentences.len()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..iterations {
            for &si in &order {
                let sentence = &sentences[si];
                let context = context_of(sentence.iter().map(|(w, _)| w.as_str()));
                let (mut prev, mut prev2) = (START[0].to_owned(), START[1].to_owned());
                for (i, (word, truth)) in sentence.iter().enumerate() {
                    let guess = match tagger.tagdict.get(word) {
                        Some(t) => t.clone(),
                        None => {
                            let feats = features(i, word, &context, &prev, &prev2);
                            let guess = tagger.predict(&feats);
                            step += 1;
                            let truth_c = tagger.classes.binary_search(truth).unwrap() as u16;
                            if truth_c as usize != guess {
                                for f in feats {
                                    for (c, delta) in [(truth_c, 1.0), (guess as u16, -1.0)] {
                                        let p = params.entry((f.clone(), c)).or_default();
                                        p.total += (step - p.stamp) as f64 * p.weight;
                                        p.stamp = step;
                                        p.weight += delta;
                                        let ws = tagger.weights.entry(f.clone()).or_default();
                                        match ws.iter_mut().find(|(k, _)| *k == c) {
                                            Some(slot) => slot.1 = p.weight,
                                            None => ws.push((c, p.weight)),
                                        }
                                    }
                                }
                            }
                            tagger.classes[guess].clone()
                        }
                    };
                    prev2 = std::mem::replace(&mut prev, guess);
                }
            }
            order.shuffle(&mut rng);
        }

        let mut averaged: HashMap<String, Vec<(u16, f64)>> = HashMap::new();
        for ((f, c), p) in params {
            let total = p.total + (step - p.stamp) as f64 * p.weight;
            let w = (total / step.max(1) as f64 * 1000.0).round() / 1000.0;
            if w != 0.0 {
                averaged.entry(f).or_default().push((c, w));
            }
        }
        for ws in averaged.values_mut() {
            ws.sort_by_key(|&(c, _)| c);
        }
        tagger.weights = averaged;
        tagger
    }

    /// Fraction of tokens tagged exactly as in `sentences`.
    pub fn accuracy(&self, sentences: &[TaggedSentence]) -> f64 {
        let (mut hits, mut total) = (0usize, 0usize);
        for s in sentences {
            let words: Vec<&str> = s.iter().map(|(w, _)| w.as_str()).collect();
            for (guess, (_, truth)) in self.tag_pieces(&words).iter().zip(s) {
                hits += usize::from(guess == truth);
                total += 1;
            }
        }
        hits as f64 / total.max(1) as f64
    }
}

/// Splits a clitic off the way treebank tokenization does: `don't` becomes
/// `do` + `n't`, `you're` becomes `you` + `'re`.
fn split_clitic(word: &str) -> (&str, Option<&str>) {
    let lower = word.to_lowercase();
    if lower.len() != word.len() {
        return (word, None);
    }
    let cut = if lower.ends_with("n't") {
        3
    } else if ["'re", "'ve", "'ll"].iter().any(|s| lower.ends_with(s)) {
        3
    } else if ["'s", "'d", "'m"].iter().any(|s| lower.ends_with(s)) {
        2
    } else {
        0
    };
    if cut == 0 || word.len() <= cut {
        return (word, None);
    }
    let (head, tail) = word.split_at(word.len() - cut);
    (head, Some(tail))
}

impl PerceptronTagger {
    fn tag_pieces(&self, words: &[&str]) -> Vec<String> {
        let context = context_of(words.iter().copied());
        let (mut prev, mut prev2) = (START[0].to_owned(), START[1].to_owned());
        let mut out = Vec::with_capacity(words.len());
        for (i, word) in words.iter().enumerate() {
            let tag = match self.tagdict.get(*word) {
                Some(t) => t.clone(),
                None if self.classes.is_empty() => FALLBACK_TAG.to_owned(),
                None => {
                    self.classes[self.predict(&features(i, word, &context, &prev, &prev2))].clone()
                }
            };
            prev2 = std::mem::replace(&mut prev, tag.clone());
            out.push(tag);
        }
        out
    }
}

impl PosTagger for PerceptronTagger {
    /// Contractions are tagged as two pieces; the token takes the first noun,
    /// verb or adjective tag among them, else the first piece's tag.
    fn tag(&self, tokens: &[String]) -> Vec<String> {
        let mut pieces = Vec::with_capacity(tokens.len());
        let mut owner = Vec::with_capacity(tokens.len());
        for (i, token) in tokens.iter().enumerate() {
            let (head, tail) = split_clitic(token);
            pieces.push(head);
            owner.push(i);
            if let Some(tail) = tail {
                pieces.push(tail);
                owner.push(i);
            }
        }
        let tags = self.tag_pieces(&pieces);
        let mut out: Vec<Option<String>> = vec![None; tokens.len()];
        for (tag, &i) in tags.into_iter().zip(&owner) {
            let slot = &mut out[i];
            let content = |t: &str| coarse_tag(t) != CoarseTag::Other;
            if slot.as_deref().is_none_or(|t| !content(t) && content(&tag)) {
                *slot = Some(tag);
            }
        }
        out.into_iter()
            .map(|t| t.expect("every token has a piece"))
            .collect()
    }
}
