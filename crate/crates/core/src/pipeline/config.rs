use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::corpus::{Encoding, DEFAULT_DELIMITER};
use crate::embedding::{GenreLimit, VectorFormat};
use crate::gender::TrainOptions;
use crate::mva::{PcaOptions, RetentionRule, DEFAULT_TOLERANCE};
use crate::text::SentimentConfig;

/// Environment variable naming a default config file.
pub const CONFIG_ENV: &str = "FEMREP_CONFIG";

/// What a key holds, for command-line parsing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KeyKind {
    Path,
    Text,
    Integer,
    Number,
    Flag,
    List,
}

/// Every configuration key with its kind and a one-line description.
pub const CONFIG_KEYS: &[(&str, KeyKind, &str)] = &[
    ("movies", KeyKind::Path, "movie metadata file"),
    ("characters", KeyKind::Path, "character metadata file"),
    ("lines", KeyKind::Path, "dialogue lines file"),
    ("conversations", KeyKind::Path, "conversations file"),
    ("crew", KeyKind::Path, "crew and financials CSV (optional)"),
    (
        "names",
        KeyKind::Path,
        "name,gender CSV for the gender model (default: bundled)",
    ),
    ("vectors", KeyKind::Path, "word-vector file"),
    ("vector-format", KeyKind::Text, "text or binary"),
    (
        "lexicon",
        KeyKind::Path,
        "sentiment lexicon, word<TAB>valence (default: bundled)",
    ),
    (
        "stopwords",
        KeyKind::Path,
        "stop-word list (default: bundled)",
    ),
    (
        "tagger",
        KeyKind::Path,
        "part-of-speech tagger weights (default: bundled)",
    ),
    (
        "male-reference",
        KeyKind::Path,
        "male-reference word list (default: bundled)",
    ),
    (
        "named-blocklist",
        KeyKind::Path,
        "generic role names (default: bundled)",
    ),
    ("output", KeyKind::Path, "output directory"),
    ("delimiter", KeyKind::Text, "corpus field delimiter"),
    ("encoding", KeyKind::Text, "utf8-lossy or latin1"),
    (
        "train-fraction",
        KeyKind::Number,
        "share of names used for training",
    ),
    ("seed", KeyKind::Integer, "split seed"),
    ("max-depth", KeyKind::Integer, "decision-tree depth limit"),
    (
        "min-leaf",
        KeyKind::Integer,
        "decision-tree minimum leaf size",
    ),
    (
        "confidence-floor",
        KeyKind::Number,
        "minimum leaf confidence for an inferred gender",
    ),
    (
        "sentiment-alpha",
        KeyKind::Number,
        "sentiment squashing constant",
    ),
    ("caps-boost", KeyKind::Number, "all-caps valence boost"),
    (
        "exclamation-boost",
        KeyKind::Number,
        "per-exclamation-mark boost",
    ),
    (
        "max-exclamations",
        KeyKind::Integer,
        "exclamation marks counted at most",
    ),
    (
        "genre-limit",
        KeyKind::Text,
        "number of genres scored, or all",
    ),
    (
        "retention",
        KeyKind::Text,
        "kaiser, cumulative:<fraction> or fixed:<k>",
    ),
    (
        "label-threshold",
        KeyKind::Number,
        "minimum |loading| naming a component",
    ),
    (
        "extra-columns",
        KeyKind::List,
        "extra PCA columns: roi, budget, revenue, imdb-rating, vote-count, release-year",
    ),
    (
        "workers",
        KeyKind::Integer,
        "analysis threads (0: one per core)",
    ),
    (
        "emit-intermediate",
        KeyKind::Flag,
        "also write per-line sentiment and POS tables",
    ),
];

/// One run's settings, read from a flat TOML file and command-line overrides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default, deny_unknown_fields)]
pub struct RunConfig {
    pub movies: Option<PathBuf>,
    pub characters: Option<PathBuf>,
    pub lines: Option<PathBuf>,
    pub conversations: Option<PathBuf>,
    pub crew: Option<PathBuf>,
    pub names: Option<PathBuf>,
    pub vectors: Option<PathBuf>,
    pub vector_format: String,
    pub lexicon: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub tagger: Option<PathBuf>,
    pub male_reference: Option<PathBuf>,
    pub named_blocklist: Option<PathBuf>,
    pub output: PathBuf,
    pub delimiter: String,
    pub encoding: String,
    pub train_fraction: f64,
    pub seed: u64,
    pub max_depth: usize,
    pub min_leaf: usize,
    pub confidence_floor: f64,
    pub sentiment_alpha: f64,
    pub caps_boost: f64,
    pub exclamation_boost: f64,
    pub max_exclamations: usize,
    pub genre_limit: String,
    pub retention: String,
    pub label_threshold: f64,
    pub extra_columns: Vec<String>,
    pub workers: usize,
    pub emit_intermediate: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let train = TrainOptions::default();
        let sentiment = SentimentConfig::default();
        RunConfig {
            movies: None,
            characters: None,
            lines: None,
            conversations: None,
            crew: None,
            names: None,
            vectors: None,
            vector_format: "text".into(),
            lexicon: None,
            stopwords: None,
            tagger: None,
            male_reference: None,
            named_blocklist: None,
            output: PathBuf::from("femrep-out"),
            delimiter: DEFAULT_DELIMITER.into(),
            encoding: "utf8-lossy".into(),
            train_fraction: train.train_fraction,
            seed: train.seed,
            max_depth: train.max_depth,
            min_leaf: train.min_leaf,
            confidence_floor: 0.0,
            sentiment_alpha: sentiment.alpha,
            caps_boost: sentiment.caps_boost,
            exclamation_boost: sentiment.exclamation_boost,
            max_exclamations: sentiment.max_exclamations,
            genre_limit: "3".into(),
            retention: "kaiser".into(),
            label_threshold: PcaOptions::default().label_threshold,
            extra_columns: Vec::new(),
            workers: 0,
            emit_intermediate: false,
        }
    }
}

fn config_error(msg: impl Into<String>) -> PipelineError {
    PipelineError::Config(msg.into())
}

impl RunConfig {
    /// Parses TOML text; relative paths are resolved against `base`.
    pub fn from_toml(text: &str, base: &Path) -> Result<Self, PipelineError> {
        let mut cfg: RunConfig = toml::from_str(text).map_err(|e| config_error(e.to_string()))?;
        cfg.for_each_path(|p| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        });
        Ok(cfg)
    }

    /// Reads `path`, else the file named by [`CONFIG_ENV`], else the defaults.
    pub fn load(path: Option<&Path>) -> Result<Self, PipelineError> {
        let env_path = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
        let Some(path) = path.map(Path::to_path_buf).or(env_path) else {
            return Ok(RunConfig::default());
        };
        let text = std::fs::read_to_string(&path).map_err(|e| PipelineError::input(&path, e))?;
        let base = path.parent().unwrap_or(Path::new(""));
        RunConfig::from_toml(&text, base)
    }

    fn for_each_path(&mut self, mut f: impl FnMut(&mut PathBuf)) {
        for p in [
            &mut self.movies,
            &mut self.characters,
            &mut self.lines,
            &mut self.conversations,
            &mut self.crew,
            &mut self.names,
            &mut self.vectors,
            &mut self.lexicon,
            &mut self.stopwords,
            &mut self.tagger,
            &mut self.male_reference,
            &mut self.named_blocklist,
        ]
        .into_iter()
        .flatten()
        {
            f(p);
        }
        f(&mut self.output);
    }

    /// Sets one key from its command-line spelling; the value is read
    /// according to the key's kind. Flags accept `true`/`false`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), PipelineError> {
        let (_, kind, _) = CONFIG_KEYS
            .iter()
            .find(|(k, _, _)| *k == key)
            .ok_or_else(|| config_error(format!("unknown key {key:?}")))?;
        let bad = || config_error(format!("{key}: cannot read {value:?}"));
        let item = match kind {
            KeyKind::Path | KeyKind::Text => toml::Value::String(value.to_owned()),
            KeyKind::Integer => toml::Value::Integer(value.trim().parse().map_err(|_| bad())?),
            KeyKind::Number => toml::Value::Float(value.trim().parse().map_err(|_| bad())?),
            KeyKind::Flag => toml::Value::Boolean(value.trim().parse().map_err(|_| bad())?),
            KeyKind::List => toml::Value::Array(
                value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| toml::Value::String(s.to_owned()))
                    .collect(),
            ),
        };
        let mut table = toml::Table::try_from(&*self).map_err(|e| config_error(e.to_string()))?;
        table.insert(key.to_owned(), item);
        *self = table
            .try_into()
            .map_err(|e: toml::de::Error| config_error(format!("{key}: {}", e.message())))?;
        Ok(())
    }

    /// Checks the numeric parameters and the textual choices.
    pub fn validate(&self) -> Result<(), PipelineError> {
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(config_error(format!(
                "train-fraction must lie in (0, 1), got {}",
                self.train_fraction
            )));
        }
        if !(self.sentiment_alpha > 0.0) {
            return Err(config_error(format!(
                "sentiment-alpha must be positive, got {}",
                self.sentiment_alpha
            )));
        }
        if self.delimiter.is_empty() {
            return Err(config_error("delimiter must not be empty"));
        }
        self.encoding()?;
        self.vector_format()?;
        self.genre_limit()?;
        self.retention()?;
        self.extra_columns()?;
        Ok(())
    }

    pub fn encoding(&self) -> Result<Encoding, PipelineError> {
        self.encoding.parse().map_err(config_error)
    }

    pub fn vector_format(&self) -> Result<VectorFormat, PipelineError> {
        self.vector_format.parse().map_err(config_error)
    }

    pub fn genre_limit(&self) -> Result<GenreLimit, PipelineError> {
        let s = self.genre_limit.trim();
        if s.eq_ignore_ascii_case("all") {
            return Ok(GenreLimit::All);
        }
        match s.parse::<usize>() {
            Ok(n) if n > 0 => Ok(GenreLimit::First(n)),
            _ => Err(config_error(format!(
                "genre-limit must be a positive count or \"all\", got {s:?}"
            ))),
        }
    }

    pub fn retention(&self) -> Result<RetentionRule, PipelineError> {
        self.retention
            .parse()
            .map_err(|e: crate::mva::MvaError| config_error(e.to_string()))
    }

    pub fn extra_columns(&self) -> Result<Vec<super::ExtraColumn>, PipelineError> {
        self.extra_columns
            .iter()
            .map(|s| s.parse().map_err(config_error))
            .collect()
    }

    pub fn train_options(&self) -> TrainOptions {
        TrainOptions {
            train_fraction: self.train_fraction,
            seed: self.seed,
            max_depth: self.max_depth,
            min_leaf: self.min_leaf,
        }
    }

    pub fn sentiment_config(&self) -> SentimentConfig {
        SentimentConfig {
            alpha: self.sentiment_alpha,
            caps_boost: self.caps_boost,
            exclamation_boost: self.exclamation_boost,
            max_exclamations: self.max_exclamations,
        }
    }

    pub fn pca_options(&self) -> Result<PcaOptions, PipelineError> {
        Ok(PcaOptions {
            rule: self.retention()?,
            tolerance: DEFAULT_TOLERANCE,
            label_threshold: self.label_threshold,
        })
    }

    /// The path stored under `key`, or an error naming the key when unset.
    pub fn required(&self, key: &str, value: &Option<PathBuf>) -> Result<PathBuf, PipelineError> {
        value.clone().ok_or_else(|| {
            PipelineError::Missing(format!(
                "no {key} path configured (set `{key}` or pass --{key})"
            ))
        })
    }
}
