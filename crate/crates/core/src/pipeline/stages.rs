use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::analysis::{analyze_movies, Resources};
use super::manifest::{FileDigest, RunManifest, StageRecord};
use super::{reports, PipelineError, RunConfig};
use crate::corpus::{
    join_corpus, parse_characters, parse_conversations, parse_crew_csv, parse_delimited,
    parse_lines, parse_movies, CorpusTables, Exclusion, MovieBundle, CHARACTER_SCHEMA,
    CONVERSATION_SCHEMA, LINE_SCHEMA, MOVIE_SCHEMA,
};
use crate::embedding::load_vectors;
use crate::features::{assemble_matrix, bechdel_score, ratio_reports, FeatureError, WordList};
use crate::gender::{
    fill_missing_genders, load_names_csv, train_with, GenderError, GenderModel, NamesDataset,
};
use crate::mva::{run_pca, MvaError};
use crate::text::{
    count_pos, pos_tag, tokenize, PerceptronTagger, PosCounts, PosTagger, SentimentLexicon,
    StopWords,
};

pub const BUNDLES_FILE: &str = "bundles.json";
pub const BUNDLES_FORMAT: &str = "femrep-bundles/1";
pub const MODEL_FILE: &str = "gender_model.json";
pub const MANIFEST_FILE: &str = "manifest.json";
const FEATURES_FILE: &str = "features.csv";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Ingest,
    TrainGender,
    Analyze,
    Pca,
    Bechdel,
    Report,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Ingest,
        Command::TrainGender,
        Command::Analyze,
        Command::Pca,
        Command::Bechdel,
        Command::Report,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Ingest => "ingest",
            Command::TrainGender => "train-gender",
            Command::Analyze => "analyze",
            Command::Pca => "pca",
            Command::Bechdel => "bechdel",
            Command::Report => "report",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command {s:?}"))
    }
}

/// What a finished stage wrote.
#[derive(Clone, Debug, PartialEq)]
pub struct StageReport {
    pub command: Command,
    pub outputs: Vec<PathBuf>,
    pub summary: BTreeMap<String, serde_json::Value>,
}

/// The ingest cache: joined bundles plus the join's bookkeeping.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BundleCache {
    pub format: String,
    pub bundles: Vec<MovieBundle>,
    pub exclusions: Vec<Exclusion>,
    pub unmatched_financials: Vec<String>,
}

/// Collects one stage's inputs and outputs, then writes them with the manifest.
struct StageRun {
    command: Command,
    started: Instant,
    inputs: Vec<FileDigest>,
    outputs: Vec<(String, Vec<u8>)>,
    summary: BTreeMap<String, serde_json::Value>,
}

impl StageRun {
    fn new(command: Command) -> Self {
        StageRun {
            command,
            started: Instant::now(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            summary: BTreeMap::new(),
        }
    }

    fn read(&mut self, label: &str, path: &Path) -> Result<Vec<u8>, PipelineError> {
        let bytes = std::fs::read(path).map_err(|e| PipelineError::input(path, e))?;
        let mut digest = FileDigest::of(path.display().to_string(), &bytes);
        digest.path = format!("{label}={}", digest.path);
        self.inputs.push(digest);
        Ok(bytes)
    }

    fn read_text(&mut self, label: &str, path: &Path) -> Result<String, PipelineError> {
        let bytes = self.read(label, path)?;
        String::from_utf8(bytes).map_err(|e| PipelineError::input(path, e))
    }

    /// Reads `path` when configured, else notes that the bundled data was used.
    fn read_optional(
        &mut self,
        label: &str,
        path: &Option<PathBuf>,
    ) -> Result<Option<String>, PipelineError> {
        match path {
            Some(p) => self.read_text(label, p).map(Some),
            None => {
                self.note(&format!("{label}_source"), "bundled");
                Ok(None)
            }
        }
    }

    fn emit(&mut self, file: &str, contents: impl Into<Vec<u8>>) {
        self.outputs.push((file.to_owned(), contents.into()));
    }

    fn note(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("summary values serialize");
        self.summary.insert(key.to_owned(), v);
    }

    fn finish(self, cfg: &RunConfig) -> Result<StageReport, PipelineError> {
        let out_dir = &cfg.output;
        let out_err = |path: &Path, e: std::io::Error| PipelineError::Output {
            path: path.to_path_buf(),
            message: e.to_string(),
        };
        std::fs::create_dir_all(out_dir).map_err(|e| out_err(out_dir, e))?;
        let mut written = Vec::new();
        let mut digests = Vec::new();
        for (name, bytes) in &self.outputs {
            let path = out_dir.join(name);
            std::fs::write(&path, bytes).map_err(|e| out_err(&path, e))?;
            digests.push(FileDigest::of(name.clone(), bytes));
            written.push(path);
        }
        let manifest_path = out_dir.join(MANIFEST_FILE);
        let mut manifest = RunManifest::load_or_default(&manifest_path);
        manifest.stages.insert(
            self.command.name().to_owned(),
            StageRecord {
                config: serde_json::to_value(cfg).expect("config serializes"),
                inputs: self.inputs,
                outputs: digests,
                summary: self.summary.clone(),
                elapsed_ms: self.started.elapsed().as_millis() as u64,
            },
        );
        std::fs::write(&manifest_path, manifest.to_json())
            .map_err(|e| out_err(&manifest_path, e))?;
        Ok(StageReport {
            command: self.command,
            outputs: written,
            summary: self.summary,
        })
    }
}

/// Runs one command against `cfg`.
pub fn run(command: Command, cfg: &RunConfig) -> Result<StageReport, PipelineError> {
    cfg.validate()?;
    match command {
        Command::Ingest => ingest(cfg),
        Command::TrainGender => train_gender(cfg),
        Command::Analyze => analyze(cfg),
        Command::Pca => pca(cfg),
        Command::Bechdel => bechdel(cfg),
        Command::Report => report(cfg),
    }
}

fn ingest(cfg: &RunConfig) -> Result<StageReport, PipelineError> {
    let mut stage = StageRun::new(Command::Ingest);
    let encoding = cfg.encoding()?;
    let mut diagnostics: Vec<(String, usize, String)> = Vec::new();
    let mut table = |stage: &mut StageRun, key: &str, path: &Option<PathBuf>, schema: &[&str]| {
        let path = cfg.required(key, path)?;
        let bytes = stage.read(key, &path)?;
        let t = parse_delimited(bytes.as_slice(), schema, &cfg.delimiter, encoding)
            .map_err(|e| PipelineError::input(&path, e))?;
        diagnostics.extend(
            t.diagnostics
                .iter()
                .map(|d| (key.to_owned(), d.line, d.message.clone())),
        );
        Ok::<_, PipelineError>(t)
    };
    let movies_t = table(&mut stage, "movies", &cfg.movies, &MOVIE_SCHEMA)?;
    let characters_t = table(&mut stage, "characters", &cfg.characters, &CHARACTER_SCHEMA)?;
    let lines_t = table(&mut stage, "lines", &cfg.lines, &LINE_SCHEMA)?;
    let conversations_t = table(
        &mut stage,
        "conversations",
        &cfg.conversations,
        &CONVERSATION_SCHEMA,
    )?;

    let mut record = |key: &str, diags: Vec<crate::corpus::ParseDiagnostic>| {
        diagnostics.extend(
            diags
                .into_iter()
                .map(|d| (key.to_owned(), d.line, d.message)),
        );
    };
    let (movies, d) = parse_movies(&movies_t);
    record("movies", d);
    let (characters, d) = parse_characters(&characters_t);
    record("characters", d);
    let (lines, d) = parse_lines(&lines_t);
    record("lines", d);
    let (conversations, d) = parse_conversations(&conversations_t);
    record("conversations", d);
    let crew = match &cfg.crew {
        Some(path) => {
            let bytes = stage.read("crew", path)?;
            parse_crew_csv(bytes.as_slice()).map_err(|e| PipelineError::input(path, e))?
        }
        None => Vec::new(),
    };

    let metadata_rows = movies.len();
    let outcome = join_corpus(CorpusTables {
        movies,
        characters,
        lines,
        conversations,
        crew,
    });
    diagnostics.extend(
        outcome
            .diagnostics
            .iter()
            .map(|m| ("join".to_owned(), 0, m.clone())),
    );

    stage.note("metadata_rows", metadata_rows);
    stage.note("bundles", outcome.bundles.len());
    stage.note("excluded", outcome.exclusions.len());
    stage.note("unmatched_financials", outcome.unmatched_financials.len());
    stage.note("diagnostics", diagnostics.len());

    stage.emit(
        "exclusions.csv",
        reports::exclusions_csv(&outcome.exclusions),
    );
    stage.emit(
        "unmatched_financials.csv",
        reports::unmatched_financials_csv(&outcome.bundles, &outcome.unmatched_financials),
    );
    stage.emit(
        "parse_diagnostics.csv",
        reports::diagnostics_csv(&diagnostics),
    );
    let cache = BundleCache {
        format: BUNDLES_FORMAT.into(),
        bundles: outcome.bundles,
        exclusions: outcome.exclusions,
        unmatched_financials: outcome.unmatched_financials,
    };
    stage.emit(
        BUNDLES_FILE,
        serde_json::to_vec(&cache).expect("bundles serialize"),
    );
    stage.finish(cfg)
}

fn train_gender(cfg: &RunConfig) -> Result<StageReport, PipelineError> {
    let mut stage = StageRun::new(Command::TrainGender);
    let dataset = match &cfg.names {
        Some(path) => {
            let bytes = stage.read("names", path)?;
            load_names_csv(bytes.as_slice()).map_err(|e| PipelineError::input(path, e))?
        }
        None => {
            stage.note("names_source", "bundled");
            NamesDataset::bundled()
        }
    };
    let model = train_with(&dataset.examples, &cfg.train_options()).map_err(|e| match e {
        GenderError::TrainFraction(_) => PipelineError::Config(e.to_string()),
        other => PipelineError::Training(other.to_string()),
    })?;
    stage.note("examples", dataset.examples.len());
    stage.note("dropped_rows", dataset.dropped_rows);
    stage.note("train_accuracy", model.train_accuracy());
    stage.note("test_accuracy", model.test_accuracy());
    stage.emit(MODEL_FILE, model.to_json());
    stage.emit("gender_accuracy.txt", model.accuracy_report());
    stage.finish(cfg)
}

/// Loads the ingest cache from the output directory. A cache written in
/// another format is rebuilt by re-running ingest.
pub fn load_bundle_cache(cfg: &RunConfig) -> Result<BundleCache, PipelineError> {
    let path = cfg.output.join(BUNDLES_FILE);
    let bytes = std::fs::read(&path).map_err(|_| {
        PipelineError::Missing(format!(
            "ingest cache {} not found; run `ingest` first",
            path.display()
        ))
    })?;
    match serde_json::from_slice::<BundleCache>(&bytes) {
        Ok(cache) if cache.format == BUNDLES_FORMAT => Ok(cache),
        _ => {
            log::warn!("{} has an unexpected format; re-ingesting", path.display());
            ingest(cfg)?;
            let bytes = std::fs::read(&path).map_err(|e| PipelineError::input(&path, e))?;
            serde_json::from_slice(&bytes).map_err(|e| PipelineError::input(&path, e))
        }
    }
}

/// Cached bundles with missing genders filled in by the trained model.
fn labeled_bundles(
    cfg: &RunConfig,
    stage: &mut StageRun,
) -> Result<Vec<MovieBundle>, PipelineError> {
    let cache = load_bundle_cache(cfg)?;
    stage.inputs.push(
        FileDigest::read(BUNDLES_FILE, &cfg.output.join(BUNDLES_FILE))
            .map_err(|e| PipelineError::input(&cfg.output.join(BUNDLES_FILE), e))?,
    );
    let model_path = cfg.output.join(MODEL_FILE);
    let text = std::fs::read_to_string(&model_path).map_err(|_| {
        PipelineError::Missing(format!(
            "gender model {} not found; run `train-gender` first",
            model_path.display()
        ))
    })?;
    stage
        .inputs
        .push(FileDigest::of(MODEL_FILE, text.as_bytes()));
    let model = GenderModel::from_json(&text).map_err(|e| PipelineError::input(&model_path, e))?;
    let mut bundles = cache.bundles;
    let fill = fill_missing_genders(&mut bundles, &model, cfg.confidence_floor);
    stage.note("gender_coverage", fill.coverage());
    stage.note("gender_fill", fill);
    Ok(bundles)
}

fn word_list(
    stage: &mut StageRun,
    key: &str,
    path: &Option<PathBuf>,
    bundled: fn() -> WordList,
) -> Result<WordList, PipelineError> {
    Ok(stage
        .read_optional(key, path)?
        .map_or_else(bundled, |t| WordList::parse(&t)))
}

fn tagger(stage: &mut StageRun, cfg: &RunConfig) -> Result<Box<dyn PosTagger>, PipelineError> {
    match stage.read_optional("tagger", &cfg.tagger)? {
        Some(text) => {
            let path = cfg.tagger.as_deref().unwrap_or(Path::new("tagger"));
            let t = PerceptronTagger::parse(&text).map_err(|e| PipelineError::input(path, e))?;
            Ok(Box::new(t))
        }
        None => Ok(Box::new(PerceptronTagger::bundled())),
    }
}

fn load_resources(cfg: &RunConfig, stage: &mut StageRun) -> Result<Resources, PipelineError> {
    let vectors_path = cfg.required("vectors", &cfg.vectors)?;
    let bytes = stage.read("vectors", &vectors_path)?;
    let loaded = load_vectors(bytes.as_slice(), cfg.vector_format()?)
        .map_err(|e| PipelineError::input(&vectors_path, e))?;
    stage.note("vector_diagnostics", loaded.diagnostics.len());
    let lexicon = match stage.read_optional("lexicon", &cfg.lexicon)? {
        Some(text) => SentimentLexicon::parse(&text).map_err(|e| {
            PipelineError::input(cfg.lexicon.as_deref().unwrap_or(Path::new("lexicon")), e)
        })?,
        None => SentimentLexicon::bundled(),
    };
    let stopwords = stage
        .read_optional("stopwords", &cfg.stopwords)?
        .map_or_else(StopWords::english, |t| StopWords::parse(&t));
    Ok(Resources {
        vectors: loaded.store,
        lexicon,
        stopwords,
        tagger: tagger(stage, cfg)?,
        male_reference: word_list(
            stage,
            "male-reference",
            &cfg.male_reference,
            WordList::male_reference,
        )?,
        named_blocklist: word_list(
            stage,
            "named-blocklist",
            &cfg.named_blocklist,
            WordList::named_blocklist,
        )?,
        sentiment: cfg.sentiment_config(),
        genre_limit: cfg.genre_limit()?,
        extra_columns: cfg.extra_columns()?,
    })
}

fn analyze(cfg: &RunConfig) -> Result<StageReport, PipelineError> {
    let mut stage = StageRun::new(Command::Analyze);
    let res = load_resources(cfg, &mut stage)?;
    let bundles = labeled_bundles(cfg, &mut stage)?;
    let analyses = analyze_movies(&bundles, &res, cfg.workers);

    let vectors: Vec<_> = analyses.iter().map(|a| a.features.clone()).collect();
    let feature_exclusions = match assemble_matrix(&vectors) {
        Ok((m, ex)) => {
            stage.note("complete_rows", m.n_rows());
            ex
        }
        Err(FeatureError::TooFewRows(n)) => {
            stage.note("complete_rows", n);
            vectors
                .iter()
                .filter(|v| !v.missing().is_empty())
                .map(|v| crate::features::FeatureExclusion {
                    movie_id: v.movie_id.clone(),
                    missing: v.missing(),
                })
                .collect()
        }
    };
    let line_pos: Vec<Vec<PosCounts>> = analyses
        .iter()
        .map(|a| a.lines.iter().map(|l| l.pos).collect())
        .collect();
    let years = ratio_reports(&bundles, &line_pos);

    stage.note("movies", bundles.len());
    stage.note("feature_exclusions", feature_exclusions.len());
    stage.note(
        "bechdel_passes",
        analyses.iter().filter(|a| a.bechdel.passes).count(),
    );
    stage.note(
        "movies_without_genre_embedding",
        analyses.iter().filter(|a| a.genre_scores.is_none()).count(),
    );

    stage.emit(FEATURES_FILE, reports::features_csv(&vectors));
    stage.emit(
        "feature_exclusions.csv",
        reports::feature_exclusions_csv(&feature_exclusions),
    );
    stage.emit("bechdel.csv", reports::bechdel_csv(&bundles, &analyses));
    stage.emit(
        "genre_scores.csv",
        reports::genre_scores_csv(&bundles, &analyses),
    );
    stage.emit(
        "cast_crew_ratios.csv",
        reports::cast_crew_ratios_csv(&years),
    );
    stage.emit(
        "dialogue_pos_ratios.csv",
        reports::dialogue_pos_ratios_csv(&years),
    );
    stage.emit("financials.csv", reports::financials_csv(&bundles));
    if cfg.emit_intermediate {
        stage.emit("characters.csv", reports::characters_csv(&bundles));
        stage.emit(
            "line_sentiment.csv",
            reports::line_sentiment_csv(&bundles, &analyses),
        );
        stage.emit("line_pos.csv", reports::line_pos_csv(&bundles, &analyses));
    }
    stage.finish(cfg)
}

fn pca(cfg: &RunConfig) -> Result<StageReport, PipelineError> {
    let mut stage = StageRun::new(Command::Pca);
    let path = cfg.output.join(FEATURES_FILE);
    if !path.exists() {
        return Err(PipelineError::Missing(format!(
            "feature table {} not found; run `analyze` first",
            path.display()
        )));
    }
    let text = stage.read_text(FEATURES_FILE, &path)?;
    let (matrix, excluded) =
        reports::read_features_csv(&text).map_err(|e| PipelineError::input(&path, e))?;
    stage.note("complete_rows", matrix.n_rows());
    stage.note("incomplete_rows", excluded.len());
    let report = run_pca(&matrix, cfg.pca_options()?).map_err(|e| match e {
        MvaError::TooFewObservations { .. } | MvaError::ZeroVariance(_) => {
            PipelineError::Insufficient(e.to_string())
        }
        other => PipelineError::Insufficient(format!("PCA failed: {other}")),
    })?;
    stage.note("retained_components", report.retained);
    stage.note("no_structure", report.no_structure());
    stage.emit("pca_adequacy.csv", report.adequacy_csv());
    stage.emit("pca_variance.csv", report.variance_csv());
    stage.emit("pca_loadings.csv", report.loadings_csv());
    stage.emit("pca_scree.csv", report.scree_csv());
    stage.emit("pca_scores.csv", report.scores_csv());
    stage.emit("pca_component_labels.csv", report.component_labels_csv());
    stage.finish(cfg)
}

fn bechdel(cfg: &RunConfig) -> Result<StageReport, PipelineError> {
    let mut stage = StageRun::new(Command::Bechdel);
    let male = word_list(
        &mut stage,
        "male-reference",
        &cfg.male_reference,
        WordList::male_reference,
    )?;
    let blocklist = word_list(
        &mut stage,
        "named-blocklist",
        &cfg.named_blocklist,
        WordList::named_blocklist,
    )?;
    let bundles = labeled_bundles(cfg, &mut stage)?;
    let rows: Vec<_> = bundles
        .iter()
        .map(|b| bechdel_score(b, &male, &blocklist))
        .collect();
    stage.note("movies", bundles.len());
    stage.note("bechdel_passes", rows.iter().filter(|r| r.passes).count());
    stage.emit("bechdel.csv", reports::bechdel_csv_from(&bundles, &rows));
    stage.finish(cfg)
}

fn report(cfg: &RunConfig) -> Result<StageReport, PipelineError> {
    let mut stage = StageRun::new(Command::Report);
    let tagger = tagger(&mut stage, cfg)?;
    let bundles = labeled_bundles(cfg, &mut stage)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .expect("thread pool starts");
    let line_pos: Vec<Vec<PosCounts>> = pool.install(|| {
        bundles
            .par_iter()
            .map(|b| {
                b.lines
                    .iter()
                    .map(|l| count_pos(&pos_tag(&tokenize(&l.text), tagger.as_ref())))
                    .collect()
            })
            .collect()
    });
    let years = ratio_reports(&bundles, &line_pos);
    stage.note("years", years.len());
    stage.emit(
        "cast_crew_ratios.csv",
        reports::cast_crew_ratios_csv(&years),
    );
    stage.emit(
        "dialogue_pos_ratios.csv",
        reports::dialogue_pos_ratios_csv(&years),
    );
    stage.finish(cfg)
}
