use std::collections::BTreeMap;
use std::io::Read;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::tree::{grow_tree, Interned, TreeParams};
use super::{extract_ngram_features, normalize_name, GenderError, NGramFeatures, NameExample};
use crate::corpus::{Gender, GenderSource, MovieBundle};

/// Format tag written at the top of every serialized model.
pub const MODEL_FORMAT: &str = "femrep-gender-model/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// The parent's test matched.
    Yes,
    No,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NodeKind {
    Split {
        feature: String,
        value: String,
    },
    Leaf {
        label: Gender,
        proportion: f64,
        samples: usize,
    },
}

/// One node of the serialized tree; nodes are stored in preorder.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub branch: Option<Branch>,
    #[serde(flatten)]
    pub kind: NodeKind,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainOptions {
    pub train_fraction: f64,
    pub seed: u64,
    pub max_depth: usize,
    pub min_leaf: usize,
}

impl Default for TrainOptions {
    fn default() -> Self {
        TrainOptions {
            train_fraction: 0.9,
            seed: 7,
            max_depth: 12,
            min_leaf: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct ModelFile {
    format: String,
    seed: u64,
    train_fraction: f64,
    max_depth: usize,
    min_leaf: usize,
    train_examples: usize,
    test_examples: usize,
    train_accuracy: f64,
    test_accuracy: f64,
    nodes: Vec<TreeNode>,
}

/// A trained name classifier. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct GenderModel {
    file: ModelFile,
    children: Vec<Option<(usize, usize)>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Prediction {
    pub gender: Gender,
    /// Share of the majority class at the reached leaf.
    pub confidence: f64,
}

impl GenderModel {
    fn from_file(file: ModelFile) -> Result<Self, GenderError> {
        if file.format != MODEL_FORMAT {
            return Err(GenderError::ModelFormat(format!(
                "unsupported format tag {:?}",
                file.format
            )));
        }
        let n = file.nodes.len();
        if n == 0 {
            return Err(GenderError::ModelFormat("empty tree".into()));
        }
        let mut yes = vec![None; n];
        let mut no = vec![None; n];
        for (i, node) in file.nodes.iter().enumerate() {
            if node.id != i {
                return Err(GenderError::ModelFormat(format!(
                    "node {i} has id {}",
                    node.id
                )));
            }
            if let NodeKind::Leaf {
                proportion, label, ..
            } = &node.kind
            {
                if !(0.0..=1.0).contains(proportion) || *label == Gender::Unknown {
                    return Err(GenderError::ModelFormat(format!("bad leaf {i}")));
                }
            }
            match (node.parent, node.branch) {
                (None, None) if i == 0 => {}
                (Some(p), Some(b))
                    if p < i && matches!(file.nodes[p].kind, NodeKind::Split { .. }) =>
                {
                    let slot = if b == Branch::Yes {
                        &mut yes[p]
                    } else {
                        &mut no[p]
                    };
                    if slot.replace(i).is_some() {
                        return Err(GenderError::ModelFormat(format!(
                            "node {p} has two {b:?} children"
                        )));
                    }
                }
                _ => {
                    return Err(GenderError::ModelFormat(format!(
                        "node {i} has a bad parent link"
                    )))
                }
            }
        }
        let mut children = vec![None; n];
        for (i, node) in file.nodes.iter().enumerate() {
            if let NodeKind::Split { .. } = node.kind {
                match (yes[i], no[i]) {
                    (Some(y), Some(n)) => children[i] = Some((y, n)),
                    _ => return Err(GenderError::ModelFormat(format!("split {i} lacks a child"))),
                }
            }
        }
        Ok(GenderModel { file, children })
    }

    /// Parses the JSON node list written by [`GenderModel::to_json`].
    pub fn from_json(text: &str) -> Result<Self, GenderError> {
        Self::from_file(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.file).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.file.nodes
    }

    pub fn train_accuracy(&self) -> f64 {
        self.file.train_accuracy
    }

    pub fn test_accuracy(&self) -> f64 {
        self.file.test_accuracy
    }

    pub fn seed(&self) -> u64 {
        self.file.seed
    }

    /// `key=value` lines describing the training run.
    pub fn accuracy_report(&self) -> String {
        let f = &self.file;
        format!(
            "seed={}\ntrain_fraction={}\ntrain_examples={}\ntest_examples={}\ntrain_accuracy={:.6}\ntest_accuracy={:.6}\nnodes={}\n",
            f.seed,
            f.train_fraction,
            f.train_examples,
            f.test_examples,
            f.train_accuracy,
            f.test_accuracy,
            f.nodes.len()
        )
    }

    fn classify(&self, features: &NGramFeatures) -> Prediction {
        let mut at = 0;
        loop {
            match &self.file.nodes[at].kind {
                NodeKind::Leaf {
                    label, proportion, ..
                } => {
                    return Prediction {
                        gender: *label,
                        confidence: *proportion,
                    }
                }
                NodeKind::Split { feature, value } => {
                    let (yes, no) = self.children[at].expect("split nodes have children");
                    at = if features.get(feature) == Some(value.as_str()) {
                        yes
                    } else {
                        no
                    };
                }
            }
        }
    }

    pub fn predict(&self, name: &str) -> Result<Prediction, GenderError> {
        Ok(self.classify(&extract_ngram_features(name)?))
    }
}

/// Trains with default depth and leaf limits.
pub fn train(
    examples: &[NameExample],
    train_fraction: f64,
    seed: u64,
) -> Result<GenderModel, GenderError> {
    train_with(
        examples,
        &TrainOptions {
            train_fraction,
            seed,
            ..TrainOptions::default()
        },
    )
}

/// Deduplicates names, makes a seeded stratified split and grows the tree.
///
/// A name listed with both labels keeps the majority label; exact ties are dropped.
pub fn train_with(
    examples: &[NameExample],
    options: &TrainOptions,
) -> Result<GenderModel, GenderError> {
    let fraction = options.train_fraction;
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(GenderError::TrainFraction(fraction));
    }
    let mut votes: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for ex in examples {
        let key = normalize_name(&ex.name);
        if key.is_empty() {
            continue;
        }
        let v = votes.entry(key).or_default();
        match ex.gender {
            Gender::Female => v.0 += 1,
            Gender::Male => v.1 += 1,
            Gender::Unknown => {}
        }
    }
    let mut female = Vec::new();
    let mut male = Vec::new();
    for (name, (f, m)) in votes {
        if f > m {
            female.push(name);
        } else if m > f {
            male.push(name);
        }
    }
    if female.len() < 2 || male.len() < 2 {
        return Err(GenderError::Degenerate {
            female: female.len(),
            male: male.len(),
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut train_set = Vec::new();
    let mut test_set = Vec::new();
    for (names, gender) in [(female, Gender::Female), (male, Gender::Male)] {
        let mut names = names;
        names.shuffle(&mut rng);
        let cut = ((names.len() as f64 * fraction).round() as usize).clamp(1, names.len() - 1);
        for (i, name) in names.into_iter().enumerate() {
            let features = extract_ngram_features(&name)?;
            if i < cut {
                train_set.push((features, gender));
            } else {
                test_set.push((features, gender));
            }
        }
    }

    let params = TreeParams {
        max_depth: options.max_depth,
        min_leaf: options.min_leaf.max(1),
    };
    let nodes = grow_tree(&Interned::new(&train_set), &params);
    let mut model = GenderModel::from_file(ModelFile {
        format: MODEL_FORMAT.into(),
        seed: options.seed,
        train_fraction: fraction,
        max_depth: options.max_depth,
        min_leaf: params.min_leaf,
        train_examples: train_set.len(),
        test_examples: test_set.len(),
        train_accuracy: 0.0,
        test_accuracy: 0.0,
        nodes,
    })?;
    let accuracy = |set: &[(NGramFeatures, Gender)]| {
        let hits = set
            .iter()
            .filter(|(f, g)| model.classify(f).gender == *g)
            .count();
        hits as f64 / set.len() as f64
    };
    let (train_acc, test_acc) = (accuracy(&train_set), accuracy(&test_set));
    model.file.train_accuracy = train_acc;
    model.file.test_accuracy = test_acc;
    Ok(model)
}

/// Outcome counts of [`fill_missing_genders`].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FillStats {
    pub characters: usize,
    pub labeled_in_corpus: usize,
    pub inferred: usize,
    pub below_floor: usize,
    pub invalid_name: usize,
}

impl FillStats {
    /// Share of characters with a resolved gender.
    pub fn coverage(&self) -> f64 {
        if self.characters == 0 {
            return 1.0;
        }
        (self.labeled_in_corpus + self.inferred) as f64 / self.characters as f64
    }
}

/// Assigns predicted genders to characters whose gender is unknown, when the
/// leaf confidence reaches `confidence_floor`.
pub fn fill_missing_genders(
    bundles: &mut [MovieBundle],
    model: &GenderModel,
    confidence_floor: f64,
) -> FillStats {
    let mut stats = FillStats::default();
    for character in bundles.iter_mut().flat_map(|b| b.characters.iter_mut()) {
        stats.characters += 1;
        if character.gender != Gender::Unknown {
            if character.gender_source == Some(GenderSource::Inferred) {
                stats.inferred += 1;
            } else {
                stats.labeled_in_corpus += 1;
            }
            continue;
        }
        match model.predict(&character.name) {
            Ok(p) if p.confidence >= confidence_floor => {
                character.gender = p.gender;
                character.gender_source = Some(GenderSource::Inferred);
                stats.inferred += 1;
            }
            Ok(_) => stats.below_floor += 1,
            Err(_) => stats.invalid_name += 1,
        }
    }
    stats
}

/// A names table after dropping rows without a usable M/F label.
#[derive(Clone, Debug, Default)]
pub struct NamesDataset {
    pub examples: Vec<NameExample>,
    pub dropped_rows: usize,
}

const SSA_NAMES: &str = include_str!("../../data/names/us_ssa_names.csv");

impl NamesDataset {
    /// The bundled US first-name table.
    pub fn bundled() -> Self {
        load_names_csv(SSA_NAMES.as_bytes()).expect("bundled names parse")
    }
}

/// Reads `name,gender` rows; a leading `name,gender` header is skipped.
pub fn load_names_csv<R: Read>(reader: R) -> Result<NamesDataset, GenderError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut out = NamesDataset::default();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let name = record.get(0).unwrap_or("").trim();
        let label = record.get(1).unwrap_or("").trim();
        if i == 0 && label.eq_ignore_ascii_case("gender") {
            continue;
        }
        let gender = match label.to_ascii_lowercase().as_str() {
            "m" | "male" => Gender::Male,
            "f" | "female" => Gender::Female,
            _ => Gender::Unknown,
        };
        match NameExample::new(name, gender) {
            Ok(ex) => out.examples.push(ex),
            Err(_) => out.dropped_rows += 1,
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{CharacterRecord, DialogueLine, MovieRecord};

    fn ex(name: &str, g: Gender) -> NameExample {
        NameExample::new(name, g).unwrap()
    }

    fn toy_examples() -> Vec<NameExample> {
        let mut v: Vec<_> = ["anna", "bella", "carla", "dora"]
            .iter()
            .map(|n| ex(n, Gender::Female))
            .collect();
        v.extend(
            ["bruno", "carlo", "dario", "hugo"]
                .iter()
                .map(|n| ex(n, Gender::Male)),
        );
        v
    }

    #[test]
    fn separable_fixture_splits_on_last_letter() {
        let model = train(&toy_examples(), 0.75, 11).unwrap();
        assert_eq!(model.test_accuracy(), 1.0);
        assert_eq!(model.train_accuracy(), 1.0);
        // Root tests last1 = "a"; both children are pure leaves of three.
        assert_eq!(
            model.nodes()[0].kind,
            NodeKind::Split {
                feature: "last1".into(),
                value: "a".into()
            }
        );
        assert_eq!(model.nodes().len(), 3);
        assert_eq!(
            model.predict("ROSA").unwrap(),
            Prediction {
                gender: Gender::Female,
                confidence: 1.0
            }
        );
        assert_eq!(
            model.predict("MARCO").unwrap(),
            Prediction {
                gender: Gender::Male,
                confidence: 1.0
            }
        );
    }

    #[test]
    fn odd_names_still_reach_a_leaf() {
        let model = train(&toy_examples(), 0.75, 11).unwrap();
        let p = model.predict("X \u{C6}-12").unwrap();
        assert!(p.confidence >= 0.5 && p.confidence <= 1.0);
        assert!(matches!(
            model.predict("!!"),
            Err(GenderError::InvalidName(_))
        ));
    }

    #[test]
    fn single_class_input_is_rejected() {
        let all_female: Vec<_> = ["anna", "bella", "carla"]
            .iter()
            .map(|n| ex(n, Gender::Female))
            .collect();
        assert!(matches!(
            train(&all_female, 0.9, 1),
            Err(GenderError::Degenerate { female: 3, male: 0 })
        ));
        assert!(matches!(
            train(&toy_examples(), 1.0, 1),
            Err(GenderError::TrainFraction(_))
        ));
    }

    #[test]
    fn conflicting_duplicates_use_majority_and_drop_ties() {
        let mut v = toy_examples();
        v.push(ex("Anna", Gender::Male));
        v.push(ex("ANNA", Gender::Female));
        v.push(ex("kim", Gender::Male));
        v.push(ex("kim", Gender::Female));
        let model = train(&v, 0.75, 3).unwrap();
        assert_eq!(model.file.train_examples + model.file.test_examples, 8);
    }

    #[test]
    fn training_is_deterministic_and_round_trips() {
        let a = train(&toy_examples(), 0.75, 5).unwrap().to_json();
        let b = train(&toy_examples(), 0.75, 5).unwrap().to_json();
        assert_eq!(a, b);
        let reloaded = GenderModel::from_json(&a).unwrap();
        assert_eq!(reloaded.to_json(), a);
    }

    #[test]
    fn rejects_broken_model_files() {
        let good = train(&toy_examples(), 0.75, 5).unwrap().to_json();
        let bad_tag = good.replace(MODEL_FORMAT, "something-else/9");
        assert!(GenderModel::from_json(&bad_tag).is_err());
        let orphan = good.replace("\"parent\": 0", "\"parent\": 7");
        assert!(GenderModel::from_json(&orphan).is_err());
    }

    /// Root split on last1 = "a"; the "a" leaf holds a 3:2 female majority.
    pub(crate) fn mixed_leaf_model() -> GenderModel {
        GenderModel::from_json(&format!(
            r#"{{
  "format": "{MODEL_FORMAT}", "seed": 0, "train_fraction": 0.9, "max_depth": 12, "min_leaf": 3,
  "train_examples": 10, "test_examples": 0, "train_accuracy": 0.8, "test_accuracy": 0.0,
  "nodes": [
    {{"id": 0, "parent": null, "branch": null, "kind": "split", "feature": "last1", "value": "a"}},
    {{"id": 1, "parent": 0, "branch": "yes", "kind": "leaf", "label": "female", "proportion": 0.6, "samples": 5}},
    {{"id": 2, "parent": 0, "branch": "no", "kind": "leaf", "label": "male", "proportion": 1.0, "samples": 5}}
  ]
}}"#
        ))
        .unwrap()
    }

    fn bundle() -> MovieBundle {
        let ch = |id: &str, name: &str, g: Gender| CharacterRecord {
            character_id: id.into(),
            name: name.into(),
            movie_id: "m0".into(),
            gender: g,
            gender_source: (g != Gender::Unknown).then_some(GenderSource::Corpus),
        };
        MovieBundle {
            movie: MovieRecord {
                movie_id: "m0".into(),
                title: "t".into(),
                release_year: 2000,
                imdb_rating: 5.0,
                vote_count: 1,
                genres: vec![],
            },
            characters: vec![
                ch("u0", "BIANCA", Gender::Female),
                ch("u1", "CAMERON", Gender::Male),
                ch("u2", "ROSA", Gender::Unknown),
                ch("u3", "BRUNO", Gender::Unknown),
            ],
            lines: vec![DialogueLine {
                line_id: "L1".into(),
                character_id: "u0".into(),
                movie_id: "m0".into(),
                text: "hi".into(),
            }],
            conversations: vec![],
            crew: vec![],
            financials: None,
        }
    }

    #[test]
    fn fill_with_zero_floor_infers_everyone() {
        let mut bundles = vec![bundle()];
        let stats = fill_missing_genders(&mut bundles, &mixed_leaf_model(), 0.0);
        assert_eq!(stats.inferred, 2);
        assert_eq!(stats.coverage(), 1.0);
        assert_eq!(bundles[0].characters[2].gender, Gender::Female);
        assert_eq!(
            bundles[0].characters[2].gender_source,
            Some(GenderSource::Inferred)
        );
        assert_eq!(bundles[0].characters[3].gender, Gender::Male);
    }

    #[test]
    fn unreachable_floor_infers_nothing() {
        let mut bundles = vec![bundle()];
        let stats = fill_missing_genders(&mut bundles, &mixed_leaf_model(), 1.01);
        assert_eq!(stats.inferred, 0);
        assert_eq!(stats.below_floor, 2);
        assert_eq!(stats.coverage(), 0.5);
    }

    #[test]
    fn low_confidence_leaf_stays_unknown() {
        let mut bundles = vec![bundle()];
        let stats = fill_missing_genders(&mut bundles, &mixed_leaf_model(), 0.7);
        assert_eq!(stats.inferred, 1);
        assert_eq!(bundles[0].characters[2].gender, Gender::Unknown);
        assert_eq!(bundles[0].characters[2].gender_source, None);
        assert_eq!(bundles[0].characters[3].gender, Gender::Male);
    }

    #[test]
    fn names_csv_drops_unknown_labels() {
        let csv = "name,gender\nMary,F\nJohn,M\nAlex,U\n,F\nSam,male\n";
        let ds = load_names_csv(csv.as_bytes()).unwrap();
        assert_eq!(ds.examples.len(), 3);
        assert_eq!(ds.dropped_rows, 2);
    }
}
