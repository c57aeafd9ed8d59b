//! End-to-end run of the bundled three-movie fixture.
//!
//! Set `FEMREP_UPDATE_GOLDEN=1` to rewrite the committed golden files.

use std::path::{Path, PathBuf};

use femrep::pipeline::{run, Command, PipelineError, RunConfig, RunManifest, MANIFEST_FILE};

const GOLDEN: &[&str] = &[
    "features.csv",
    "feature_exclusions.csv",
    "bechdel.csv",
    "genre_scores.csv",
    "cast_crew_ratios.csv",
    "dialogue_pos_ratios.csv",
    "financials.csv",
    "line_sentiment.csv",
    "line_pos.csv",
    "characters.csv",
    "exclusions.csv",
    "unmatched_financials.csv",
    "parse_diagnostics.csv",
    "gender_accuracy.txt",
    "pca_adequacy.csv",
    "pca_variance.csv",
    "pca_loadings.csv",
    "pca_scree.csv",
    "pca_scores.csv",
    "pca_component_labels.csv",
];

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/tiny")
}

fn config(out: &Path) -> RunConfig {
    let mut cfg = RunConfig::load(Some(&fixture().join("run.toml"))).unwrap();
    cfg.output = out.to_path_buf();
    cfg.emit_intermediate = true;
    cfg
}

fn run_all(cfg: &RunConfig) {
    for c in [
        Command::Ingest,
        Command::TrainGender,
        Command::Analyze,
        Command::Pca,
    ] {
        run(c, cfg).unwrap_or_else(|e| panic!("{c}: {e}"));
    }
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn fixture_matches_golden_files_on_two_runs() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_all(&config(a.path()));
    run_all(&config(b.path()));
    let golden = fixture().join("golden");
    let update = std::env::var_os("FEMREP_UPDATE_GOLDEN").is_some();
    for name in GOLDEN {
        let first = read(a.path(), name);
        assert_eq!(first, read(b.path(), name), "{name} differs between runs");
        if update {
            std::fs::write(golden.join(name), &first).unwrap();
        } else {
            assert_eq!(
                first,
                read(&golden, name),
                "{name} differs from the golden file"
            );
        }
    }
    assert_eq!(
        read(a.path(), "bundles.json"),
        read(b.path(), "bundles.json")
    );
    assert_eq!(
        read(a.path(), "gender_model.json"),
        read(b.path(), "gender_model.json")
    );
}

/// Values evaluated by hand from the fixture files: genre scores are means over
/// each movie's female lines of cos(genre vector, mean of the line's non-stop-word
/// vectors); sentiment is the mean of x/sqrt(x^2 + 15) with the caps and
/// exclamation adjustments; counts come from the tag dictionary (unlisted words
/// are nouns) and the corpus/inferred genders (MARTHA female, OTTO male).
#[test]
fn features_match_hand_evaluation() {
    let expected: [(&str, [f64; 10]); 3] = [
        (
            "m1",
            [
                0.575669, 0.649261, 0.352062, 3.0, 4.0, 1.0, 0.586819, 4.0, 2.0, 2.0,
            ],
        ),
        (
            "m2",
            [
                0.587269, 0.634408, 0.156908, 2.0, 3.0, 0.0, -0.207364, 1.0, 3.0, 2.0,
            ],
        ),
        (
            "m3",
            [
                0.392718, 0.540365, 0.531833, 2.0, 4.0, 2.0, 0.030901, 4.0, 2.0, 4.0,
            ],
        ),
    ];
    let out = tempfile::tempdir().unwrap();
    run_all(&config(out.path()));
    let text = read(out.path(), "features.csv");
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 3);
    for (row, (id, values)) in rows.iter().zip(expected) {
        assert_eq!(row[0], id);
        for (cell, want) in row[1..].iter().zip(values) {
            let got: f64 = cell.parse().unwrap();
            assert!((got - want).abs() <= 1e-6, "{id}: {got} vs {want}");
        }
    }
    // Hand sums of the same quantities.
    let m1_sentiment = [3.2f64, 2.6, 1.9, 3.2 + 0.733]
        .iter()
        .map(|x| x / (x * x + 15.0).sqrt())
        .sum::<f64>()
        / 4.0;
    assert!((m1_sentiment - 0.586819).abs() < 5e-7);
    let m3_last = -2.0f64 - 2.0 * 0.292;
    assert!((m3_last / (m3_last * m3_last + 15.0).sqrt() - (-0.554999)).abs() < 5e-7);
}

#[test]
fn manifest_lists_every_output_with_its_digest() {
    let out = tempfile::tempdir().unwrap();
    run_all(&config(out.path()));
    let manifest: RunManifest = serde_json::from_str(&read(out.path(), MANIFEST_FILE)).unwrap();
    assert_eq!(
        manifest.stages.keys().collect::<Vec<_>>(),
        ["analyze", "ingest", "pca", "train-gender"]
    );
    let mut listed: Vec<&str> = manifest.outputs().map(|d| d.path.as_str()).collect();
    listed.sort_unstable();
    let mut on_disk: Vec<String> = std::fs::read_dir(out.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n != MANIFEST_FILE)
        .collect();
    on_disk.sort_unstable();
    assert_eq!(listed, on_disk);
    for d in manifest.outputs() {
        let bytes = std::fs::read(out.path().join(&d.path)).unwrap();
        assert_eq!(femrep::pipeline::FileDigest::of(d.path.clone(), &bytes), *d);
    }
    assert_eq!(manifest.stages["ingest"].inputs.len(), 5);
}

#[test]
fn ingest_without_crew_digests_four_inputs_and_is_repeatable() {
    let out = tempfile::tempdir().unwrap();
    let mut cfg = config(out.path());
    cfg.crew = None;
    let digest = |cfg: &RunConfig| {
        run(Command::Ingest, cfg).unwrap();
        let m: RunManifest = serde_json::from_str(&read(out.path(), MANIFEST_FILE)).unwrap();
        let ingest = &m.stages["ingest"];
        assert_eq!(ingest.inputs.len(), 4);
        ingest
            .outputs
            .iter()
            .find(|d| d.path == "bundles.json")
            .unwrap()
            .sha256
            .clone()
    };
    assert_eq!(digest(&cfg), digest(&cfg));
    assert_eq!(
        read(out.path(), "unmatched_financials.csv").lines().count(),
        4
    );
}

#[test]
fn missing_inputs_and_prerequisites_exit_with_code_two() {
    let out = tempfile::tempdir().unwrap();
    let mut cfg = config(out.path());
    cfg.lines = Some(fixture().join("no_such_lines.txt"));
    let err = run(Command::Ingest, &cfg).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(err.to_string().contains("no_such_lines.txt"), "{err}");

    let cfg = config(out.path());
    let err = run(Command::Analyze, &cfg).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(err.to_string().contains("bundles.json"), "{err}");

    run(Command::Ingest, &cfg).unwrap();
    let err = run(Command::Analyze, &cfg).unwrap_err();
    assert!(err.to_string().contains("gender_model.json"), "{err}");

    run(Command::TrainGender, &cfg).unwrap();
    let mut no_vectors = cfg.clone();
    no_vectors.vectors = Some(out.path().join("absent.vec"));
    assert_eq!(
        run(Command::Analyze, &no_vectors).unwrap_err().exit_code(),
        2
    );
    assert_eq!(run(Command::Pca, &cfg).unwrap_err().exit_code(), 2);
}

#[test]
fn intermediate_tables_only_on_request() {
    let out = tempfile::tempdir().unwrap();
    let mut cfg = config(out.path());
    cfg.emit_intermediate = false;
    run_all(&cfg);
    assert!(!out.path().join("line_sentiment.csv").exists());
    assert!(!out.path().join("line_pos.csv").exists());
    cfg.emit_intermediate = true;
    run(Command::Analyze, &cfg).unwrap();
    assert!(out.path().join("line_sentiment.csv").exists());
    assert!(out.path().join("line_pos.csv").exists());
}

#[test]
fn single_class_names_fail_training_with_code_three() {
    let dir = tempfile::tempdir().unwrap();
    let names = dir.path().join("names.csv");
    std::fs::write(&names, "name,gender\nanna,F\nbella,F\nclara,F\n").unwrap();
    let mut cfg = config(dir.path());
    cfg.names = Some(names);
    let err = run(Command::TrainGender, &cfg).unwrap_err();
    assert!(matches!(err, PipelineError::Training(_)));
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn pca_needs_three_complete_rows() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("features.csv"),
        "movie_id,a,b\nm1,1.000000,2.000000\nm2,2.000000,1.000000\nm3,NA,3.000000\n",
    )
    .unwrap();
    let err = run(Command::Pca, &config(dir.path())).unwrap_err();
    assert_eq!(err.exit_code(), 4);
}

#[test]
fn uncorrelated_table_is_flagged_as_having_no_structure() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("features.csv"),
        "movie_id,a,b\nm1,1,1\nm2,1,-1\nm3,-1,1\nm4,-1,-1\n",
    )
    .unwrap();
    let cfg = config(dir.path());
    run(Command::Pca, &cfg).unwrap();
    let adequacy = read(dir.path(), "pca_adequacy.csv");
    assert!(adequacy.contains("no_structure,true"), "{adequacy}");
    let variance = read(dir.path(), "pca_variance.csv");
    assert!(variance.trim_end().ends_with(",100.000000"));
    let first = std::fs::read(dir.path().join("pca_variance.csv")).unwrap();
    run(Command::Pca, &cfg).unwrap();
    assert_eq!(
        first,
        std::fs::read(dir.path().join("pca_variance.csv")).unwrap()
    );
}

#[test]
fn bechdel_and_report_commands_rewrite_their_tables() {
    let out = tempfile::tempdir().unwrap();
    let cfg = config(out.path());
    run_all(&cfg);
    let bechdel = read(out.path(), "bechdel.csv");
    let ratios = read(out.path(), "dialogue_pos_ratios.csv");
    std::fs::remove_file(out.path().join("bechdel.csv")).unwrap();
    std::fs::remove_file(out.path().join("dialogue_pos_ratios.csv")).unwrap();
    run(Command::Bechdel, &cfg).unwrap();
    run(Command::Report, &cfg).unwrap();
    assert_eq!(read(out.path(), "bechdel.csv"), bechdel);
    assert_eq!(read(out.path(), "dialogue_pos_ratios.csv"), ratios);
}

#[test]
fn stale_cache_format_triggers_reingestion() {
    let out = tempfile::tempdir().unwrap();
    let cfg = config(out.path());
    run_all(&cfg);
    let features = read(out.path(), "features.csv");
    std::fs::write(
        out.path().join("bundles.json"),
        "{\"format\":\"femrep-bundles/0\"}",
    )
    .unwrap();
    run(Command::Analyze, &cfg).unwrap();
    assert_eq!(read(out.path(), "features.csv"), features);
}
