//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use femrep::corpus::{BundleBuilder, Gender, MovieBundle};
use femrep::embedding::{embed_tokens, genre_tag_scores, GenreLimit, WordVectorStore};
use femrep::features::{bechdel_score, WordList};
use femrep::gender::{train, NamesDataset};
use femrep::mva::{
    bartlett, correlation, eigen, kmo, loadings, retain, standardize, variance_table,
    CorrelationMatrix, Matrix, RetentionRule, DEFAULT_TOLERANCE,
};
use femrep::pipeline::{run, Command, RunConfig};
use femrep::text::{normalize_score, sentiment, tokenize, SentimentConfig, SentimentLexicon};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_correlation(rng: &mut ChaCha8Rng, p: usize) -> Matrix {
    if rng.random_bool(0.5) {
        let n = p + rng.random_range(2..30);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..p).map(|_| rng.random_range(-5.0..5.0)).collect())
            .collect();
        correlation(&standardize(&Matrix::from_rows(&rows)).unwrap().z).s
    } else {
        let mut m = Matrix::identity(p);
        for i in 0..p {
            for j in 0..i {
                let r = rng.random_range(-0.95..0.95);
                m[(i, j)] = r;
                m[(j, i)] = r;
            }
        }
        m
    }
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    let (mut trace_err, mut ortho_err, mut recon_err) = (0.0f64, 0.0f64, 0.0f64);
    for k in 0..1000 {
        let p = 2 + k % 9;
        let s = random_correlation(&mut rng, p);
        let e = eigen(&s, DEFAULT_TOLERANCE).map_err(|e| e.to_string())?;
        trace_err = trace_err.max((e.values.iter().sum::<f64>() - p as f64).abs());
        let vtv = e.vectors.transpose().matmul(&e.vectors);
        ortho_err = ortho_err.max(vtv.max_abs_diff(&Matrix::identity(p)));
        recon_err = recon_err.max(e.reconstruct().max_abs_diff(&s));
    }
    let elapsed = start.elapsed();
    check(
        trace_err <= 1e-8 && ortho_err <= 1e-10 && recon_err <= 1e-10 && elapsed < Duration::from_secs(10),
        format!(
            "1000 matrices, p 2..10: trace {trace_err:.1e}, orthonormality {ortho_err:.1e}, reconstruction {recon_err:.1e}, {:.2} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_2() -> Outcome {
    let s = Matrix::from_rows(&[vec![1.0, 0.5], vec![0.5, 1.0]]);
    let e = eigen(&s, DEFAULT_TOLERANCE).map_err(|e| e.to_string())?;
    let l = loadings(&e, 2);
    let lam_err = (e.values[0] - 1.5).abs().max((e.values[1] - 0.5).abs());
    let c = 0.75f64.sqrt();
    let load_err = [
        (l[(0, 0)].abs(), c),
        (l[(1, 0)].abs(), c),
        (l[(0, 1)].abs(), 0.5),
        (l[(1, 1)].abs(), 0.5),
    ]
    .iter()
    .map(|(g, w)| (g - w).abs())
    .fold(0.0, f64::max);
    let pattern = l[(0, 0)] * l[(1, 0)] > 0.0 && l[(0, 1)] * l[(1, 1)] < 0.0;
    check(
        lam_err <= 1e-9 && load_err <= 1e-9 && pattern,
        format!(
            "eigenvalues ({:.9}, {:.9}), loadings [[{:.6}, {:.6}], [{:.6}, {:.6}]]",
            e.values[0],
            e.values[1],
            l[(0, 0)],
            l[(0, 1)],
            l[(1, 0)],
            l[(1, 1)]
        ),
    )
}

fn criterion_3() -> Outcome {
    let id = bartlett(&CorrelationMatrix::from_matrix(Matrix::identity(4), 50))
        .map_err(|e| e.to_string())?;
    let two = Matrix::from_rows(&[vec![1.0, 0.5], vec![0.5, 1.0]]);
    let b = bartlett(&CorrelationMatrix::from_matrix(two, 100)).map_err(|e| e.to_string())?;
    let want = -97.5 * 0.75f64.ln();
    let mut df_ok = true;
    for p in 2..=12 {
        let r = bartlett(&CorrelationMatrix::from_matrix(Matrix::identity(p), 100))
            .map_err(|e| e.to_string())?;
        df_ok &= r.df == p * (p - 1) / 2;
    }
    check(
        id.chi2 == 0.0 && id.p_value == 1.0 && (b.chi2 - want).abs() <= 1e-6 && b.df == 1 && df_ok,
        format!(
            "identity chi2 {} p {}; r 0.5 n 100 chi2 {:.9} vs {want:.9}; df = p(p-1)/2 for p 2..12: {df_ok}",
            id.chi2, id.p_value, b.chi2
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for k in -999i32..=999 {
        if k == 0 {
            continue;
        }
        let r = f64::from(k) / 1000.0;
        let s = Matrix::from_rows(&[vec![1.0, r], vec![r, 1.0]]);
        let v = kmo(&CorrelationMatrix::from_matrix(s, 30))
            .map_err(|e| e.to_string())?
            .value;
        worst = worst.max((v - 0.5).abs());
        count += 1;
    }
    check(
        worst <= 1e-12,
        format!("{count} matrices with r in (-1, 1), r != 0: max |KMO - 0.5| = {worst:.1e}"),
    )
}

const PUBLISHED_EIGENVALUES: [f64; 10] = [
    2.970, 1.641, 1.406, 1.034, 0.915, 0.734, 0.522, 0.474, 0.210, 0.093,
];
const PUBLISHED_PERCENT: [f64; 10] = [
    29.703, 16.406, 14.059, 10.344, 9.153, 7.337, 5.223, 4.744, 2.103, 0.929,
];
const PUBLISHED_CUMULATIVE: [f64; 10] = [
    29.703, 46.109, 60.168, 70.513, 79.665, 87.002, 92.224, 96.968, 99.071, 100.000,
];

fn criterion_5() -> Outcome {
    let table = variance_table(&PUBLISHED_EIGENVALUES);
    let mut worst = (0.0f64, String::new());
    for (i, row) in table.iter().enumerate() {
        for (what, got, want) in [
            ("percent", row.percent, PUBLISHED_PERCENT[i]),
            ("cumulative", row.cumulative, PUBLISHED_CUMULATIVE[i]),
        ] {
            let err = (got - want).abs();
            if err > worst.0 {
                worst = (err, format!("PC{} {what} {got:.4} vs {want:.3}", i + 1));
            }
        }
    }
    let pc1 = table[0].percent;
    let pc4 = table[3].cumulative;
    check(
        worst.0 <= 1e-3,
        format!(
            "PC1 {pc1:.4} (29.703), PC4 cumulative {pc4:.4} (70.513); largest gap {:.4} at {}",
            worst.0, worst.1
        ),
    )
}

fn criterion_6() -> Outcome {
    let k = retain(&PUBLISHED_EIGENVALUES, RetentionRule::Kaiser);
    check(k == 4, format!("kaiser keeps {k} components"))
}

fn criterion_7() -> Outcome {
    let direct = normalize_score(-2.4, 15.0);
    let lexicon: SentimentLexicon = [("awfully", -2.0), ("hard", -0.4)].into_iter().collect();
    let via_text = sentiment("It was awfully hard", &lexicon, &SentimentConfig::default());
    let mut bounded = true;
    let mut monotone = true;
    let mut prev = f64::NEG_INFINITY;
    for i in 0..1000 {
        let x = -50.0 + 100.0 * f64::from(i) / 999.0;
        let y = normalize_score(x, 15.0);
        bounded &= y.abs() < 1.0;
        monotone &= y > prev;
        prev = y;
    }
    check(
        (direct + 0.527).abs() <= 5e-4 && (via_text.normalized + 0.527).abs() <= 5e-4 && bounded && monotone,
        format!(
            "x = -2.4 gives {direct:.6}; lexicon text gives x = {:.3}, {:.6}; bounded {bounded}, monotone {monotone} over 1000 points",
            via_text.raw_sum, via_text.normalized
        ),
    )
}

fn cos(u: &[f64], v: &[f64]) -> f64 {
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nv = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    (dot / (nu * nv)).clamp(-1.0, 1.0)
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let words = ["alpha", "beta", "gamma", "delta", "omega"];
    let genre_names = ["drama", "comedy", "horror", "western"];
    let mut worst = 0.0f64;
    let mut fixtures = 0;
    let mut rejected = 0;
    for _ in 0..2000 {
        let dim = rng.random_range(2..=3);
        let mut pairs = Vec::new();
        let mut raw: std::collections::HashMap<&str, Vec<f64>> = Default::default();
        for w in words.iter().chain(&genre_names) {
            if rng.random_bool(0.15) {
                continue; // out of vocabulary
            }
            let v: Vec<f32> = loop {
                let v: Vec<f32> = (0..dim)
                    .map(|_| rng.random_range(-3i32..=3) as f32)
                    .collect();
                if v.iter().any(|x| *x != 0.0) {
                    break v;
                }
            };
            raw.insert(w, v.iter().map(|x| f64::from(*x)).collect());
            pairs.push((*w, v));
        }
        let store = WordVectorStore::from_pairs(dim, pairs).unwrap();
        let genres: Vec<&str> = (0..rng.random_range(1..=4))
            .map(|i| genre_names[i])
            .collect();
        let mut b = BundleBuilder::new("m", "t", 2000).genres(&genres);
        let speakers = [
            ("f1", Gender::Female),
            ("f2", Gender::Female),
            ("m1", Gender::Male),
            ("u1", Gender::Unknown),
        ];
        for (id, g) in speakers {
            b = b.character(id, id, g);
        }
        let n_lines = rng.random_range(1..=5);
        for i in 0..n_lines {
            let who = speakers[rng.random_range(0..4)].0;
            let text: Vec<&str> = (0..rng.random_range(1..=4))
                .map(|_| words[rng.random_range(0..5)])
                .collect();
            b = b.line(&format!("L{i}"), who, &text.join(" "));
        }
        let bundle: MovieBundle = b.build();

        // Brute force: genre vectors, per-line means, then the nested sums.
        let genre_vecs: Vec<(&str, &Vec<f64>)> = genres
            .iter()
            .filter_map(|g| raw.get(g).map(|v| (*g, v)))
            .take(3)
            .collect();
        let embeddings: Vec<_> = bundle
            .lines
            .iter()
            .map(|l| embed_tokens(&tokenize(&l.text), &store))
            .collect();
        let result = genre_tag_scores(&bundle, &embeddings, &store, GenreLimit::First(3));
        if genre_vecs.is_empty() {
            if result.is_ok() {
                return Err("scores produced without any genre embedding".into());
            }
            continue;
        }
        // A counted line whose mean embedding is the zero vector leaves the
        // similarity undefined, so the whole movie must be rejected.
        let mut expected = Vec::new();
        let mut undefined = false;
        for gender in [Gender::Female, Gender::Male] {
            let mut per_genre = vec![0.0; genre_vecs.len()];
            let mut lines = 0usize;
            for line in &bundle.lines {
                let speaker = bundle
                    .characters
                    .iter()
                    .find(|c| c.character_id == line.character_id)
                    .unwrap();
                if speaker.gender != gender {
                    continue;
                }
                let in_vocab: Vec<&Vec<f64>> =
                    line.text.split(' ').filter_map(|w| raw.get(w)).collect();
                if in_vocab.is_empty() {
                    continue;
                }
                let mut mean = vec![0.0; dim];
                for v in &in_vocab {
                    for d in 0..dim {
                        mean[d] += v[d];
                    }
                }
                if mean.iter().all(|m| *m == 0.0) {
                    undefined = true;
                }
                for m in &mut mean {
                    *m /= in_vocab.len() as f64;
                }
                lines += 1;
                for (g, (_, gv)) in genre_vecs.iter().enumerate() {
                    per_genre[g] += cos(gv, &mean);
                }
            }
            expected.push((per_genre, lines));
        }
        let scores = match (result, undefined) {
            (Err(_), true) => {
                rejected += 1;
                continue;
            }
            (Ok(_), true) => return Err("a zero mean embedding was scored".into()),
            (Err(e), false) => return Err(e.to_string()),
            (Ok(s), false) => s,
        };
        fixtures += 1;
        for ((per_genre, lines), side) in expected.into_iter().zip([&scores.female, &scores.male]) {
            match side {
                None if lines == 0 => {}
                None => return Err(format!("side missing with {lines} lines")),
                Some(s) => {
                    let total: f64 = per_genre.iter().sum();
                    worst = worst.max((s.total - total).abs());
                    worst = worst.max((s.score - total / lines as f64).abs());
                    for (a, b) in s.per_genre.iter().zip(&per_genre) {
                        worst = worst.max((a - b / lines as f64).abs());
                    }
                    if s.lines != lines {
                        return Err(format!("line count {} vs {lines}", s.lines));
                    }
                }
            }
        }
    }
    check(
        worst <= 1e-12 && fixtures > 1000 && rejected > 0,
        format!(
            "{fixtures} random fixtures: max deviation from nested-loop sums {worst:.1e}; {rejected} with a zero line embedding rejected"
        ),
    )
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let names = NamesDataset::bundled();
    let model = train(&names.examples, 0.9, 7).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let (tr, te) = (model.train_accuracy(), model.test_accuracy());
    check(
        te >= 0.80 && tr >= te - 0.02 && elapsed < Duration::from_secs(300),
        format!(
            "{} names, held-out {te:.4}, training {tr:.4}, {:.1} s",
            names.examples.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_10() -> Outcome {
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/tiny");
    let files = [
        "features.csv",
        "bechdel.csv",
        "pca_adequacy.csv",
        "pca_variance.csv",
        "pca_loadings.csv",
        "pca_scree.csv",
        "pca_scores.csv",
    ];
    let mut runs = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let mut cfg =
            RunConfig::load(Some(&fixture.join("run.toml"))).map_err(|e| e.to_string())?;
        cfg.output = dir.path().to_path_buf();
        for c in [
            Command::Ingest,
            Command::TrainGender,
            Command::Analyze,
            Command::Pca,
        ] {
            run(c, &cfg).map_err(|e| format!("{c}: {e}"))?;
        }
        let contents: Vec<Vec<u8>> = files
            .iter()
            .map(|f| std::fs::read(dir.path().join(f)).unwrap())
            .collect();
        runs.push(contents);
    }
    for (i, f) in files.iter().enumerate() {
        let golden = std::fs::read(fixture.join("golden").join(f)).map_err(|e| e.to_string())?;
        if runs[0][i] != golden || runs[1][i] != golden {
            return Err(format!("{f} differs from its golden file"));
        }
    }
    Ok(format!(
        "{} files byte-identical to golden on two runs",
        files.len()
    ))
}

fn criterion_11() -> Outcome {
    let male = WordList::male_reference();
    let blocklist = WordList::named_blocklist();
    let two_women = |text: &str| {
        BundleBuilder::new("m", "t", 2000)
            .character("a", "ALICE", Gender::Female)
            .character("b", "BETTY", Gender::Female)
            .character("c", "CARL", Gender::Male)
            .line("L1", "a", "Did you finish the book?")
            .line("L2", "b", text)
            .conversation("a", "b", &["L1", "L2"])
            .build()
    };
    let passing = two_women("Yes, the ending was wonderful.");
    let pronoun = two_women("Yes, but he told me the ending.");
    let one_named = BundleBuilder::new("m", "t", 2000)
        .character("a", "ALICE", Gender::Female)
        .character("w", "WAITRESS", Gender::Female)
        .line("L1", "a", "Is the kitchen still open?")
        .line("L2", "w", "Until ten tonight.")
        .conversation("a", "w", &["L1", "L2"])
        .build();
    let got = [
        bechdel_score(&passing, &male, &blocklist).flags(),
        bechdel_score(&pronoun, &male, &blocklist).flags(),
        bechdel_score(&one_named, &male, &blocklist).flags(),
    ];
    let want = [(true, true, true), (true, true, false), (false, true, true)];
    check(got == want, format!("flags {got:?}, expected {want:?}"))
}

fn criterion_12() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let n = 40;
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let (f1, f2): (f64, f64) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            (0..10)
                .map(|j| {
                    let load = if j < 5 { f1 } else { f2 };
                    load * (1.0 + j as f64 / 10.0) + rng.random_range(-0.7..0.7)
                })
                .collect()
        })
        .collect();
    let analyse = |rows: &[Vec<f64>]| {
        let s = correlation(&standardize(&Matrix::from_rows(rows)).unwrap().z);
        let e = eigen(&s.s, DEFAULT_TOLERANCE).unwrap();
        let l = loadings(&e, 10);
        (
            e.values.clone(),
            kmo(&s).unwrap().value,
            bartlett(&s).unwrap(),
            l,
        )
    };
    let base = analyse(&rows);
    let mut worst = 0.0f64;
    for col in 0..10 {
        let scaled: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .map(|(j, v)| if j == col { v * 7.3 } else { *v })
                    .collect()
            })
            .collect();
        let other = analyse(&scaled);
        for (a, b) in base.0.iter().zip(&other.0) {
            worst = worst.max((a - b).abs());
        }
        worst = worst.max((base.1 - other.1).abs());
        worst = worst.max((base.2.chi2 - other.2.chi2).abs());
        worst = worst.max((base.2.p_value - other.2.p_value).abs());
        for i in 0..10 {
            for j in 0..10 {
                worst = worst.max((base.3[(i, j)].abs() - other.3[(i, j)].abs()).abs());
            }
        }
    }
    check(
        worst <= 1e-10,
        format!(
            "40 x 10 matrix, each column scaled by 7.3 in turn: max change {worst:.1e} (KMO {:.4})",
            base.1
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("eigen engine on random correlation matrices", criterion_1),
        ("closed-form 2x2 eigenpairs and loadings", criterion_2),
        ("Bartlett sphericity", criterion_3),
        ("KMO of 2x2 matrices", criterion_4),
        ("variance table on the published eigenvalues", criterion_5),
        ("Kaiser retention on the published eigenvalues", criterion_6),
        ("sentiment normalization", criterion_7),
        ("genre scoring against brute force", criterion_8),
        ("gender model on the bundled names", criterion_9),
        ("end-to-end golden run", criterion_10),
        ("Bechdel flag triples", criterion_11),
        ("scale invariance of the PCA statistics", criterion_12),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
