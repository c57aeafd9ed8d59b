use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::str::FromStr;

use super::EmbeddingError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum VectorFormat {
    /// `count dim` header, then `word v1 .. vd` per line.
    #[default]
    Text,
    /// The same header, then each word, a space and `dim` little-endian `f32`s.
    Binary,
}

impl FromStr for VectorFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "text" | "txt" => Ok(VectorFormat::Text),
            "binary" | "bin" => Ok(VectorFormat::Binary),
            other => Err(format!("unknown vector format {other:?}")),
        }
    }
}

/// Lowercase word to vector. Immutable after loading.
#[derive(Clone, Debug, PartialEq)]
pub struct WordVectorStore {
    dim: usize,
    vectors: HashMap<String, Vec<f32>>,
}

impl WordVectorStore {
    /// Builds a store directly; later duplicates (after lowercasing) are ignored.
    pub fn from_pairs<'a>(
        dim: usize,
        pairs: impl IntoIterator<Item = (&'a str, Vec<f32>)>,
    ) -> Result<Self, EmbeddingError> {
        if dim == 0 {
            return Err(EmbeddingError::Header("dimension must be positive".into()));
        }
        let mut vectors = HashMap::new();
        for (row, (word, v)) in pairs.into_iter().enumerate() {
            if v.len() != dim {
                return Err(EmbeddingError::Dimension {
                    row: row + 1,
                    expected: dim,
                    found: v.len(),
                });
            }
            vectors.entry(word.to_lowercase()).or_insert(v);
        }
        Ok(WordVectorStore { dim, vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Case-insensitive lookup.
    pub fn get(&self, word: &str) -> Option<&[f32]> {
        match self.vectors.get(word) {
            Some(v) => Some(v),
            None => self.vectors.get(&word.to_lowercase()).map(Vec::as_slice),
        }
    }
}

/// A loaded store plus per-row notes about skipped or shadowed rows.
#[derive(Clone, Debug)]
pub struct LoadedVectors {
    pub store: WordVectorStore,
    pub diagnostics: Vec<String>,
}

fn parse_header(line: &str) -> Result<(usize, usize), EmbeddingError> {
    let mut parts = line.split_whitespace();
    let mut next = |what: &str| {
        parts
            .next()
            .and_then(|p| p.parse::<usize>().ok())
            .ok_or_else(|| EmbeddingError::Header(format!("missing or invalid {what} in {line:?}")))
    };
    let count = next("word count")?;
    let dim = next("dimension")?;
    if dim == 0 {
        return Err(EmbeddingError::Header("dimension must be positive".into()));
    }
    Ok((count, dim))
}

struct Builder {
    dim: usize,
    vectors: HashMap<String, Vec<f32>>,
    diagnostics: Vec<String>,
    rows: usize,
}

impl Builder {
    fn push(&mut self, word: &str, v: Vec<f32>) {
        self.rows += 1;
        let key = word.to_lowercase();
        if self.vectors.contains_key(&key) {
            self.diagnostics.push(format!(
                "row {}: duplicate word {word:?} ignored",
                self.rows
            ));
        } else {
            self.vectors.insert(key, v);
        }
    }
}

/// Reads a vector file. Every declared row must be present; rows with
/// unparseable numbers are skipped with a diagnostic.
pub fn load_vectors<R: Read>(
    reader: R,
    format: VectorFormat,
) -> Result<LoadedVectors, EmbeddingError> {
    let mut reader = BufReader::new(reader);
    let mut header = String::new();
    reader.read_line(&mut header)?;
    let (count, dim) = parse_header(&header)?;
    let mut b = Builder {
        dim,
        vectors: HashMap::with_capacity(count.min(1 << 20)),
        diagnostics: Vec::new(),
        rows: 0,
    };
    let mut seen = 0;
    match format {
        VectorFormat::Text => {
            for line in reader.lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                seen += 1;
                let mut parts = line.split_whitespace();
                let word = parts.next().unwrap_or_default();
                let values: Vec<&str> = parts.collect();
                if values.len() != b.dim {
                    return Err(EmbeddingError::Dimension {
                        row: seen,
                        expected: b.dim,
                        found: values.len(),
                    });
                }
                match values
                    .iter()
                    .map(|v| v.parse::<f32>())
                    .collect::<Result<Vec<_>, _>>()
                {
                    Ok(v) => b.push(word, v),
                    Err(_) => {
                        b.rows += 1;
                        b.diagnostics
                            .push(format!("row {seen}: unparseable value for {word:?}"));
                    }
                }
            }
        }
        VectorFormat::Binary => {
            let mut bytes = vec![0u8; 4 * dim];
            for _ in 0..count {
                let mut word = Vec::new();
                reader.read_until(b' ', &mut word)?;
                if word.last() != Some(&b' ') {
                    break;
                }
                word.pop();
                let word = String::from_utf8_lossy(&word)
                    .trim_start_matches('\n')
                    .to_owned();
                if let Err(e) = reader.read_exact(&mut bytes) {
                    if e.kind() == std::io::ErrorKind::UnexpectedEof {
                        break;
                    }
                    return Err(e.into());
                }
                seen += 1;
                let v = bytes
                    .chunks_exact(4)
                    .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
                    .collect();
                b.push(&word, v);
            }
            let mut rest = Vec::new();
            reader.read_to_end(&mut rest)?;
            if rest.iter().any(|&c| !c.is_ascii_whitespace()) {
                return Err(EmbeddingError::CountMismatch {
                    declared: count,
                    found: count + 1,
                });
            }
        }
    }
    if seen != count {
        return Err(EmbeddingError::CountMismatch {
            declared: count,
            found: seen,
        });
    }
    Ok(LoadedVectors {
        store: WordVectorStore {
            dim: b.dim,
            vectors: b.vectors,
        },
        diagnostics: b.diagnostics,
    })
}

/// Writes `(word, vector)` rows in the given format.
pub fn write_vectors<W: Write>(
    mut out: W,
    dim: usize,
    rows: &[(&str, Vec<f32>)],
    format: VectorFormat,
) -> std::io::Result<()> {
    writeln!(out, "{} {dim}", rows.len())?;
    for (word, v) in rows {
        match format {
            VectorFormat::Text => {
                write!(out, "{word}")?;
                for x in v {
                    write!(out, " {x}")?;
                }
                writeln!(out)?;
            }
            VectorFormat::Binary => {
                write!(out, "{word} ")?;
                for x in v {
                    out.write_all(&x.to_le_bytes())?;
                }
                writeln!(out)?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_text_file() {
        let text = "3 2\ncat 1 0\ndog 0 1\nThe 0.5 -0.5\n";
        let loaded = load_vectors(text.as_bytes(), VectorFormat::Text).unwrap();
        assert_eq!(loaded.store.len(), 3);
        assert_eq!(loaded.store.dim(), 2);
        assert_eq!(loaded.store.get("THE"), Some(&[0.5f32, -0.5][..]));
        assert!(loaded.diagnostics.is_empty());
    }

    #[test]
    fn short_file_is_an_error() {
        let text = "5 2\na 1 0\nb 0 1\nc 1 1\nd 2 2\n";
        assert!(matches!(
            load_vectors(text.as_bytes(), VectorFormat::Text),
            Err(EmbeddingError::CountMismatch {
                declared: 5,
                found: 4
            })
        ));
        assert!(matches!(
            load_vectors("1 3\na 1 0\n".as_bytes(), VectorFormat::Text),
            Err(EmbeddingError::Dimension { .. })
        ));
        assert!(matches!(
            load_vectors("x 3\n".as_bytes(), VectorFormat::Text),
            Err(EmbeddingError::Header(_))
        ));
    }

    #[test]
    fn first_duplicate_wins() {
        let text = "3 2\nApple 1 0\napple 0 1\nbad 1 x\n";
        let loaded = load_vectors(text.as_bytes(), VectorFormat::Text).unwrap();
        assert_eq!(loaded.store.get("apple"), Some(&[1.0f32, 0.0][..]));
        assert_eq!(loaded.store.len(), 1);
        assert_eq!(loaded.diagnostics.len(), 2);
    }

    #[test]
    fn binary_with_trailing_newlines() {
        let rows = vec![("cat", vec![1.0f32, 2.0]), ("dog", vec![-0.25, 3.5])];
        let mut buf = Vec::new();
        write_vectors(&mut buf, 2, &rows, VectorFormat::Binary).unwrap();
        let loaded = load_vectors(buf.as_slice(), VectorFormat::Binary).unwrap();
        assert_eq!(loaded.store.get("dog"), Some(&[-0.25f32, 3.5][..]));
        buf.truncate(buf.len() - 5);
        assert!(load_vectors(buf.as_slice(), VectorFormat::Binary).is_err());
    }

    proptest! {
        #[test]
        fn both_formats_round_trip(
            words in prop::collection::btree_set("[a-z]{1,6}", 1..8),
            dim in 1usize..5,
            seed in any::<u32>(),
        ) {
            let rows: Vec<(&str, Vec<f32>)> = words
                .iter()
                .enumerate()
                .map(|(i, w)| (w.as_str(), (0..dim).map(|j| ((seed as usize + i * 7 + j) % 13) as f32 / 4.0 - 1.5).collect()))
                .collect();
            for format in [VectorFormat::Text, VectorFormat::Binary] {
                let mut buf = Vec::new();
                write_vectors(&mut buf, dim, &rows, format).unwrap();
                let store = load_vectors(buf.as_slice(), format).unwrap().store;
                prop_assert_eq!(store.len(), rows.len());
                for (w, v) in &rows {
                    prop_assert_eq!(store.get(w), Some(v.as_slice()));
                }
            }
        }
    }
}
