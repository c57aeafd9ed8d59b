use serde::{Deserialize, Serialize};

use super::{FeatureError, MovieFeatureVector, COLUMN_NAMES};

/// Complete rows only, in input order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    pub movie_ids: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl FeatureMatrix {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }
}

/// A movie left out of the matrix and the columns it lacked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureExclusion {
    pub movie_id: String,
    pub missing: Vec<String>,
}

/// Keeps rows with every value present. Extra columns are taken from the
/// first vector; all vectors are expected to carry the same extras.
pub fn assemble_matrix(
    vectors: &[MovieFeatureVector],
) -> Result<(FeatureMatrix, Vec<FeatureExclusion>), FeatureError> {
    let mut columns: Vec<String> = COLUMN_NAMES.iter().map(|s| s.to_string()).collect();
    if let Some(first) = vectors.first() {
        columns.extend(first.extras.iter().map(|(n, _)| n.clone()));
    }
    let mut matrix = FeatureMatrix {
        movie_ids: Vec::new(),
        columns,
        rows: Vec::new(),
    };
    let mut exclusions = Vec::new();
    for v in vectors {
        let missing = v.missing();
        if !missing.is_empty() {
            exclusions.push(FeatureExclusion {
                movie_id: v.movie_id.clone(),
                missing,
            });
            continue;
        }
        let row: Vec<f64> = v
            .values()
            .into_iter()
            .chain(v.extras.iter().map(|(_, x)| *x))
            .flatten()
            .collect();
        debug_assert_eq!(row.len(), matrix.columns.len());
        matrix.movie_ids.push(v.movie_id.clone());
        matrix.rows.push(row);
    }
    if matrix.rows.len() < 2 {
        return Err(FeatureError::TooFewRows(matrix.rows.len()));
    }
    Ok((matrix, exclusions))
}
