use std::fmt;
use std::str::FromStr;

use super::{
    bartlett, correlation, eigen, kmo, standardize, Bartlett, CorrelationMatrix, EigenSystem, Kmo,
    Matrix, MvaError, Standardized, DEFAULT_TOLERANCE,
};
use crate::features::FeatureMatrix;
use crate::fmt::{csv_string, fixed6};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VarianceRow {
    pub eigenvalue: f64,
    pub percent: f64,
    pub cumulative: f64,
}

/// Percent of total variance per component and the running total.
/// Negative eigenvalues (rounding noise) count as zero.
pub fn variance_table(eigenvalues: &[f64]) -> Vec<VarianceRow> {
    let clamped: Vec<f64> = eigenvalues.iter().map(|&l| l.max(0.0)).collect();
    let total: f64 = clamped.iter().sum();
    let mut cumulative = 0.0;
    clamped
        .into_iter()
        .map(|eigenvalue| {
            let percent = if total > 0.0 {
                100.0 * eigenvalue / total
            } else {
                0.0
            };
            cumulative += percent;
            VarianceRow {
                eigenvalue,
                percent,
                cumulative,
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RetentionRule {
    /// Eigenvalues strictly greater than one.
    Kaiser,
    /// Smallest count whose cumulative variance reaches the fraction.
    Cumulative(f64),
    Fixed(usize),
}

impl Default for RetentionRule {
    fn default() -> Self {
        RetentionRule::Kaiser
    }
}

impl FromStr for RetentionRule {
    type Err = MvaError;

    /// `kaiser`, `cumulative:0.7` or `fixed:4`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || MvaError::BadRule(s.to_owned());
        let s = s.trim();
        match s.split_once(':') {
            None if s.eq_ignore_ascii_case("kaiser") => Ok(RetentionRule::Kaiser),
            Some((kind, arg)) if kind.eq_ignore_ascii_case("cumulative") => {
                let t: f64 = arg.trim().parse().map_err(|_| bad())?;
                if t > 0.0 && t <= 1.0 {
                    Ok(RetentionRule::Cumulative(t))
                } else {
                    Err(bad())
                }
            }
            Some((kind, arg)) if kind.eq_ignore_ascii_case("fixed") => arg
                .trim()
                .parse()
                .map(RetentionRule::Fixed)
                .map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for RetentionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RetentionRule::Kaiser => write!(f, "kaiser"),
            RetentionRule::Cumulative(t) => write!(f, "cumulative:{t}"),
            RetentionRule::Fixed(k) => write!(f, "fixed:{k}"),
        }
    }
}

/// Number of leading components to keep; `eigenvalues` must be descending.
pub fn retain(eigenvalues: &[f64], rule: RetentionRule) -> usize {
    let p = eigenvalues.len();
    match rule {
        RetentionRule::Kaiser => eigenvalues.iter().filter(|&&l| l > 1.0).count(),
        RetentionRule::Cumulative(t) => variance_table(eigenvalues)
            .iter()
            .position(|r| r.cumulative >= 100.0 * t - 1e-9)
            .map_or(p, |i| i + 1),
        RetentionRule::Fixed(k) => k.min(p),
    }
}

/// Eigenvector entries scaled by the square root of their eigenvalue; `p × k`.
pub fn loadings(system: &EigenSystem, k: usize) -> Matrix {
    let p = system.values.len();
    let k = k.min(p);
    let mut out = Matrix::zeros(p, k);
    for j in 0..k {
        let scale = system.values[j].max(0.0).sqrt();
        for i in 0..p {
            out[(i, j)] = system.vectors[(i, j)] * scale;
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PcaOptions {
    pub rule: RetentionRule,
    pub tolerance: f64,
    /// Minimum absolute loading for a variable to name a component.
    pub label_threshold: f64,
}

impl Default for PcaOptions {
    fn default() -> Self {
        PcaOptions {
            rule: RetentionRule::Kaiser,
            tolerance: DEFAULT_TOLERANCE,
            label_threshold: 0.55,
        }
    }
}

/// Everything computed by [`run_pca`].
#[derive(Clone, Debug)]
pub struct PcaReport {
    pub variables: Vec<String>,
    pub movie_ids: Vec<String>,
    pub standardized: Standardized,
    pub correlation: CorrelationMatrix,
    pub kmo: Result<Kmo, MvaError>,
    pub bartlett: Result<Bartlett, MvaError>,
    pub eigen: EigenSystem,
    pub variance: Vec<VarianceRow>,
    pub options: PcaOptions,
    pub retained: usize,
    pub loadings: Matrix,
    /// Component scores, `n × retained`.
    pub scores: Matrix,
    /// Per retained component, the variables loading at or above the threshold.
    pub component_labels: Vec<Vec<String>>,
}

impl PcaReport {
    /// No correlations at all, or nothing retained.
    pub fn no_structure(&self) -> bool {
        self.retained == 0 || self.kmo.as_ref().is_ok_and(|k| k.no_correlation)
    }

    /// KMO above 0.5 and Bartlett significant at 5%, when both are available.
    pub fn suitable(&self) -> Option<bool> {
        match (&self.kmo, &self.bartlett) {
            (Ok(k), Ok(b)) => Some(k.value > 0.5 && b.p_value < 0.05),
            _ => None,
        }
    }

    fn component_names(&self) -> Vec<String> {
        (1..=self.retained).map(|j| format!("PC{j}")).collect()
    }

    pub fn adequacy_csv(&self) -> String {
        let na = || "NA".to_string();
        let mut rows = vec![vec!["measure".to_string(), "value".to_string()]];
        let mut push = |k: &str, v: String| rows.push(vec![k.to_string(), v]);
        match &self.kmo {
            Ok(k) => push("kmo", fixed6(k.value)),
            Err(e) => {
                push("kmo", na());
                push("kmo_unavailable", e.to_string());
            }
        }
        match &self.bartlett {
            Ok(b) => {
                push("bartlett_chi_square", fixed6(b.chi2));
                push("bartlett_df", b.df.to_string());
                push("bartlett_p_value", fixed6(b.p_value));
            }
            Err(e) => {
                push("bartlett_chi_square", na());
                push(
                    "bartlett_df",
                    (self.variables.len() * self.variables.len().saturating_sub(1) / 2).to_string(),
                );
                push("bartlett_p_value", na());
                push("bartlett_unavailable", e.to_string());
            }
        }
        push("observations", self.correlation.n.to_string());
        push("variables", self.variables.len().to_string());
        push("retention_rule", self.options.rule.to_string());
        push("retained_components", self.retained.to_string());
        push(
            "suitable",
            self.suitable().map_or_else(na, |b| b.to_string()),
        );
        push("no_structure", self.no_structure().to_string());
        csv_string(rows)
    }

    pub fn variance_csv(&self) -> String {
        let header = [
            "component",
            "eigenvalue",
            "percent_of_variance",
            "cumulative_percent",
        ]
        .map(String::from);
        let rows = self.variance.iter().enumerate().map(|(j, r)| {
            vec![
                format!("PC{}", j + 1),
                fixed6(r.eigenvalue),
                fixed6(r.percent),
                fixed6(r.cumulative),
            ]
        });
        csv_string(std::iter::once(header.to_vec()).chain(rows))
    }

    pub fn scree_csv(&self) -> String {
        let header = ["component", "eigenvalue", "percent_of_variance"].map(String::from);
        let rows = self
            .variance
            .iter()
            .enumerate()
            .map(|(j, r)| vec![(j + 1).to_string(), fixed6(r.eigenvalue), fixed6(r.percent)]);
        csv_string(std::iter::once(header.to_vec()).chain(rows))
    }

    pub fn loadings_csv(&self) -> String {
        let mut header = vec!["variable".to_string()];
        header.extend(self.component_names());
        let rows = self.variables.iter().enumerate().map(|(i, v)| {
            let mut row = vec![v.clone()];
            row.extend(self.loadings.row(i).iter().map(|&x| fixed6(x)));
            row
        });
        csv_string(std::iter::once(header).chain(rows))
    }

    pub fn scores_csv(&self) -> String {
        let mut header = vec!["movie_id".to_string()];
        header.extend(self.component_names());
        let rows = self.movie_ids.iter().enumerate().map(|(i, id)| {
            let mut row = vec![id.clone()];
            row.extend(self.scores.row(i).iter().map(|&x| fixed6(x)));
            row
        });
        csv_string(std::iter::once(header).chain(rows))
    }

    pub fn component_labels_csv(&self) -> String {
        let header = ["component", "variables"].map(String::from).to_vec();
        let rows = self
            .component_labels
            .iter()
            .enumerate()
            .map(|(j, vars)| vec![format!("PC{}", j + 1), vars.join(";")]);
        csv_string(std::iter::once(header).chain(rows))
    }
}

/// Standardize, correlate, test adequacy, decompose, retain and load.
///
/// KMO and Bartlett failures (singular matrix, too few rows) are recorded in
/// the report rather than aborting the analysis.
pub fn run_pca(matrix: &FeatureMatrix, options: PcaOptions) -> Result<PcaReport, MvaError> {
    let n = matrix.n_rows();
    if n < 3 {
        return Err(MvaError::TooFewObservations {
            needed: 3,
            found: n,
        });
    }
    let x = Matrix::from_rows(&matrix.rows);
    let standardized = standardize(&x).map_err(|e| match e {
        MvaError::ZeroVariance(j) => {
            let name = j
                .parse::<usize>()
                .ok()
                .and_then(|j| matrix.columns.get(j))
                .cloned();
            MvaError::ZeroVariance(name.unwrap_or(j))
        }
        other => other,
    })?;
    let corr = correlation(&standardized.z);
    let kmo = kmo(&corr);
    let bartlett = bartlett(&corr);
    let eigen = eigen(&corr.s, options.tolerance)?;
    let variance = variance_table(&eigen.values);
    let retained = retain(&eigen.values, options.rule);
    let loadings = loadings(&eigen, retained);
    let scores = standardized
        .z
        .matmul(&eigen.vectors.leading_columns(retained));
    let component_labels = (0..retained)
        .map(|j| {
            matrix
                .columns
                .iter()
                .enumerate()
                .filter(|(i, _)| loadings[(*i, j)].abs() >= options.label_threshold)
                .map(|(_, c)| c.clone())
                .collect()
        })
        .collect();
    Ok(PcaReport {
        variables: matrix.columns.clone(),
        movie_ids: matrix.movie_ids.clone(),
        standardized,
        correlation: corr,
        kmo,
        bartlett,
        eigen,
        variance,
        options,
        retained,
        loadings,
        scores,
        component_labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const PUBLISHED_EIGENVALUES: [f64; 10] = [
        2.970, 1.641, 1.406, 1.034, 0.915, 0.734, 0.522, 0.474, 0.210, 0.093,
    ];

    #[test]
    fn variance_percentages() {
        let t = variance_table(&[1.0, 1.0]);
        assert_eq!((t[0].percent, t[1].cumulative), (50.0, 100.0));
        assert_eq!(variance_table(&[3.0])[0].cumulative, 100.0);
        let t = variance_table(&[2.0, 1.0, -1e-12]);
        assert_eq!(t[2].eigenvalue, 0.0);
        assert_abs_diff_eq!(t[2].cumulative, 100.0, epsilon = 1e-12);
    }

    #[test]
    fn retention_rules() {
        assert_eq!(retain(&PUBLISHED_EIGENVALUES, RetentionRule::Kaiser), 4);
        assert_eq!(retain(&PUBLISHED_EIGENVALUES, RetentionRule::Cumulative(0.70)), 4);
        assert_eq!(retain(&PUBLISHED_EIGENVALUES, RetentionRule::Fixed(20)), 10);
        assert_eq!(retain(&[1.0, 1.0, 1.0], RetentionRule::Kaiser), 0);
        assert_eq!(retain(&[1.0, 1.0], RetentionRule::Cumulative(1.0)), 2);
    }

    #[test]
    fn rule_parsing() {
        for s in ["kaiser", "cumulative:0.7", "fixed:3"] {
            assert_eq!(s.parse::<RetentionRule>().unwrap().to_string(), s);
        }
        assert!("cumulative:7".parse::<RetentionRule>().is_err());
        assert!("elbow".parse::<RetentionRule>().is_err());
    }

    #[test]
    fn loadings_of_two_by_two() {
        let s = Matrix::from_rows(&[vec![1.0, 0.5], vec![0.5, 1.0]]);
        let l = loadings(&eigen(&s, DEFAULT_TOLERANCE).unwrap(), 2);
        let c = 0.75f64.sqrt();
        assert_abs_diff_eq!(l[(0, 0)], c, epsilon = 1e-12);
        assert_abs_diff_eq!(l[(1, 0)], c, epsilon = 1e-12);
        assert_abs_diff_eq!(l[(0, 1)], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(l[(1, 1)], -0.5, epsilon = 1e-12);
        let id = loadings(&eigen(&Matrix::identity(3), DEFAULT_TOLERANCE).unwrap(), 3);
        assert_eq!(id, Matrix::identity(3));
    }

    fn fm(rows: Vec<Vec<f64>>) -> FeatureMatrix {
        FeatureMatrix {
            movie_ids: (0..rows.len()).map(|i| format!("m{i}")).collect(),
            columns: (0..rows[0].len()).map(|j| format!("v{j}")).collect(),
            rows,
        }
    }

    #[test]
    fn four_point_fixture() {
        let x = fm(vec![
            vec![1.0, 1.0],
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
            vec![-1.0, -1.0],
        ]);
        let r = run_pca(&x, PcaOptions::default()).unwrap();
        assert_abs_diff_eq!(
            r.correlation.s[(0, 1)],
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            r.eigen.values[0],
            1.0 + r.correlation.s[(0, 1)],
            epsilon = 1e-12
        );
        assert_eq!(r.retained, 1);
        assert_eq!(r.kmo.as_ref().unwrap().value, 0.5);
        let b = r.bartlett.unwrap();
        assert_eq!(b.df, 1);
    }

    #[test]
    fn uncorrelated_fixture_has_no_structure() {
        let x = fm(vec![
            vec![1.0, 1.0],
            vec![1.0, -1.0],
            vec![-1.0, 1.0],
            vec![-1.0, -1.0],
        ]);
        let r = run_pca(&x, PcaOptions::default()).unwrap();
        assert_eq!(r.retained, 0);
        assert!(r.no_structure());
        assert!(r.adequacy_csv().contains("no_structure,true"));
        assert_eq!(r.loadings_csv(), "variable\nv0\nv1\n");
        assert!(r.variance_csv().ends_with("100.000000\n"));
    }

    #[test]
    fn too_few_rows_and_constant_columns() {
        let two = fm(vec![vec![1.0, 2.0], vec![2.0, 1.0]]);
        assert_eq!(
            run_pca(&two, PcaOptions::default()).unwrap_err(),
            MvaError::TooFewObservations {
                needed: 3,
                found: 2
            }
        );
        let flat = fm(vec![vec![1.0, 2.0], vec![2.0, 2.0], vec![3.0, 2.0]]);
        assert_eq!(
            run_pca(&flat, PcaOptions::default()).unwrap_err(),
            MvaError::ZeroVariance("v1".into())
        );
    }
}
