//! Correlation-matrix principal component analysis with sampling-adequacy
//! diagnostics.

mod adequacy;
mod eigen;
mod gamma;
mod matrix;
mod pca;
mod stats;

pub use adequacy::{bartlett, kmo, Bartlett, Kmo};
pub use eigen::{eigen, EigenSystem, DEFAULT_TOLERANCE, MAX_SWEEPS};
pub use gamma::{chi_square_sf, ln_gamma, regularized_gamma_p, regularized_gamma_q};
pub use matrix::Matrix;
pub use pca::{
    loadings, retain, run_pca, variance_table, PcaOptions, PcaReport, RetentionRule, VarianceRow,
};
pub use stats::{correlation, standardize, CorrelationMatrix, Standardized};

use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum MvaError {
    #[error("need at least {needed} observations, found {found}")]
    TooFewObservations { needed: usize, found: usize },
    #[error("column {0} has zero variance")]
    ZeroVariance(String),
    #[error("correlation matrix is singular; remove a redundant variable or add observations")]
    Singular(f64),
    #[error("correlation matrix determinant is not positive")]
    NonPositiveDeterminant,
    #[error("Jacobi iteration did not converge in {0} sweeps")]
    NoConvergence(usize),
    #[error("invalid retention rule {0:?}")]
    BadRule(String),
}
