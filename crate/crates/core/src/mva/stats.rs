use super::{Matrix, MvaError};

/// Z-scores plus the column means and sample standard deviations used.
#[derive(Clone, Debug, PartialEq)]
pub struct Standardized {
    pub z: Matrix,
    pub means: Vec<f64>,
    pub sds: Vec<f64>,
}

/// Centers each column and divides by its sample standard deviation (divisor `n - 1`).
pub fn standardize(x: &Matrix) -> Result<Standardized, MvaError> {
    let n = x.rows();
    if n < 2 {
        return Err(MvaError::TooFewObservations {
            needed: 2,
            found: n,
        });
    }
    let mut z = x.clone();
    let mut means = Vec::with_capacity(x.cols());
    let mut sds = Vec::with_capacity(x.cols());
    for j in 0..x.cols() {
        let col = x.column(j);
        let mean = col.iter().sum::<f64>() / n as f64;
        let ss: f64 = col.iter().map(|v| (v - mean) * (v - mean)).sum();
        let sd = (ss / (n - 1) as f64).sqrt();
        let scale = col.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !(sd > 1e-12 * scale.max(f64::MIN_POSITIVE)) {
            return Err(MvaError::ZeroVariance(j.to_string()));
        }
        for i in 0..n {
            z[(i, j)] = (x[(i, j)] - mean) / sd;
        }
        means.push(mean);
        sds.push(sd);
    }
    Ok(Standardized { z, means, sds })
}

/// Symmetric, unit-diagonal correlation matrix and the sample size behind it.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationMatrix {
    pub s: Matrix,
    pub n: usize,
}

impl CorrelationMatrix {
    pub fn p(&self) -> usize {
        self.s.rows()
    }

    /// Wraps a matrix that is already a correlation matrix.
    pub fn from_matrix(s: Matrix, n: usize) -> Self {
        assert_eq!(s.rows(), s.cols(), "correlation matrix must be square");
        CorrelationMatrix { s, n }
    }
}

/// `ZᵀZ / (n - 1)` rescaled so the diagonal is exactly one.
pub fn correlation(z: &Matrix) -> CorrelationMatrix {
    let n = z.rows();
    let p = z.cols();
    let mut s = z.transpose().matmul(z);
    let denom = (n.max(2) - 1) as f64;
    for i in 0..p {
        for j in 0..p {
            s[(i, j)] /= denom;
        }
    }
    let diag: Vec<f64> = (0..p).map(|i| s[(i, i)].sqrt()).collect();
    for i in 0..p {
        for j in 0..i {
            let r = (s[(i, j)] / (diag[i] * diag[j])).clamp(-1.0, 1.0);
            s[(i, j)] = r;
            s[(j, i)] = r;
        }
        s[(i, i)] = 1.0;
    }
    CorrelationMatrix { s, n }
}
