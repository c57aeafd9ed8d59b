use super::{Matrix, MvaError};

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const MAX_SWEEPS: usize = 100;

/// Eigenvalues in descending order; column `j` of `vectors` pairs with `values[j]`.
/// Each eigenvector's largest-magnitude component is positive (the lowest index
/// wins among components equal within 1e-12).
#[derive(Clone, Debug, PartialEq)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl EigenSystem {
    pub fn vector(&self, j: usize) -> Vec<f64> {
        self.vectors.column(j)
    }

    /// `Σ λ_j e_j e_jᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        let p = self.values.len();
        let mut out = Matrix::zeros(p, p);
        for (k, &lambda) in self.values.iter().enumerate() {
            for i in 0..p {
                for j in 0..p {
                    out[(i, j)] += lambda * self.vectors[(i, k)] * self.vectors[(j, k)];
                }
            }
        }
        out
    }
}

fn off_diagonal_max(a: &Matrix) -> f64 {
    let p = a.rows();
    let mut m = 0.0f64;
    for i in 0..p {
        for j in (i + 1)..p {
            m = m.max(a[(i, j)].abs());
        }
    }
    m
}

/// Cyclic Jacobi rotations until every off-diagonal entry is below `tol`.
pub fn eigen(s: &Matrix, tol: f64) -> Result<EigenSystem, MvaError> {
    let p = s.rows();
    assert_eq!(p, s.cols(), "matrix must be square");
    let mut a = s.clone();
    let mut v = Matrix::identity(p);
    let mut converged = off_diagonal_max(&a) < tol;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        sweeps += 1;
        for i in 0..p {
            for j in (i + 1)..p {
                let aij = a[(i, j)];
                if aij == 0.0 {
                    continue;
                }
                let theta = (a[(j, j)] - a[(i, i)]) / (2.0 * aij);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..p {
                    let (aki, akj) = (a[(k, i)], a[(k, j)]);
                    a[(k, i)] = c * aki - sn * akj;
                    a[(k, j)] = sn * aki + c * akj;
                }
                for k in 0..p {
                    let (aik, ajk) = (a[(i, k)], a[(j, k)]);
                    a[(i, k)] = c * aik - sn * ajk;
                    a[(j, k)] = sn * aik + c * ajk;
                }
                a[(i, j)] = 0.0;
                a[(j, i)] = 0.0;
                for k in 0..p {
                    let (vki, vkj) = (v[(k, i)], v[(k, j)]);
                    v[(k, i)] = c * vki - sn * vkj;
                    v[(k, j)] = sn * vki + c * vkj;
                }
            }
        }
        converged = off_diagonal_max(&a) < tol;
    }
    if !converged {
        return Err(MvaError::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&x, &y| a[(y, y)].total_cmp(&a[(x, x)]));
    let values = order.iter().map(|&k| a[(k, k)]).collect();
    let mut vectors = Matrix::zeros(p, p);
    for (col, &k) in order.iter().enumerate() {
        let e = v.column(k);
        let peak = e.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let lead = e.iter().position(|x| x.abs() >= peak - 1e-12).unwrap_or(0);
        let sign = if e[lead] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..p {
            vectors[(i, col)] = sign * e[i];
        }
    }
    Ok(EigenSystem { values, vectors })
}
