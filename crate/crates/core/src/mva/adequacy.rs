use super::{chi_square_sf, eigen, CorrelationMatrix, Matrix, MvaError, DEFAULT_TOLERANCE};

/// Smallest eigenvalue treated as non-singular.
const SINGULAR_EIGENVALUE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Kmo {
    pub value: f64,
    /// All off-diagonal correlations are zero; `value` is then reported as 0.
    pub no_correlation: bool,
}

/// Kaiser-Meyer-Olkin sampling adequacy, with partial correlations taken from
/// the inverse correlation matrix.
pub fn kmo(s: &CorrelationMatrix) -> Result<Kmo, MvaError> {
    let p = s.p();
    let sys = eigen(&s.s, DEFAULT_TOLERANCE)?;
    let smallest = sys.values.last().copied().unwrap_or(0.0);
    if smallest <= SINGULAR_EIGENVALUE {
        return Err(MvaError::Singular(smallest));
    }
    let mut q = Matrix::zeros(p, p);
    for (k, &lambda) in sys.values.iter().enumerate() {
        for i in 0..p {
            for j in 0..p {
                q[(i, j)] += sys.vectors[(i, k)] * sys.vectors[(j, k)] / lambda;
            }
        }
    }
    let (mut r2, mut q2) = (0.0, 0.0);
    for i in 0..p {
        for j in 0..p {
            if i == j {
                continue;
            }
            r2 += s.s[(i, j)].powi(2);
            let partial = -q[(i, j)] / (q[(i, i)] * q[(j, j)]).sqrt();
            q2 += partial * partial;
        }
    }
    if r2 == 0.0 {
        return Ok(Kmo {
            value: 0.0,
            no_correlation: true,
        });
    }
    Ok(Kmo {
        value: r2 / (r2 + q2),
        no_correlation: false,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bartlett {
    pub chi2: f64,
    pub df: usize,
    pub p_value: f64,
}

/// `ln det S` from a Cholesky factorization; `None` if `S` is not positive definite.
fn ln_det(s: &Matrix) -> Option<f64> {
    let p = s.rows();
    let mut l = Matrix::zeros(p, p);
    let mut acc = 0.0;
    for j in 0..p {
        let mut d = s[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > 0.0) {
            return None;
        }
        let ljj = d.sqrt();
        l[(j, j)] = ljj;
        acc += 2.0 * ljj.ln();
        for i in (j + 1)..p {
            let mut v = s[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = v / ljj;
        }
    }
    Some(acc)
}

/// Bartlett's test that the correlation matrix is the identity.
pub fn bartlett(s: &CorrelationMatrix) -> Result<Bartlett, MvaError> {
    let p = s.p();
    let n = s.n;
    if n <= p {
        return Err(MvaError::TooFewObservations {
            needed: p + 1,
            found: n,
        });
    }
    let ln_det = ln_det(&s.s).ok_or(MvaError::NonPositiveDeterminant)?;
    let factor = (n - 1) as f64 - (2 * p + 5) as f64 / 6.0;
    let raw = -factor * ln_det;
    let chi2 = if raw > 0.0 { raw } else { 0.0 };
    let df = p * (p - 1) / 2;
    let p_value = if df == 0 {
        1.0
    } else {
        chi_square_sf(chi2, df as f64)
    };
    Ok(Bartlett { chi2, df, p_value })
}
