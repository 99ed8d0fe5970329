//! Least squares via Householder QR.

use thiserror::Error;

/// Columns whose QR diagonal falls below this fraction of their own norm are
/// treated as linearly dependent on earlier columns.
const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("design is rank deficient; collinear columns: {0:?}")]
    Collinear(Vec<Regressor>),
    #[error("need more rows than parameters ({rows} rows, {params} parameters)")]
    InsufficientRows { rows: usize, params: usize },
    #[error("column {column} has {found} rows, response has {expected}")]
    LengthMismatch {
        column: usize,
        found: usize,
        expected: usize,
    },
    #[error("response must be binary 0/1")]
    NonBinary,
    #[error("response has a single class")]
    SingleClass,
    #[error("non-finite value in design or response")]
    NonFinite,
}

/// Identifies a design column in error reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regressor {
    Intercept,
    Column(usize),
}

/// Result of an ordinary least squares fit.
///
/// `coefficients` holds one entry per supplied column followed by the
/// intercept; `covariance` is indexed the same way.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFit {
    pub coefficients: Vec<f64>,
    pub covariance: Vec<Vec<f64>>,
    pub residual_variance: f64,
    pub residuals: Vec<f64>,
}

impl LinearFit {
    pub fn intercept(&self) -> f64 {
        *self.coefficients.last().unwrap()
    }

    pub fn std_error(&self, i: usize) -> f64 {
        self.covariance[i][i].max(0.0).sqrt()
    }
}

/// Fits `y ~ columns + 1` by least squares.
///
/// The intercept is placed first internally so a constant user column is the
/// one reported as collinear.
pub fn ols_fit(columns: &[&[f64]], y: &[f64]) -> Result<LinearFit, FitError> {
    let n = y.len();
    let k = columns.len();
    let p = k + 1;
    for (j, c) in columns.iter().enumerate() {
        if c.len() != n {
            return Err(FitError::LengthMismatch {
                column: j,
                found: c.len(),
                expected: n,
            });
        }
    }
    if n <= p {
        return Err(FitError::InsufficientRows { rows: n, params: p });
    }
    if y.iter()
        .chain(columns.iter().flat_map(|c| c.iter()))
        .any(|v| !v.is_finite())
    {
        return Err(FitError::NonFinite);
    }
    let regressor = |j: usize| {
        if j == 0 {
            Regressor::Intercept
        } else {
            Regressor::Column(j - 1)
        }
    };

    // column-major working copy: intercept, then user columns
    let mut a: Vec<Vec<f64>> = Vec::with_capacity(p);
    a.push(vec![1.0; n]);
    a.extend(columns.iter().map(|c| c.to_vec()));
    let norms: Vec<f64> = a.iter().map(|c| norm(c)).collect();
    let mut qty = y.to_vec();
    let mut r = vec![vec![0.0; p]; p];
    let mut collinear = Vec::new();

    for j in 0..p {
        let col_norm = norm(&a[j][j..]);
        if col_norm <= RANK_TOLERANCE * norms[j] || norms[j] == 0.0 {
            collinear.push(regressor(j));
            continue;
        }
        let alpha = if a[j][j] > 0.0 { -col_norm } else { col_norm };
        let mut v = a[j][j..].to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        a[j][j] = alpha;
        for x in &mut a[j][j + 1..] {
            *x = 0.0;
        }
        for col in a.iter_mut().skip(j + 1) {
            reflect(&v, vnorm2, &mut col[j..]);
        }
        reflect(&v, vnorm2, &mut qty[j..]);
    }
    if !collinear.is_empty() {
        return Err(FitError::Collinear(collinear));
    }
    for j in 0..p {
        for i in 0..=j {
            r[i][j] = a[j][i];
        }
    }

    let beta = back_substitute(&r, &qty[..p]);
    let rss: f64 = qty[p..].iter().map(|x| x * x).sum();
    let residual_variance = rss / (n - p) as f64;

    // (X'X)^-1 = R^-1 R^-T
    let rinv = upper_inverse(&r);
    let mut cov = vec![vec![0.0; p]; p];
    for i in 0..p {
        for j in i..p {
            let s: f64 = (j..p).map(|m| rinv[i][m] * rinv[j][m]).sum();
            cov[i][j] = s * residual_variance;
            cov[j][i] = cov[i][j];
        }
    }

    let residuals: Vec<f64> = (0..n)
        .map(|i| {
            let fitted = beta[0] + (0..k).map(|j| beta[j + 1] * columns[j][i]).sum::<f64>();
            y[i] - fitted
        })
        .collect();

    // reorder so the intercept comes last
    let order: Vec<usize> = (1..p).chain(std::iter::once(0)).collect();
    Ok(LinearFit {
        coefficients: order.iter().map(|&i| beta[i]).collect(),
        covariance: order
            .iter()
            .map(|&i| order.iter().map(|&j| cov[i][j]).collect())
            .collect(),
        residual_variance,
        residuals,
    })
}

fn norm(x: &[f64]) -> f64 {
    // scaled to avoid overflow on large columns
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * x.iter().map(|v| (v / scale).powi(2)).sum::<f64>().sqrt()
}

fn reflect(v: &[f64], vnorm2: f64, x: &mut [f64]) {
    let dot: f64 = v.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
    let f = 2.0 * dot / vnorm2;
    for (xi, vi) in x.iter_mut().zip(v) {
        *xi -= f * vi;
    }
}

fn back_substitute(r: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let p = b.len();
    let mut x = vec![0.0; p];
    for i in (0..p).rev() {
        let s: f64 = (i + 1..p).map(|j| r[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / r[i][i];
    }
    x
}

fn upper_inverse(r: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let p = r.len();
    let mut inv = vec![vec![0.0; p]; p];
    for j in 0..p {
        inv[j][j] = 1.0 / r[j][j];
        for i in (0..j).rev() {
            let s: f64 = (i + 1..=j).map(|m| r[i][m] * inv[m][j]).sum();
            inv[i][j] = -s / r[i][i];
        }
    }
    inv
}

/// Solves `a x = b` for symmetric positive-definite `a` by Cholesky.
/// Returns `None` when `a` is not numerically positive definite.
pub(crate) fn cholesky_solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let p = b.len();
    let mut l = vec![vec![0.0; p]; p];
    for i in 0..p {
        for j in 0..=i {
            let s: f64 = (0..j).map(|m| l[i][m] * l[j][m]).sum();
            if i == j {
                let d = a[i][i] - s;
                if d <= 0.0 || !d.is_finite() {
                    return None;
                }
                l[i][i] = d.sqrt();
            } else {
                l[i][j] = (a[i][j] - s) / l[j][j];
            }
        }
    }
    let mut z = vec![0.0; p];
    for i in 0..p {
        let s: f64 = (0..i).map(|m| l[i][m] * z[m]).sum();
        z[i] = (b[i] - s) / l[i][i];
    }
    let mut x = vec![0.0; p];
    for i in (0..p).rev() {
        let s: f64 = (i + 1..p).map(|m| l[m][i] * x[m]).sum();
        x[i] = (z[i] - s) / l[i][i];
    }
    Some(x)
}
