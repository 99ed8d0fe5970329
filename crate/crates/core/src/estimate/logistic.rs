//! Logistic regression by damped Newton iterations.
//!
//! The objective is the mean Bernoulli log-likelihood, optionally minus an L2
//! penalty `lambda / 2 * |beta|^2` on the non-intercept coefficients.
//! Coefficient vectors follow the OLS convention: one entry per column, then
//! the intercept.

use super::ols::{cholesky_solve, FitError};

pub const GRADIENT_TOLERANCE: f64 = 1e-8;
pub const MAX_ITERATIONS: usize = 100;
/// Penalty used when the data look separated.
pub const SEPARATION_PENALTY: f64 = 1e-6;
/// Linear predictors beyond this magnitude mean fitted probabilities of
/// numerically 0 or 1, which only happens under (quasi-)separation.
const SATURATION: f64 = 30.0;
const MAX_HALVINGS: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticFit {
    pub coefficients: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Set when the unpenalized fit diverged or saturated and the penalized
    /// fallback was used instead.
    pub separation: bool,
    /// Objective value after each accepted step, starting from `beta = 0`.
    pub objective_trace: Vec<f64>,
}

impl LogisticFit {
    pub fn predict(&self, columns: &[&[f64]], row: usize) -> f64 {
        sigmoid(linear_predictor(columns, &self.coefficients, row))
    }

    /// Fitted probabilities for every row.
    pub fn probabilities(&self, columns: &[&[f64]], rows: usize) -> Vec<f64> {
        (0..rows).map(|i| self.predict(columns, i)).collect()
    }
}

pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

pub fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

/// `log(1 + exp(x))` without overflow.
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

fn linear_predictor(columns: &[&[f64]], beta: &[f64], row: usize) -> f64 {
    let k = columns.len();
    beta[k] + (0..k).map(|j| beta[j] * columns[j][row]).sum::<f64>()
}

/// Total Bernoulli log-likelihood at `beta`.
pub fn log_likelihood(columns: &[&[f64]], t: &[f64], beta: &[f64]) -> f64 {
    (0..t.len())
        .map(|i| {
            let eta = linear_predictor(columns, beta, i);
            t[i] * eta - softplus(eta)
        })
        .sum()
}

/// Gradient of [`log_likelihood`] with respect to `beta`.
pub fn gradient(columns: &[&[f64]], t: &[f64], beta: &[f64]) -> Vec<f64> {
    let k = columns.len();
    let mut g = vec![0.0; k + 1];
    for i in 0..t.len() {
        let r = t[i] - sigmoid(linear_predictor(columns, beta, i));
        for j in 0..k {
            g[j] += r * columns[j][i];
        }
        g[k] += r;
    }
    g
}

fn objective(columns: &[&[f64]], t: &[f64], beta: &[f64], lambda: f64) -> f64 {
    let k = columns.len();
    let pen: f64 = beta[..k].iter().map(|b| b * b).sum();
    log_likelihood(columns, t, beta) / t.len() as f64 - 0.5 * lambda * pen
}

struct Newton {
    beta: Vec<f64>,
    iterations: usize,
    converged: bool,
    trace: Vec<f64>,
}

fn newton(columns: &[&[f64]], t: &[f64], lambda: f64) -> Newton {
    let k = columns.len();
    let p = k + 1;
    let n = t.len() as f64;
    let mut beta = vec![0.0; p];
    let mut current = objective(columns, t, &beta, lambda);
    let mut trace = vec![current];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        // gradient and Hessian of the mean objective
        let mut g = vec![0.0; p];
        let mut h = vec![vec![0.0; p]; p];
        let mut x = vec![0.0; p];
        for i in 0..t.len() {
            for j in 0..k {
                x[j] = columns[j][i];
            }
            x[k] = 1.0;
            let mu = sigmoid(linear_predictor(columns, &beta, i));
            let w = mu * (1.0 - mu);
            let r = t[i] - mu;
            for a in 0..p {
                g[a] += r * x[a];
                for b in 0..=a {
                    h[a][b] += w * x[a] * x[b];
                }
            }
        }
        for a in 0..p {
            g[a] /= n;
            for b in 0..=a {
                h[a][b] /= n;
                h[b][a] = h[a][b];
            }
        }
        for j in 0..k {
            g[j] -= lambda * beta[j];
            h[j][j] += lambda;
        }
        let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if gnorm < GRADIENT_TOLERANCE {
            converged = true;
            break;
        }
        let step = solve_with_ridge(&h, &g);
        let mut scale = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let cand: Vec<f64> = beta.iter().zip(&step).map(|(b, s)| b + scale * s).collect();
            let val = objective(columns, t, &cand, lambda);
            if val >= current {
                accepted = Some((cand, val));
                break;
            }
            scale *= 0.5;
        }
        iterations += 1;
        match accepted {
            Some((cand, val)) => {
                beta = cand;
                current = val;
                trace.push(val);
            }
            // no ascent direction left at machine precision
            None => {
                converged = gnorm < GRADIENT_TOLERANCE.sqrt();
                break;
            }
        }
    }
    Newton {
        beta,
        iterations,
        converged,
        trace,
    }
}

fn solve_with_ridge(h: &[Vec<f64>], g: &[f64]) -> Vec<f64> {
    let mut ridge = 0.0;
    loop {
        let mut hh = h.to_vec();
        for (i, row) in hh.iter_mut().enumerate() {
            row[i] += ridge;
        }
        if let Some(x) = cholesky_solve(&hh, g) {
            return x;
        }
        ridge = if ridge == 0.0 { 1e-10 } else { ridge * 10.0 };
        if ridge > 1e6 {
            // fall back to gradient ascent
            return g.to_vec();
        }
    }
}

/// Fits `P(t = 1) = sigmoid(columns * beta + intercept)`.
///
/// Stops when the gradient norm of the mean log-likelihood drops below
/// [`GRADIENT_TOLERANCE`] or after [`MAX_ITERATIONS`] Newton steps; step
/// halving keeps the objective non-decreasing. If the unpenalized fit fails to
/// converge or saturates, the fit is redone with an L2 penalty of
/// [`SEPARATION_PENALTY`] and [`LogisticFit::separation`] is set.
pub fn logistic_fit(columns: &[&[f64]], t: &[f64]) -> Result<LogisticFit, FitError> {
    let n = t.len();
    for (j, c) in columns.iter().enumerate() {
        if c.len() != n {
            return Err(FitError::LengthMismatch {
                column: j,
                found: c.len(),
                expected: n,
            });
        }
    }
    if columns
        .iter()
        .flat_map(|c| c.iter())
        .any(|v| !v.is_finite())
    {
        return Err(FitError::NonFinite);
    }
    if t.iter().any(|&v| v != 0.0 && v != 1.0) {
        return Err(FitError::NonBinary);
    }
    let ones = t.iter().filter(|&&v| v == 1.0).count();
    if ones == 0 || ones == n {
        return Err(FitError::SingleClass);
    }

    let plain = newton(columns, t, 0.0);
    let saturated = (0..n).any(|i| linear_predictor(columns, &plain.beta, i).abs() > SATURATION);
    if plain.converged && !saturated {
        return Ok(LogisticFit {
            coefficients: plain.beta,
            iterations: plain.iterations,
            converged: true,
            separation: false,
            objective_trace: plain.trace,
        });
    }
    let pen = newton(columns, t, SEPARATION_PENALTY);
    Ok(LogisticFit {
        coefficients: pen.beta,
        iterations: pen.iterations,
        converged: pen.converged,
        separation: true,
        objective_trace: pen.trace,
    })
}
