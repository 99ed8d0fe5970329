//! Average treatment effect estimators.
//!
//! | estimator                    | estimand  | standard error          | interval            |
//! |------------------------------|-----------|-------------------------|---------------------|
//! | `linear_regression`          | backdoor  | OLS covariance          | normal, ±1.96 se    |
//! | `propensity_score_weighting` | backdoor  | bootstrap (200 reps)    | bootstrap percentile|
//! | `iv_wald`                    | iv        | delta method            | normal, ±1.96 se    |
//! | `frontdoor_two_stage`        | frontdoor | bootstrap (200 reps)    | bootstrap percentile|
//!
//! Treatments must be binary 0/1 throughout. Bootstrap percentile intervals
//! are widened to contain the point estimate when resampling skews them past
//! it.

pub mod logistic;
pub mod ols;

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{DataError, Dataset, RandomSeed};
use crate::identify::{Estimand, EstimandKind, Strategy};
use crate::stats::{mean, quantile, std_dev};

pub use logistic::{logistic_fit, LogisticFit};
pub use ols::{ols_fit, FitError, LinearFit, Regressor};

pub const Z_95: f64 = 1.959_963_984_540_054;
pub const DEFAULT_BOOTSTRAP_REPLICATES: usize = 200;
pub const WEAK_INSTRUMENT_THRESHOLD: f64 = 0.05;

#[derive(Debug, Error)]
pub enum EstimateError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("{stage}: collinear regressors {columns:?}")]
    Collinear { stage: String, columns: Vec<String> },
    #[error("{stage}: {source}")]
    Fit {
        stage: String,
        #[source]
        source: FitError,
    },
    #[error("column `{0}` must be binary 0/1")]
    NonBinary(String),
    #[error("treatment `{0}` is constant")]
    ConstantTreatment(String),
    #[error("instrument does not shift the treatment (first-stage difference {0})")]
    ZeroDenominator(f64),
    #[error("{kind} estimator supports exactly one variable, got {count}")]
    UnsupportedSetSize { kind: EstimandKind, count: usize },
    #[error("estimator `{estimator}` cannot handle {kind} estimands")]
    Incompatible {
        estimator: String,
        kind: EstimandKind,
    },
    #[error("{0}")]
    Invalid(String),
}

/// Point estimate of the average treatment effect with uncertainty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectEstimate {
    pub ate: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub method: String,
    pub estimand: Estimand,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl EffectEstimate {
    fn normal(ate: f64, std_error: f64, method: &str, estimand: &Estimand, n: usize) -> Self {
        EffectEstimate {
            ate,
            std_error,
            ci_low: ate - Z_95 * std_error,
            ci_high: ate + Z_95 * std_error,
            method: method.to_string(),
            estimand: estimand.clone(),
            n,
            warnings: Vec::new(),
        }
    }
}

impl fmt::Display for EffectEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ATE = {:.4} (se {:.4}, 95% CI [{:.4}, {:.4}], n = {}, {})",
            self.ate, self.std_error, self.ci_low, self.ci_high, self.n, self.method
        )
    }
}

/// Something that turns data plus an estimand into an effect estimate.
///
/// Implementations must be pure given their inputs and `seed`; refuters call
/// them concurrently.
pub trait Estimator: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;
    fn supports(&self, kind: EstimandKind) -> bool;
    fn estimate(
        &self,
        data: &Dataset,
        estimand: &Estimand,
        seed: RandomSeed,
    ) -> Result<EffectEstimate, EstimateError>;

    /// Point estimate only. Refuters call this once per replication, so
    /// estimators with resampled standard errors should skip the resampling.
    fn point(
        &self,
        data: &Dataset,
        estimand: &Estimand,
        seed: RandomSeed,
    ) -> Result<f64, EstimateError> {
        self.estimate(data, estimand, seed).map(|e| e.ate)
    }
}

/// Names accepted by [`estimator_by_name`].
pub const ESTIMATOR_NAMES: [&str; 4] = [
    "linear_regression",
    "propensity_score_weighting",
    "iv_wald",
    "frontdoor_two_stage",
];

pub fn estimator_by_name(name: &str) -> Option<Arc<dyn Estimator>> {
    Some(match name {
        "linear_regression" => Arc::new(LinearRegression),
        "propensity_score_weighting" => Arc::new(PropensityWeighting::default()),
        "iv_wald" => Arc::new(IvWald),
        "frontdoor_two_stage" => Arc::new(FrontdoorTwoStage::default()),
        _ => return None,
    })
}

fn check_kind(est: &dyn Estimator, estimand: &Estimand) -> Result<(), EstimateError> {
    if est.supports(estimand.kind()) {
        Ok(())
    } else {
        Err(EstimateError::Incompatible {
            estimator: est.name().to_string(),
            kind: estimand.kind(),
        })
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LinearRegression;

impl Estimator for LinearRegression {
    fn name(&self) -> &str {
        "linear_regression"
    }
    fn supports(&self, kind: EstimandKind) -> bool {
        kind == EstimandKind::Backdoor
    }
    fn estimate(
        &self,
        data: &Dataset,
        estimand: &Estimand,
        _seed: RandomSeed,
    ) -> Result<EffectEstimate, EstimateError> {
        check_kind(self, estimand)?;
        estimate_backdoor_regression(data, estimand)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PropensityWeighting {
    pub clip_low: f64,
    pub clip_high: f64,
    pub bootstrap_replicates: usize,
}

impl Default for PropensityWeighting {
    fn default() -> Self {
        PropensityWeighting {
            clip_low: 0.01,
            clip_high: 0.99,
            bootstrap_replicates: DEFAULT_BOOTSTRAP_REPLICATES,
        }
    }
}

impl Estimator for PropensityWeighting {
    fn name(&self) -> &str {
        "propensity_score_weighting"
    }
    fn supports(&self, kind: EstimandKind) -> bool {
        kind == EstimandKind::Backdoor
    }
    fn estimate(
        &self,
        data: &Dataset,
        estimand: &Estimand,
        seed: RandomSeed,
    ) -> Result<EffectEstimate, EstimateError> {
        check_kind(self, estimand)?;
        estimate_propensity_weighting(data, estimand, self, seed)
    }
    fn point(
        &self,
        data: &Dataset,
        estimand: &Estimand,
        _seed: RandomSeed,
    ) -> Result<f64, EstimateError> {
        check_kind(self, estimand)?;
        check_clip(self)?;
        propensity_point(data, estimand, self).map(|r| r.0)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct IvWald;

impl Estimator for IvWald {
    fn name(&self) -> &str {
        "iv_wald"
    }
    fn supports(&self, kind: EstimandKind) -> bool {
        kind == EstimandKind::Iv
    }
    fn estimate(
        &self,
        data: &Dataset,
        estimand: &Estimand,
        _seed: RandomSeed,
    ) -> Result<EffectEstimate, EstimateError> {
        check_kind(self, estimand)?;
        estimate_iv_wald(data, estimand)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FrontdoorTwoStage {
    pub bootstrap_replicates: usize,
}

impl Default for FrontdoorTwoStage {
    fn default() -> Self {
        FrontdoorTwoStage {
            bootstrap_replicates: DEFAULT_BOOTSTRAP_REPLICATES,
        }
    }
}

impl Estimator for FrontdoorTwoStage {
    fn name(&self) -> &str {
        "frontdoor_two_stage"
    }
    fn supports(&self, kind: EstimandKind) -> bool {
        kind == EstimandKind::Frontdoor
    }
    fn estimate(
        &self,
        data: &Dataset,
        estimand: &Estimand,
        seed: RandomSeed,
    ) -> Result<EffectEstimate, EstimateError> {
        check_kind(self, estimand)?;
        estimate_frontdoor(data, estimand, self.bootstrap_replicates, seed)
    }
    fn point(
        &self,
        data: &Dataset,
        estimand: &Estimand,
        _seed: RandomSeed,
    ) -> Result<f64, EstimateError> {
        check_kind(self, estimand)?;
        frontdoor_point(data, estimand, single_mediator(estimand)?)
    }
}

fn binary_column<'a>(data: &'a Dataset, name: &str) -> Result<&'a [f64], EstimateError> {
    let col = data.column(name)?;
    if col.iter().any(|&v| v != 0.0 && v != 1.0) {
        return Err(EstimateError::NonBinary(name.to_string()));
    }
    Ok(col)
}

fn treatment_column<'a>(data: &'a Dataset, name: &str) -> Result<&'a [f64], EstimateError> {
    let col = binary_column(data, name)?;
    let ones = col.iter().filter(|&&v| v == 1.0).count();
    if ones == 0 || ones == col.len() {
        return Err(EstimateError::ConstantTreatment(name.to_string()));
    }
    Ok(col)
}

fn fit_error(stage: &str, names: &[&str], e: FitError) -> EstimateError {
    match e {
        FitError::Collinear(cols) => EstimateError::Collinear {
            stage: stage.to_string(),
            columns: cols
                .into_iter()
                .map(|c| match c {
                    Regressor::Intercept => "intercept".to_string(),
                    Regressor::Column(i) => names[i].to_string(),
                })
                .collect(),
        },
        other => EstimateError::Fit {
            stage: stage.to_string(),
            source: other,
        },
    }
}

/// OLS of the outcome on treatment plus adjustment set; the treatment
/// coefficient is the ATE.
pub fn estimate_backdoor_regression(
    data: &Dataset,
    estimand: &Estimand,
) -> Result<EffectEstimate, EstimateError> {
    let Strategy::Backdoor { adjustment_set } = &estimand.strategy else {
        return Err(EstimateError::Incompatible {
            estimator: "linear_regression".into(),
            kind: estimand.kind(),
        });
    };
    let t = treatment_column(data, &estimand.treatment)?;
    let y = data.column(&estimand.outcome)?;
    let mut names: Vec<&str> = vec![&estimand.treatment];
    names.extend(adjustment_set.iter().map(String::as_str));
    let cols: Vec<&[f64]> = std::iter::once(Ok(t))
        .chain(adjustment_set.iter().map(|a| data.column(a)))
        .collect::<Result<_, _>>()?;
    let fit = ols_fit(&cols, y).map_err(|e| fit_error("outcome regression", &names, e))?;
    Ok(EffectEstimate::normal(
        fit.coefficients[0],
        fit.std_error(0),
        "backdoor.linear_regression",
        estimand,
        data.row_count(),
    ))
}

/// Runs `point` on `replicates` bootstrap resamples, in parallel, and turns
/// the spread into a standard error and percentile interval around `ate`.
/// Resamples on which `point` fails (for example a single treatment class)
/// are dropped.
fn bootstrap_interval(
    data: &Dataset,
    ate: f64,
    replicates: usize,
    seed: RandomSeed,
    point: impl Fn(&Dataset) -> Result<f64, EstimateError> + Sync,
) -> Result<(f64, f64, f64, usize), EstimateError> {
    let draws: Vec<f64> = (0..replicates as u64)
        .into_par_iter()
        .map(|b| -> Result<Option<f64>, EstimateError> {
            let sample = data.bootstrap_sample(seed.derive(b))?;
            Ok(point(&sample).ok())
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    if draws.len() < 2 {
        return Ok((0.0, ate, ate, draws.len()));
    }
    let se = std_dev(&draws);
    let lo = quantile(&draws, 0.025).min(ate);
    let hi = quantile(&draws, 0.975).max(ate);
    Ok((se, lo, hi, draws.len()))
}

fn propensity_point(
    data: &Dataset,
    estimand: &Estimand,
    opts: &PropensityWeighting,
) -> Result<(f64, bool), EstimateError> {
    let t = treatment_column(data, &estimand.treatment)?;
    let y = data.column(&estimand.outcome)?;
    let names: Vec<&str> = estimand.variables().iter().map(String::as_str).collect();
    let cols: Vec<&[f64]> = names
        .iter()
        .map(|a| data.column(a))
        .collect::<Result<_, _>>()?;
    let fit = logistic_fit(&cols, t).map_err(|e| fit_error("propensity model", &names, e))?;
    let (mut s1, mut w1, mut s0, mut w0) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..t.len() {
        let e = fit.predict(&cols, i).clamp(opts.clip_low, opts.clip_high);
        if t[i] == 1.0 {
            s1 += y[i] / e;
            w1 += 1.0 / e;
        } else {
            s0 += y[i] / (1.0 - e);
            w0 += 1.0 / (1.0 - e);
        }
    }
    Ok((s1 / w1 - s0 / w0, fit.separation))
}

fn check_clip(opts: &PropensityWeighting) -> Result<(), EstimateError> {
    if !(0.0 < opts.clip_low && opts.clip_low < opts.clip_high && opts.clip_high < 1.0) {
        return Err(EstimateError::Invalid(format!(
            "propensity clip bounds must satisfy 0 < low < high < 1, got [{}, {}]",
            opts.clip_low, opts.clip_high
        )));
    }
    Ok(())
}

/// Inverse-propensity weighting with self-normalized (Hájek) arm means.
/// Propensities come from a logistic model on the adjustment set and are
/// clipped to `[clip_low, clip_high]`.
pub fn estimate_propensity_weighting(
    data: &Dataset,
    estimand: &Estimand,
    opts: &PropensityWeighting,
    seed: RandomSeed,
) -> Result<EffectEstimate, EstimateError> {
    if estimand.kind() != EstimandKind::Backdoor {
        return Err(EstimateError::Incompatible {
            estimator: "propensity_score_weighting".into(),
            kind: estimand.kind(),
        });
    }
    check_clip(opts)?;
    let (ate, separated) = propensity_point(data, estimand, opts)?;
    let (se, lo, hi, used) = bootstrap_interval(data, ate, opts.bootstrap_replicates, seed, |d| {
        propensity_point(d, estimand, opts).map(|r| r.0)
    })?;
    let mut out = EffectEstimate {
        ate,
        std_error: se,
        ci_low: lo,
        ci_high: hi,
        method: "backdoor.propensity_score_weighting.hajek".into(),
        estimand: estimand.clone(),
        n: data.row_count(),
        warnings: Vec::new(),
    };
    if separated {
        out.warnings
            .push("propensity model separated; used L2-penalized fit".into());
    }
    if used < opts.bootstrap_replicates {
        out.warnings.push(format!(
            "{} of {} bootstrap replicates failed and were dropped",
            opts.bootstrap_replicates - used,
            opts.bootstrap_replicates
        ));
    }
    Ok(out)
}

/// Wald ratio for a single binary instrument:
/// `(E[y|z=1] - E[y|z=0]) / (E[t|z=1] - E[t|z=0])`, with a delta-method
/// standard error.
pub fn estimate_iv_wald(
    data: &Dataset,
    estimand: &Estimand,
) -> Result<EffectEstimate, EstimateError> {
    let Strategy::Iv { instrument_set } = &estimand.strategy else {
        return Err(EstimateError::Incompatible {
            estimator: "iv_wald".into(),
            kind: estimand.kind(),
        });
    };
    if instrument_set.len() != 1 {
        return Err(EstimateError::UnsupportedSetSize {
            kind: EstimandKind::Iv,
            count: instrument_set.len(),
        });
    }
    let zname = instrument_set.iter().next().unwrap();
    let z = binary_column(data, zname)?;
    let t = treatment_column(data, &estimand.treatment)?;
    let y = data.column(&estimand.outcome)?;

    let arm = |val: f64| {
        let idx: Vec<usize> = (0..z.len()).filter(|&i| z[i] == val).collect();
        let ys: Vec<f64> = idx.iter().map(|&i| y[i]).collect();
        let ts: Vec<f64> = idx.iter().map(|&i| t[i]).collect();
        ArmMoments::new(&ys, &ts)
    };
    let (a1, a0) = (arm(1.0), arm(0.0));
    if a1.n == 0 || a0.n == 0 {
        return Err(EstimateError::Invalid(format!(
            "instrument `{zname}` is constant"
        )));
    }
    let dy = a1.mean_y - a0.mean_y;
    let dt = a1.mean_t - a0.mean_t;
    if dt.abs() < 1e-12 {
        return Err(EstimateError::ZeroDenominator(dt));
    }
    let ate = dy / dt;
    let var_dy = a1.var_y / a1.n as f64 + a0.var_y / a0.n as f64;
    let var_dt = a1.var_t / a1.n as f64 + a0.var_t / a0.n as f64;
    let cov = a1.cov_yt / a1.n as f64 + a0.cov_yt / a0.n as f64;
    let var = (var_dy + ate * ate * var_dt - 2.0 * ate * cov) / (dt * dt);
    let mut out = EffectEstimate::normal(
        ate,
        var.max(0.0).sqrt(),
        "iv.wald",
        estimand,
        data.row_count(),
    );
    if dt.abs() < WEAK_INSTRUMENT_THRESHOLD {
        out.warnings.push(format!(
            "weak instrument: first-stage difference {dt:.4} below {WEAK_INSTRUMENT_THRESHOLD}"
        ));
    }
    Ok(out)
}

struct ArmMoments {
    n: usize,
    mean_y: f64,
    mean_t: f64,
    var_y: f64,
    var_t: f64,
    cov_yt: f64,
}

impl ArmMoments {
    fn new(y: &[f64], t: &[f64]) -> Self {
        let n = y.len();
        if n == 0 {
            return ArmMoments {
                n,
                mean_y: 0.0,
                mean_t: 0.0,
                var_y: 0.0,
                var_t: 0.0,
                cov_yt: 0.0,
            };
        }
        let (my, mt) = (mean(y), mean(t));
        let denom = if n > 1 { (n - 1) as f64 } else { 1.0 };
        let cov_yt = y
            .iter()
            .zip(t)
            .map(|(a, b)| (a - my) * (b - mt))
            .sum::<f64>()
            / denom;
        let var_y = y.iter().map(|a| (a - my) * (a - my)).sum::<f64>() / denom;
        let var_t = t.iter().map(|b| (b - mt) * (b - mt)).sum::<f64>() / denom;
        ArmMoments {
            n,
            mean_y: my,
            mean_t: mt,
            var_y,
            var_t,
            cov_yt,
        }
    }
}

fn frontdoor_point(data: &Dataset, estimand: &Estimand, m: &str) -> Result<f64, EstimateError> {
    let t = treatment_column(data, &estimand.treatment)?;
    let y = data.column(&estimand.outcome)?;
    let mv = data.column(m)?;
    let first = ols_fit(&[t], mv)
        .map_err(|e| fit_error("mediator regression", &[&estimand.treatment], e))?;
    let second = ols_fit(&[mv, t], y)
        .map_err(|e| fit_error("outcome regression", &[m, &estimand.treatment], e))?;
    Ok(first.coefficients[0] * second.coefficients[0])
}

fn single_mediator(estimand: &Estimand) -> Result<&str, EstimateError> {
    let Strategy::Frontdoor { mediator_set } = &estimand.strategy else {
        return Err(EstimateError::Incompatible {
            estimator: "frontdoor_two_stage".into(),
            kind: estimand.kind(),
        });
    };
    if mediator_set.len() != 1 {
        return Err(EstimateError::UnsupportedSetSize {
            kind: EstimandKind::Frontdoor,
            count: mediator_set.len(),
        });
    }
    Ok(mediator_set.iter().next().unwrap())
}

/// Linear frontdoor estimate: (effect of t on m) times (effect of m on y
/// holding t fixed). Valid under a linear structural model.
pub fn estimate_frontdoor(
    data: &Dataset,
    estimand: &Estimand,
    bootstrap_replicates: usize,
    seed: RandomSeed,
) -> Result<EffectEstimate, EstimateError> {
    let m = single_mediator(estimand)?;
    let ate = frontdoor_point(data, estimand, m)?;
    let (se, lo, hi, used) = bootstrap_interval(data, ate, bootstrap_replicates, seed, |d| {
        frontdoor_point(d, estimand, m)
    })?;
    let mut out = EffectEstimate {
        ate,
        std_error: se,
        ci_low: lo,
        ci_high: hi,
        method: "frontdoor.two_stage_linear".into(),
        estimand: estimand.clone(),
        n: data.row_count(),
        warnings: Vec::new(),
    };
    if used < bootstrap_replicates {
        out.warnings.push(format!(
            "{} of {} bootstrap replicates failed and were dropped",
            bootstrap_replicates - used,
            bootstrap_replicates
        ));
    }
    Ok(out)
}
