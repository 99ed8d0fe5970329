//! Refuters: tests that try to falsify a finished analysis.
//!
//! Each refuter perturbs the data (or the graph), reruns the whole
//! [`Pipeline`] per replication and compares the refuted estimates with what
//! the perturbation should produce.
//!
//! | refuter                       | category            | target        | test                 |
//! |-------------------------------|---------------------|---------------|----------------------|
//! | `placebo_treatment_refuter`   | integration         | 0             | z-test               |
//! | `dummy_outcome_refuter`       | integration         | 0             | z-test               |
//! | `simulated_outcome_refuter`   | integration         | injected      | z-test               |
//! | `random_common_cause`         | model perturbation  | original ATE  | percentile coverage  |
//! | `add_unobserved_common_cause` | model perturbation  | none          | surface, no verdict  |
//! | `data_subset_refuter`         | unit                | original ATE  | percentile coverage  |
//! | `bootstrap_refuter`           | unit                | original ATE  | percentile coverage  |
//!
//! The z-test uses `z = (mean - target) / (std / sqrt(R))` over the `R`
//! refuted estimates. Percentile coverage uses
//! `p = min(1, 2 * min(P(ate <= original), P(ate >= original)))`, so the
//! original lies inside the central `1 - alpha` interval exactly when
//! `p >= alpha`. A refuter passes when `p >= alpha`.
//!
//! Replication `r` draws all its randomness from `seed.derive(r)`, so reports
//! do not depend on thread scheduling.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{DataError, Dataset, RandomSeed};
use crate::estimate::logistic::{logistic_fit, logit, sigmoid};
use crate::estimate::{ols_fit, FitError};
use crate::graph::NodeSet;
use crate::identify::{Estimand, Strategy};
use crate::pipeline::{select, EstimandChoice, Pipeline, PipelineError};
use crate::stats::{mean, quantile, std_dev, two_sided_p};

pub const DEFAULT_REPLICATIONS: usize = 100;
pub const DEFAULT_SIGNIFICANCE: f64 = 0.05;
pub const DEFAULT_SUBSET_FRACTION: f64 = 0.8;
pub const DEFAULT_SENSITIVITY_REPLICATIONS: usize = 20;
/// Preferred name of the synthetic common-cause column.
pub const RANDOM_COMMON_CAUSE_COLUMN: &str = "_rcc";

pub const REFUTER_NAMES: [&str; 7] = [
    "placebo_treatment_refuter",
    "dummy_outcome_refuter",
    "simulated_outcome_refuter",
    "random_common_cause",
    "add_unobserved_common_cause",
    "data_subset_refuter",
    "bootstrap_refuter",
];

#[derive(Debug, Error)]
pub enum RefuteError {
    #[error("{0}")]
    InvalidArgument(String),
    #[error("{refuter}: {source}")]
    Pipeline {
        refuter: String,
        #[source]
        source: PipelineError,
    },
    #[error("{refuter}: {source}")]
    Data {
        refuter: String,
        #[source]
        source: DataError,
    },
    #[error("{refuter}: outcome model: {source}")]
    Fit {
        refuter: String,
        #[source]
        source: FitError,
    },
    #[error("{refuter}: {reason}")]
    Unsupported { refuter: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    /// Perturbations with a known answer; exercise the whole analysis.
    Integration,
    /// Resampling; checks estimator stability only.
    Unit,
    ModelPerturbation,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefuteSettings {
    pub replications: usize,
    pub significance_level: f64,
}

impl Default for RefuteSettings {
    fn default() -> Self {
        RefuteSettings {
            replications: DEFAULT_REPLICATIONS,
            significance_level: DEFAULT_SIGNIFICANCE,
        }
    }
}

impl RefuteSettings {
    pub fn with_replications(replications: usize) -> Self {
        RefuteSettings {
            replications,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<(), RefuteError> {
        if self.replications == 0 {
            return Err(RefuteError::InvalidArgument(
                "replications must be at least 1".into(),
            ));
        }
        if !(self.significance_level > 0.0 && self.significance_level < 1.0) {
            return Err(RefuteError::InvalidArgument(format!(
                "significance level must lie in (0, 1), got {}",
                self.significance_level
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefutationReport {
    pub refuter: String,
    pub category: Category,
    pub original_ate: f64,
    pub refuted_ates: Vec<f64>,
    pub target: f64,
    pub refuted_mean: f64,
    pub refuted_std: f64,
    pub p_value: f64,
    pub significance_level: f64,
    pub passed: bool,
    pub replications: usize,
    pub seed: RandomSeed,
    /// Central percentile interval of the refuted estimates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ci: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensitivityCell {
    pub kappa_t: f64,
    pub kappa_y: f64,
    /// Mean over replications.
    pub adjusted_ate: f64,
    /// Simulation standard error of `adjusted_ate`.
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivitySurface {
    pub refuter: String,
    pub category: Category,
    pub original_ate: f64,
    pub replications: usize,
    pub seed: RandomSeed,
    pub grid: Vec<SensitivityCell>,
}

impl SensitivitySurface {
    pub fn cell(&self, kappa_t: f64, kappa_y: f64) -> Option<&SensitivityCell> {
        self.grid
            .iter()
            .find(|c| c.kappa_t == kappa_t && c.kappa_y == kappa_y)
    }
}

/// Strength grid of the simulated unobserved confounder. `kappa_t` shifts
/// the treatment log-odds per unit of the confounder, `kappa_y` shifts the
/// outcome in outcome units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityGrid {
    pub kappa_t: Vec<f64>,
    pub kappa_y: Vec<f64>,
    pub replications: usize,
}

impl Default for SensitivityGrid {
    fn default() -> Self {
        SensitivityGrid {
            kappa_t: vec![0.0, 0.5, 1.0],
            kappa_y: vec![0.0, 1.0, 2.0, 5.0],
            replications: DEFAULT_SENSITIVITY_REPLICATIONS,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaceboMode {
    /// Independent Bernoulli draws at the observed treatment rate.
    #[default]
    Bernoulli,
    /// Random permutation of the observed treatment column.
    Permute,
}

fn pipeline_err(refuter: &str) -> impl Fn(PipelineError) -> RefuteError + '_ {
    move |source| RefuteError::Pipeline {
        refuter: refuter.to_string(),
        source,
    }
}

fn data_err(refuter: &str) -> impl Fn(DataError) -> RefuteError + '_ {
    move |source| RefuteError::Data {
        refuter: refuter.to_string(),
        source,
    }
}

fn replicate<F>(n: usize, seed: RandomSeed, f: F) -> Result<Vec<f64>, RefuteError>
where
    F: Fn(RandomSeed) -> Result<f64, RefuteError> + Sync,
{
    (0..n)
        .into_par_iter()
        .map(|r| f(seed.derive(r as u64)))
        .collect()
}

fn original_ate(
    refuter: &str,
    pipeline: &Pipeline,
    data: &Dataset,
    seed: RandomSeed,
) -> Result<f64, RefuteError> {
    pipeline
        .run_point(data, seed)
        .map_err(pipeline_err(refuter))
}

enum Test {
    ZScore,
    Percentile,
}

/// Two-sided z-test of `target` against the refuted estimates.
pub fn z_test_p_value(refuted: &[f64], target: f64) -> f64 {
    let m = mean(refuted);
    if (m - target).abs() <= 1e-9 * (1.0 + target.abs()) || refuted.len() < 2 {
        return 1.0;
    }
    let s = std_dev(refuted);
    if s == 0.0 {
        return 0.0;
    }
    two_sided_p((m - target) / (s / (refuted.len() as f64).sqrt()))
}

/// Two-sided percentile position of `original` among the refuted estimates.
pub fn percentile_p_value(refuted: &[f64], original: f64) -> f64 {
    let n = refuted.len() as f64;
    let below = refuted.iter().filter(|&&a| a <= original).count() as f64 / n;
    let above = refuted.iter().filter(|&&a| a >= original).count() as f64 / n;
    (2.0 * below.min(above)).min(1.0)
}

#[allow(clippy::too_many_arguments)]
fn report(
    refuter: &str,
    category: Category,
    original: f64,
    refuted: Vec<f64>,
    target: f64,
    test: Test,
    settings: &RefuteSettings,
    seed: RandomSeed,
    with_ci: bool,
) -> RefutationReport {
    let mut notes = Vec::new();
    let p_value = match test {
        Test::ZScore => {
            if refuted.len() == 1 {
                notes.push("single replication: no spread estimate, test has no power".into());
            }
            z_test_p_value(&refuted, target)
        }
        Test::Percentile => percentile_p_value(&refuted, original),
    };
    let alpha = settings.significance_level;
    let ci = with_ci.then(|| {
        [
            quantile(&refuted, alpha / 2.0),
            quantile(&refuted, 1.0 - alpha / 2.0),
        ]
    });
    RefutationReport {
        refuter: refuter.to_string(),
        category,
        original_ate: original,
        target,
        refuted_mean: mean(&refuted),
        refuted_std: std_dev(&refuted),
        p_value,
        significance_level: alpha,
        passed: p_value >= alpha,
        replications: refuted.len(),
        seed,
        ci,
        notes,
        refuted_ates: refuted,
    }
}

/// Replaces the treatment with an independent placebo; the effect should
/// vanish.
pub fn refute_placebo_treatment(
    pipeline: &Pipeline,
    data: &Dataset,
    settings: &RefuteSettings,
    mode: PlaceboMode,
    seed: RandomSeed,
) -> Result<RefutationReport, RefuteError> {
    const NAME: &str = "placebo_treatment_refuter";
    settings.validate()?;
    let original = original_ate(NAME, pipeline, data, seed)?;
    let t = data.column(&pipeline.treatment).map_err(data_err(NAME))?;
    let rate = mean(t);
    let refuted = replicate(settings.replications, seed, |rs| {
        let mut rng = rs.stream(0);
        let placebo: Vec<f64> = match mode {
            PlaceboMode::Bernoulli => t
                .iter()
                .map(|_| if rng.random::<f64>() < rate { 1.0 } else { 0.0 })
                .collect(),
            PlaceboMode::Permute => {
                let mut v = t.to_vec();
                v.shuffle(&mut rng);
                v
            }
        };
        let d = data
            .replace_column(&pipeline.treatment, placebo)
            .map_err(data_err(NAME))?;
        pipeline
            .run_point(&d, rs.derive(1))
            .map_err(pipeline_err(NAME))
    })?;
    Ok(report(
        NAME,
        Category::Integration,
        original,
        refuted,
        0.0,
        Test::ZScore,
        settings,
        seed,
        false,
    ))
}

/// Replaces the outcome with independent normal draws matching its mean
/// and standard deviation; the effect should vanish.
pub fn refute_dummy_outcome(
    pipeline: &Pipeline,
    data: &Dataset,
    settings: &RefuteSettings,
    seed: RandomSeed,
) -> Result<RefutationReport, RefuteError> {
    const NAME: &str = "dummy_outcome_refuter";
    settings.validate()?;
    let original = original_ate(NAME, pipeline, data, seed)?;
    let y = data.column(&pipeline.outcome).map_err(data_err(NAME))?;
    let dist = Normal::new(mean(y), std_dev(y)).map_err(|e| RefuteError::Unsupported {
        refuter: NAME.into(),
        reason: e.to_string(),
    })?;
    let refuted = replicate(settings.replications, seed, |rs| {
        let mut rng = rs.stream(0);
        let dummy: Vec<f64> = (0..y.len()).map(|_| dist.sample(&mut rng)).collect();
        let d = data
            .replace_column(&pipeline.outcome, dummy)
            .map_err(data_err(NAME))?;
        pipeline
            .run_point(&d, rs.derive(1))
            .map_err(pipeline_err(NAME))
    })?;
    Ok(report(
        NAME,
        Category::Integration,
        original,
        refuted,
        0.0,
        Test::ZScore,
        settings,
        seed,
        false,
    ))
}

/// Regenerates the outcome from a linear model fitted on the data with the
/// treatment coefficient set to `true_effect` and residuals resampled; the
/// pipeline should recover `true_effect`.
///
/// The outcome model uses the adjustment set of a backdoor estimand and no
/// covariates for an iv estimand. Frontdoor pipelines are not supported.
pub fn refute_simulated_outcome(
    pipeline: &Pipeline,
    data: &Dataset,
    true_effect: f64,
    settings: &RefuteSettings,
    seed: RandomSeed,
) -> Result<RefutationReport, RefuteError> {
    const NAME: &str = "simulated_outcome_refuter";
    settings.validate()?;
    if !true_effect.is_finite() {
        return Err(RefuteError::InvalidArgument(format!(
            "true effect must be finite, got {true_effect}"
        )));
    }
    let estimand = pipeline.estimand().map_err(pipeline_err(NAME))?;
    let covariates: Vec<&String> = match &estimand.strategy {
        Strategy::Backdoor { adjustment_set } => adjustment_set.iter().collect(),
        Strategy::Iv { .. } => Vec::new(),
        Strategy::Frontdoor { .. } => {
            return Err(RefuteError::Unsupported {
                refuter: NAME.into(),
                reason: "frontdoor estimands have no single outcome equation in t".into(),
            })
        }
    };
    let original = original_ate(NAME, pipeline, data, seed)?;
    let t = data.column(&pipeline.treatment).map_err(data_err(NAME))?;
    let y = data.column(&pipeline.outcome).map_err(data_err(NAME))?;
    let mut cols = vec![t];
    for c in &covariates {
        cols.push(data.column(c).map_err(data_err(NAME))?);
    }
    let fit = ols_fit(&cols, y).map_err(|source| RefuteError::Fit {
        refuter: NAME.into(),
        source,
    })?;
    let n = y.len();
    // systematic part without the treatment term
    let base: Vec<f64> = (0..n)
        .map(|i| {
            fit.intercept()
                + (1..cols.len())
                    .map(|j| fit.coefficients[j] * cols[j][i])
                    .sum::<f64>()
        })
        .collect();
    let refuted = replicate(settings.replications, seed, |rs| {
        let mut rng = rs.stream(0);
        let sim: Vec<f64> = (0..n)
            .map(|i| true_effect * t[i] + base[i] + fit.residuals[rng.random_range(0..n)])
            .collect();
        let d = data
            .replace_column(&pipeline.outcome, sim)
            .map_err(data_err(NAME))?;
        pipeline
            .run_point(&d, rs.derive(1))
            .map_err(pipeline_err(NAME))
    })?;
    Ok(report(
        NAME,
        Category::Integration,
        original,
        refuted,
        true_effect,
        Test::ZScore,
        settings,
        seed,
        false,
    ))
}

fn fresh_name(pipeline: &Pipeline, data: &Dataset) -> String {
    let taken = |s: &str| data.has_column(s) || pipeline.graph.contains(s);
    if !taken(RANDOM_COMMON_CAUSE_COLUMN) {
        return RANDOM_COMMON_CAUSE_COLUMN.to_string();
    }
    (1..)
        .map(|k| format!("{RANDOM_COMMON_CAUSE_COLUMN}{k}"))
        .find(|s| !taken(s))
        .unwrap()
}

/// Pipeline on the graph with `name` added as a common cause of treatment
/// and outcome, selecting the estimand that matches the original one.
fn augmented_pipeline(
    refuter: &str,
    pipeline: &Pipeline,
    name: &str,
) -> Result<Pipeline, RefuteError> {
    let original = pipeline.estimand().map_err(pipeline_err(refuter))?;
    let graph = pipeline
        .graph
        .with_common_cause(name, true, &[&pipeline.treatment, &pipeline.outcome])
        .map_err(|e| pipeline_err(refuter)(PipelineError::Identify(e.into())))?;
    let augmented = pipeline.with_graph(graph);
    let all = augmented.identify_all().map_err(pipeline_err(refuter))?;
    let mut with_new: NodeSet = original.variables().clone();
    with_new.insert(name.to_string());
    let same_kind: Vec<&Estimand> = all.iter().filter(|e| e.kind() == original.kind()).collect();
    let index = same_kind
        .iter()
        .position(|e| e.variables() == &with_new)
        .or_else(|| {
            same_kind
                .iter()
                .position(|e| e.variables() == original.variables())
        });
    match index {
        Some(index) => {
            let choice = EstimandChoice::new(original.kind(), index);
            select(&all, choice).map_err(pipeline_err(refuter))?;
            Ok(Pipeline {
                choice,
                ..augmented
            })
        }
        None => Err(RefuteError::Unsupported {
            refuter: refuter.into(),
            reason: format!("no estimand matching {original} after adding common cause `{name}`"),
        }),
    }
}

/// Adds an independent standard-normal column as an observed common cause
/// of treatment and outcome, re-identifies on the augmented graph and
/// reruns; the estimate should not move.
pub fn refute_random_common_cause(
    pipeline: &Pipeline,
    data: &Dataset,
    settings: &RefuteSettings,
    seed: RandomSeed,
) -> Result<RefutationReport, RefuteError> {
    const NAME: &str = "random_common_cause";
    settings.validate()?;
    let original = original_ate(NAME, pipeline, data, seed)?;
    let name = fresh_name(pipeline, data);
    let augmented = augmented_pipeline(NAME, pipeline, &name)?;
    let std_normal = Normal::new(0.0, 1.0).unwrap();
    let refuted = replicate(settings.replications, seed, |rs| {
        let mut rng = rs.stream(0);
        let col: Vec<f64> = (0..data.row_count())
            .map(|_| std_normal.sample(&mut rng))
            .collect();
        let d = data.with_column(&name, col).map_err(data_err(NAME))?;
        augmented
            .run_point(&d, rs.derive(1))
            .map_err(pipeline_err(NAME))
    })?;
    let mut r = report(
        NAME,
        Category::ModelPerturbation,
        original,
        refuted,
        original,
        Test::Percentile,
        settings,
        seed,
        false,
    );
    r.notes.push(format!(
        "common cause column `{name}`, estimand {}",
        augmented.choice
    ));
    Ok(r)
}

/// Reruns on uniform subsets of `ceil(fraction * n)` rows; the original
/// estimate should sit inside the spread of the subset estimates.
pub fn refute_data_subset(
    pipeline: &Pipeline,
    data: &Dataset,
    fraction: f64,
    settings: &RefuteSettings,
    seed: RandomSeed,
) -> Result<RefutationReport, RefuteError> {
    const NAME: &str = "data_subset_refuter";
    settings.validate()?;
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(RefuteError::InvalidArgument(format!(
            "subset fraction must lie in (0, 1], got {fraction}"
        )));
    }
    let original = original_ate(NAME, pipeline, data, seed)?;
    let refuted = replicate(settings.replications, seed, |rs| {
        let d = data
            .subset_sample(fraction, rs.derive(0))
            .map_err(data_err(NAME))?;
        pipeline
            .run_point(&d, rs.derive(1))
            .map_err(pipeline_err(NAME))
    })?;
    let mut r = report(
        NAME,
        Category::Unit,
        original,
        refuted,
        original,
        Test::Percentile,
        settings,
        seed,
        false,
    );
    r.notes.push(format!("fraction {fraction}"));
    Ok(r)
}

/// Reruns on bootstrap resamples; also publishes the percentile interval.
pub fn refute_bootstrap(
    pipeline: &Pipeline,
    data: &Dataset,
    settings: &RefuteSettings,
    seed: RandomSeed,
) -> Result<RefutationReport, RefuteError> {
    const NAME: &str = "bootstrap_refuter";
    settings.validate()?;
    let original = original_ate(NAME, pipeline, data, seed)?;
    let refuted = replicate(settings.replications, seed, |rs| {
        let d = data
            .bootstrap_sample(rs.derive(0))
            .map_err(data_err(NAME))?;
        pipeline
            .run_point(&d, rs.derive(1))
            .map_err(pipeline_err(NAME))
    })?;
    Ok(report(
        NAME,
        Category::Unit,
        original,
        refuted,
        original,
        Test::Percentile,
        settings,
        seed,
        true,
    ))
}

/// Simulates an unobserved confounder `u ~ Normal(0, 1)` of strength
/// `(kappa_t, kappa_y)` and reports the re-estimated effect on a grid.
///
/// The treatment is redrawn as `Bernoulli(sigmoid(logit(e(x)) + kappa_t u))`
/// with `e(x)` the fitted propensity on the adjustment set, and the outcome
/// becomes `y + kappa_y u`. Draws use a uniform coupled to the observed
/// treatment, so at `kappa_t = 0` the redrawn treatment equals the observed
/// one, and every grid cell of a replication shares the same `u`. The
/// `(0, 0)` cell therefore reproduces the original estimate.
pub fn sensitivity_unobserved_confounder(
    pipeline: &Pipeline,
    data: &Dataset,
    grid: &SensitivityGrid,
    seed: RandomSeed,
) -> Result<SensitivitySurface, RefuteError> {
    const NAME: &str = "add_unobserved_common_cause";
    if grid.kappa_t.is_empty() || grid.kappa_y.is_empty() {
        return Err(RefuteError::InvalidArgument(
            "sensitivity grid is empty".into(),
        ));
    }
    if !grid.kappa_t.contains(&0.0) || !grid.kappa_y.contains(&0.0) {
        return Err(RefuteError::InvalidArgument(
            "sensitivity grid must contain kappa_t = 0 and kappa_y = 0".into(),
        ));
    }
    if grid
        .kappa_t
        .iter()
        .chain(&grid.kappa_y)
        .any(|k| !k.is_finite())
    {
        return Err(RefuteError::InvalidArgument(
            "sensitivity grid values must be finite".into(),
        ));
    }
    if grid.replications == 0 {
        return Err(RefuteError::InvalidArgument(
            "replications must be at least 1".into(),
        ));
    }
    let estimand = pipeline.estimand().map_err(pipeline_err(NAME))?;
    let Strategy::Backdoor { adjustment_set } = &estimand.strategy else {
        return Err(RefuteError::Unsupported {
            refuter: NAME.into(),
            reason: format!("needs a backdoor estimand, got {}", estimand.kind()),
        });
    };
    let original = original_ate(NAME, pipeline, data, seed)?;
    let t = data.column(&pipeline.treatment).map_err(data_err(NAME))?;
    let y = data.column(&pipeline.outcome).map_err(data_err(NAME))?;
    let covs = adjustment_set
        .iter()
        .map(|c| data.column(c))
        .collect::<Result<Vec<_>, _>>()
        .map_err(data_err(NAME))?;
    let fit = logistic_fit(&covs, t).map_err(|source| RefuteError::Fit {
        refuter: NAME.into(),
        source,
    })?;
    let n = t.len();
    let e: Vec<f64> = fit
        .probabilities(&covs, n)
        .into_iter()
        .map(|p| p.clamp(1e-12, 1.0 - 1e-12))
        .collect();
    let cells: Vec<(f64, f64)> = grid
        .kappa_t
        .iter()
        .flat_map(|&kt| grid.kappa_y.iter().map(move |&ky| (kt, ky)))
        .collect();
    let std_normal = Normal::new(0.0, 1.0).unwrap();

    let per_rep: Vec<Vec<f64>> = (0..grid.replications)
        .into_par_iter()
        .map(|r| -> Result<Vec<f64>, RefuteError> {
            let rs = seed.derive(r as u64);
            let mut ru = rs.stream(0);
            let mut rv = rs.stream(1);
            let u: Vec<f64> = (0..n).map(|_| std_normal.sample(&mut ru)).collect();
            // uniform on [0, 1) marginally, below e(x) exactly when t = 1
            let coupled: Vec<f64> = (0..n)
                .map(|i| {
                    let v: f64 = rv.random();
                    if t[i] == 1.0 {
                        v * e[i]
                    } else {
                        e[i] + v * (1.0 - e[i])
                    }
                })
                .collect();
            cells
                .iter()
                .map(|&(kt, ky)| {
                    let t2: Vec<f64> = (0..n)
                        .map(|i| {
                            let p = if kt == 0.0 {
                                e[i]
                            } else {
                                sigmoid(logit(e[i]) + kt * u[i])
                            };
                            if coupled[i] < p {
                                1.0
                            } else {
                                0.0
                            }
                        })
                        .collect();
                    let y2: Vec<f64> = (0..n).map(|i| y[i] + ky * u[i]).collect();
                    let d = data
                        .replace_column(&pipeline.treatment, t2)
                        .and_then(|d| d.replace_column(&pipeline.outcome, y2))
                        .map_err(data_err(NAME))?;
                    pipeline
                        .run_point(&d, rs.derive(1))
                        .map_err(pipeline_err(NAME))
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;

    let reps = grid.replications as f64;
    let grid_out = cells
        .iter()
        .enumerate()
        .map(|(k, &(kappa_t, kappa_y))| {
            let vals: Vec<f64> = per_rep.iter().map(|row| row[k]).collect();
            SensitivityCell {
                kappa_t,
                kappa_y,
                adjusted_ate: mean(&vals),
                std_error: std_dev(&vals) / reps.sqrt(),
            }
        })
        .collect();
    Ok(SensitivitySurface {
        refuter: NAME.into(),
        category: Category::ModelPerturbation,
        original_ate: original,
        replications: grid.replications,
        seed,
        grid: grid_out,
    })
}

/// A refuter with its parameters, as named in configuration files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name")]
pub enum RefuterSpec {
    #[serde(rename = "placebo_treatment_refuter")]
    PlaceboTreatment {
        #[serde(default)]
        mode: PlaceboMode,
    },
    #[serde(rename = "dummy_outcome_refuter")]
    DummyOutcome,
    #[serde(rename = "simulated_outcome_refuter")]
    SimulatedOutcome {
        #[serde(default)]
        true_effect: f64,
    },
    #[serde(rename = "random_common_cause")]
    RandomCommonCause,
    #[serde(rename = "add_unobserved_common_cause")]
    UnobservedCommonCause {
        #[serde(default, flatten)]
        grid: SensitivityGrid,
    },
    #[serde(rename = "data_subset_refuter")]
    DataSubset {
        #[serde(default = "default_fraction")]
        fraction: f64,
    },
    #[serde(rename = "bootstrap_refuter")]
    Bootstrap,
}

fn default_fraction() -> f64 {
    DEFAULT_SUBSET_FRACTION
}

impl RefuterSpec {
    /// Default parameters for a refuter name from [`REFUTER_NAMES`].
    pub fn from_name(name: &str) -> Option<RefuterSpec> {
        Some(match name {
            "placebo_treatment_refuter" => RefuterSpec::PlaceboTreatment {
                mode: PlaceboMode::default(),
            },
            "dummy_outcome_refuter" => RefuterSpec::DummyOutcome,
            "simulated_outcome_refuter" => RefuterSpec::SimulatedOutcome { true_effect: 0.0 },
            "random_common_cause" => RefuterSpec::RandomCommonCause,
            "add_unobserved_common_cause" => RefuterSpec::UnobservedCommonCause {
                grid: SensitivityGrid::default(),
            },
            "data_subset_refuter" => RefuterSpec::DataSubset {
                fraction: DEFAULT_SUBSET_FRACTION,
            },
            "bootstrap_refuter" => RefuterSpec::Bootstrap,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            RefuterSpec::PlaceboTreatment { .. } => REFUTER_NAMES[0],
            RefuterSpec::DummyOutcome => REFUTER_NAMES[1],
            RefuterSpec::SimulatedOutcome { .. } => REFUTER_NAMES[2],
            RefuterSpec::RandomCommonCause => REFUTER_NAMES[3],
            RefuterSpec::UnobservedCommonCause { .. } => REFUTER_NAMES[4],
            RefuterSpec::DataSubset { .. } => REFUTER_NAMES[5],
            RefuterSpec::Bootstrap => REFUTER_NAMES[6],
        }
    }

    pub fn run(
        &self,
        pipeline: &Pipeline,
        data: &Dataset,
        settings: &RefuteSettings,
        seed: RandomSeed,
    ) -> Result<RefuterOutcome, RefuteError> {
        Ok(match self {
            RefuterSpec::PlaceboTreatment { mode } => RefuterOutcome::Report(
                refute_placebo_treatment(pipeline, data, settings, *mode, seed)?,
            ),
            RefuterSpec::DummyOutcome => {
                RefuterOutcome::Report(refute_dummy_outcome(pipeline, data, settings, seed)?)
            }
            RefuterSpec::SimulatedOutcome { true_effect } => RefuterOutcome::Report(
                refute_simulated_outcome(pipeline, data, *true_effect, settings, seed)?,
            ),
            RefuterSpec::RandomCommonCause => {
                RefuterOutcome::Report(refute_random_common_cause(pipeline, data, settings, seed)?)
            }
            RefuterSpec::UnobservedCommonCause { grid } => RefuterOutcome::Sensitivity(
                sensitivity_unobserved_confounder(pipeline, data, grid, seed)?,
            ),
            RefuterSpec::DataSubset { fraction } => RefuterOutcome::Report(refute_data_subset(
                pipeline, data, *fraction, settings, seed,
            )?),
            RefuterSpec::Bootstrap => {
                RefuterOutcome::Report(refute_bootstrap(pipeline, data, settings, seed)?)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RefuterOutcome {
    Report(RefutationReport),
    Sensitivity(SensitivitySurface),
}

impl RefuterOutcome {
    pub fn refuter(&self) -> &str {
        match self {
            RefuterOutcome::Report(r) => &r.refuter,
            RefuterOutcome::Sensitivity(s) => &s.refuter,
        }
    }
}
