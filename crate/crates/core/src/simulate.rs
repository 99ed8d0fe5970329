//! Data-generating processes with known effects.
//!
//! `Normal(mu, v)` in the structural equations below means mean `mu` and
//! **variance** `v` unless [`NormalScale::StdDev`] is selected.
//!
//! Instrument example (`dgp_example1`):
//!
//! ```text
//! z ~ Bernoulli(0.5)
//! w ~ Normal(0, 0.4)
//! t = 1 if sigmoid(2z - 1 + w) >= 0.5 else 0        (i.e. 2z - 1 + w >= 0)
//! y = 10 t + 10 w + e,   e ~ Normal(0, 100)
//! ```
//!
//! Mediator example (`dgp_example2`):
//!
//! ```text
//! t ~ Bernoulli(0.5)
//! m ~ Bernoulli(0.95 t + 0.05 (1 - t))
//! y = 10 m + e,   e ~ Normal(0, 1)
//! ```
//!
//! The total effect of `t` on `y` in the mediator example is
//! `10 * (0.95 - 0.05) = 9`.

use std::io::Write;

use rand::Rng;
use rand_distr::{Bernoulli, Distribution, Normal, Uniform};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{DataError, Dataset, RandomSeed};
use crate::estimate::{estimate_backdoor_regression, logistic::sigmoid, EstimateError};
use crate::graph::{parse_graph, CausalGraph, NodeSet};
use crate::identify::Estimand;
use crate::stats::{mean, std_dev};

pub const EXAMPLE1_GRAPH: &str =
    "digraph {\n    w -> t;\n    w -> y;\n    z -> t;\n    t -> y;\n}\n";
pub const EXAMPLE2_GRAPH: &str = "digraph {\n    t -> m;\n    m -> y;\n}\n";
pub const EXAMPLE1_TRUE_ATE: f64 = 10.0;
pub const EXAMPLE2_TRUE_ATE: f64 = 9.0;

#[derive(Debug, Error)]
pub enum SimulateError {
    #[error("sample size must be at least 1")]
    EmptySample,
    #[error("noise variance must be finite and non-negative, got {0}")]
    BadNoise(f64),
    #[error("figure variant must be 1 or 2, got {0}")]
    UnknownVariant(u8),
    #[error("need at least one dataset")]
    NoDatasets,
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Estimate(#[from] EstimateError),
}

/// How the second parameter of `Normal(mu, v)` is read.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalScale {
    #[default]
    Variance,
    StdDev,
}

impl NormalScale {
    fn normal(self, mean: f64, param: f64) -> Normal<f64> {
        let sd = match self {
            NormalScale::Variance => param.sqrt(),
            NormalScale::StdDev => param,
        };
        Normal::new(mean, sd).expect("finite non-negative scale")
    }
}

/// A simulated dataset with its generating graph and true ATE.
#[derive(Debug, Clone)]
pub struct Simulated {
    pub data: Dataset,
    pub graph: CausalGraph,
    pub true_ate: f64,
}

pub fn dgp_example1(n: usize, seed: RandomSeed) -> Result<Simulated, SimulateError> {
    dgp_example1_with(n, seed, NormalScale::Variance)
}

pub fn dgp_example1_with(
    n: usize,
    seed: RandomSeed,
    scale: NormalScale,
) -> Result<Simulated, SimulateError> {
    if n == 0 {
        return Err(SimulateError::EmptySample);
    }
    let coin = Bernoulli::new(0.5).unwrap();
    let w_dist = scale.normal(0.0, 0.4);
    let e_dist = scale.normal(0.0, 100.0);
    let mut rz = seed.stream(0);
    let mut rw = seed.stream(1);
    let mut re = seed.stream(2);
    let z: Vec<f64> = (0..n)
        .map(|_| f64::from(u8::from(coin.sample(&mut rz))))
        .collect();
    let w: Vec<f64> = (0..n).map(|_| w_dist.sample(&mut rw)).collect();
    let t: Vec<f64> = z
        .iter()
        .zip(&w)
        .map(|(z, w)| if 2.0 * z - 1.0 + w >= 0.0 { 1.0 } else { 0.0 })
        .collect();
    let y: Vec<f64> = (0..n)
        .map(|i| 10.0 * t[i] + 10.0 * w[i] + e_dist.sample(&mut re))
        .collect();
    Ok(Simulated {
        data: Dataset::new([("t", t), ("y", y), ("z", z), ("w", w)])?,
        graph: parse_graph(EXAMPLE1_GRAPH).expect("static graph"),
        true_ate: EXAMPLE1_TRUE_ATE,
    })
}

pub fn dgp_example2(n: usize, seed: RandomSeed) -> Result<Simulated, SimulateError> {
    if n == 0 {
        return Err(SimulateError::EmptySample);
    }
    let coin = Bernoulli::new(0.5).unwrap();
    let uniform = Uniform::new(0.0, 1.0).unwrap();
    let noise = Normal::new(0.0, 1.0).unwrap();
    let mut rt = seed.stream(0);
    let mut rm = seed.stream(1);
    let mut re = seed.stream(2);
    let t: Vec<f64> = (0..n)
        .map(|_| f64::from(u8::from(coin.sample(&mut rt))))
        .collect();
    let m: Vec<f64> = t
        .iter()
        .map(|&t| {
            let p = 0.95 * t + 0.05 * (1.0 - t);
            if uniform.sample(&mut rm) < p {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    let y: Vec<f64> = m
        .iter()
        .map(|&m| 10.0 * m + noise.sample(&mut re))
        .collect();
    Ok(Simulated {
        data: Dataset::new([("t", t), ("y", y), ("m", m)])?,
        graph: parse_graph(EXAMPLE2_GRAPH).expect("static graph"),
        true_ate: EXAMPLE2_TRUE_ATE,
    })
}

/// Configuration of the generic linear DGP.
///
/// Structural equations, with coefficients drawn once per seed:
///
/// ```text
/// w_j ~ Normal(0, 1)                    a_j ~ Uniform(0.5, 1.5), g_j ~ Uniform(5, 15)
/// z_k ~ Bernoulli(0.5)                  b_k ~ Uniform(1, 2)
/// t   ~ Bernoulli(sigmoid(sum_j a_j w_j + sum_k b_k (2 z_k - 1)))
/// m   = t + Normal(0, 1)                (only with include_mediator)
/// y   = effect * (m or t) + sum_j g_j w_j + Normal(0, noise_variance)
/// ```
///
/// The average treatment effect is `effect` either way.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearDgpConfig {
    pub n: usize,
    pub num_confounders: usize,
    pub num_instruments: usize,
    pub include_mediator: bool,
    pub effect: f64,
    pub noise_variance: f64,
    pub seed: RandomSeed,
}

impl Default for LinearDgpConfig {
    fn default() -> Self {
        LinearDgpConfig {
            n: 10_000,
            num_confounders: 1,
            num_instruments: 1,
            include_mediator: false,
            effect: 10.0,
            noise_variance: 1.0,
            seed: RandomSeed(0),
        }
    }
}

pub fn generate_linear_dgp(cfg: &LinearDgpConfig) -> Result<Simulated, SimulateError> {
    if cfg.n == 0 {
        return Err(SimulateError::EmptySample);
    }
    if !(cfg.noise_variance >= 0.0 && cfg.noise_variance.is_finite()) {
        return Err(SimulateError::BadNoise(cfg.noise_variance));
    }
    let n = cfg.n;
    let mut coef = cfg.seed.stream(0);
    let a: Vec<f64> = (0..cfg.num_confounders)
        .map(|_| coef.random_range(0.5..1.5))
        .collect();
    let g: Vec<f64> = (0..cfg.num_confounders)
        .map(|_| coef.random_range(5.0..15.0))
        .collect();
    let b: Vec<f64> = (0..cfg.num_instruments)
        .map(|_| coef.random_range(1.0..2.0))
        .collect();

    let std_normal = Normal::new(0.0, 1.0).unwrap();
    let coin = Bernoulli::new(0.5).unwrap();
    let mut rw = cfg.seed.stream(1);
    let mut rz = cfg.seed.stream(2);
    let mut rt = cfg.seed.stream(3);
    let mut rm = cfg.seed.stream(4);
    let mut re = cfg.seed.stream(5);

    let w: Vec<Vec<f64>> = (0..cfg.num_confounders)
        .map(|_| (0..n).map(|_| std_normal.sample(&mut rw)).collect())
        .collect();
    let z: Vec<Vec<f64>> = (0..cfg.num_instruments)
        .map(|_| {
            (0..n)
                .map(|_| f64::from(u8::from(coin.sample(&mut rz))))
                .collect()
        })
        .collect();
    let t: Vec<f64> = (0..n)
        .map(|i| {
            let eta: f64 = (0..cfg.num_confounders)
                .map(|j| a[j] * w[j][i])
                .sum::<f64>()
                + (0..cfg.num_instruments)
                    .map(|k| b[k] * (2.0 * z[k][i] - 1.0))
                    .sum::<f64>();
            if rt.random::<f64>() < sigmoid(eta) {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    let m: Option<Vec<f64>> = cfg
        .include_mediator
        .then(|| t.iter().map(|&t| t + std_normal.sample(&mut rm)).collect());
    let noise = Normal::new(0.0, cfg.noise_variance.sqrt()).unwrap();
    let driver = m.as_ref().unwrap_or(&t);
    let y: Vec<f64> = (0..n)
        .map(|i| {
            cfg.effect * driver[i]
                + (0..cfg.num_confounders)
                    .map(|j| g[j] * w[j][i])
                    .sum::<f64>()
                + noise.sample(&mut re)
        })
        .collect();

    let mut columns: Vec<(String, Vec<f64>)> = vec![("t".into(), t), ("y".into(), y)];
    let mut edges: Vec<(String, String)> = Vec::new();
    for (j, col) in w.into_iter().enumerate() {
        let name = format!("w{j}");
        edges.push((name.clone(), "t".into()));
        edges.push((name.clone(), "y".into()));
        columns.push((name, col));
    }
    for (k, col) in z.into_iter().enumerate() {
        let name = format!("z{k}");
        edges.push((name.clone(), "t".into()));
        columns.push((name, col));
    }
    if let Some(m) = m {
        edges.push(("t".into(), "m".into()));
        edges.push(("m".into(), "y".into()));
        columns.push(("m".into(), m));
    } else {
        edges.push(("t".into(), "y".into()));
    }
    let nodes: Vec<(String, bool)> = columns.iter().map(|(n, _)| (n.clone(), true)).collect();
    let graph = CausalGraph::new(nodes, edges).expect("generated graph is a DAG");
    Ok(Simulated {
        data: Dataset::new(columns)?,
        graph,
        true_ate: cfg.effect,
    })
}

/// One estimate in a figure replication.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureRow {
    pub dataset_index: usize,
    pub estimator: String,
    pub ate: f64,
}

pub const CORRECT_LABEL: &str = "correct";
pub const FAULTY_LABEL: &str = "faulty";

/// Adjustment sets compared in each figure panel: (correct, faulty).
pub fn figure_adjustments(variant: u8) -> Result<(NodeSet, NodeSet), SimulateError> {
    let set = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<NodeSet>();
    match variant {
        1 => Ok((set(&["w"]), set(&["w", "z"]))),
        2 => Ok((set(&[]), set(&["m"]))),
        v => Err(SimulateError::UnknownVariant(v)),
    }
}

/// Samples `n_datasets` datasets from the instrument (variant 1) or mediator
/// (variant 2) example and estimates the ATE on each with the correct and
/// the faulty adjustment set. Rows come out ordered by dataset, correct first.
pub fn replicate_figure1(
    variant: u8,
    n_datasets: usize,
    n: usize,
    seed: RandomSeed,
) -> Result<Vec<FigureRow>, SimulateError> {
    let (correct, faulty) = figure_adjustments(variant)?;
    if n_datasets == 0 {
        return Err(SimulateError::NoDatasets);
    }
    let per_dataset: Vec<[FigureRow; 2]> = (0..n_datasets)
        .into_par_iter()
        .map(|i| -> Result<[FigureRow; 2], SimulateError> {
            let ds_seed = seed.derive(i as u64);
            let sim = if variant == 1 {
                dgp_example1(n, ds_seed)?
            } else {
                dgp_example2(n, ds_seed)?
            };
            let row = |label: &str, set: &NodeSet| -> Result<FigureRow, SimulateError> {
                let e = Estimand::backdoor("t", "y", set.clone());
                Ok(FigureRow {
                    dataset_index: i,
                    estimator: label.to_string(),
                    ate: estimate_backdoor_regression(&sim.data, &e)?.ate,
                })
            };
            Ok([row(CORRECT_LABEL, &correct)?, row(FAULTY_LABEL, &faulty)?])
        })
        .collect::<Result<_, _>>()?;
    Ok(per_dataset.into_iter().flatten().collect())
}

/// Summary statistics of a figure replication.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureSummary {
    pub variant: u8,
    pub n_datasets: usize,
    pub true_ate: f64,
    pub correct_adjustment: NodeSet,
    pub faulty_adjustment: NodeSet,
    pub correct_mean: f64,
    pub correct_std: f64,
    pub faulty_mean: f64,
    pub faulty_std: f64,
    /// `faulty_std / correct_std`.
    pub std_ratio: f64,
}

pub fn summarize_figure(variant: u8, rows: &[FigureRow]) -> Result<FigureSummary, SimulateError> {
    let (correct, faulty) = figure_adjustments(variant)?;
    let pick = |label: &str| -> Vec<f64> {
        rows.iter()
            .filter(|r| r.estimator == label)
            .map(|r| r.ate)
            .collect()
    };
    let (c, f) = (pick(CORRECT_LABEL), pick(FAULTY_LABEL));
    if c.is_empty() || f.is_empty() {
        return Err(SimulateError::NoDatasets);
    }
    let (cs, fs) = (std_dev(&c), std_dev(&f));
    Ok(FigureSummary {
        variant,
        n_datasets: c.len(),
        true_ate: if variant == 1 {
            EXAMPLE1_TRUE_ATE
        } else {
            EXAMPLE2_TRUE_ATE
        },
        correct_adjustment: correct,
        faulty_adjustment: faulty,
        correct_mean: mean(&c),
        correct_std: cs,
        faulty_mean: mean(&f),
        faulty_std: fs,
        std_ratio: if cs > 0.0 { fs / cs } else { f64::INFINITY },
    })
}

/// Writes rows as `dataset_index,estimator,ate`.
pub fn write_figure_csv<W: Write>(rows: &[FigureRow], writer: W) -> Result<(), DataError> {
    let mut w = csv::Writer::from_writer(writer);
    let err = |e: csv::Error| DataError::Csv(e.to_string());
    w.write_record(["dataset_index", "estimator", "ate"])
        .map_err(err)?;
    for r in rows {
        w.write_record([
            r.dataset_index.to_string(),
            r.estimator.clone(),
            r.ate.to_string(),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| DataError::Csv(e.to_string()))
}
