//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use causal_core::data::{Dataset, RandomSeed};
use causal_core::estimate::{ols_fit, EffectEstimate, EstimateError, Estimator, LinearRegression};
use causal_core::graph::{CausalGraph, NodeSet};
use causal_core::identify::{Estimand, EstimandKind, Strategy};
use causal_core::pipeline::{EstimandChoice, Pipeline};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A DAG as plain adjacency, kept separate from the library type.
#[derive(Debug, Clone)]
pub struct RawDag {
    pub names: Vec<String>,
    pub observed: Vec<bool>,
    pub edges: Vec<(usize, usize)>,
}

impl RawDag {
    pub fn random(seed: u64, max_nodes: usize) -> RawDag {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(2..=max_nodes);
        let density: f64 = rng.random_range(0.15..0.6);
        // random topological order via a shuffled labelling
        let mut labels: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.random_range(0..=i);
            labels.swap(i, j);
        }
        let names = (0..n).map(|i| format!("v{}", labels[i])).collect();
        let observed = (0..n).map(|_| rng.random::<f64>() > 0.2).collect();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rng.random::<f64>() < density {
                    edges.push((a, b));
                }
            }
        }
        RawDag {
            names,
            observed,
            edges,
        }
    }

    pub fn to_graph(&self) -> CausalGraph {
        CausalGraph::new(
            self.names
                .iter()
                .cloned()
                .zip(self.observed.iter().copied()),
            self.edges
                .iter()
                .map(|&(a, b)| (self.names[a].clone(), self.names[b].clone())),
        )
        .expect("random DAG is valid")
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a, b))
    }

    pub fn descendants(&self, v: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([v]);
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for &(a, b) in &self.edges {
                if a == u && seen.insert(b) {
                    stack.push(b);
                }
            }
        }
        seen
    }

    /// Every simple path between `a` and `b` in the skeleton.
    pub fn paths(&self, a: usize, b: usize) -> Vec<Vec<usize>> {
        fn dfs(
            g: &RawDag,
            cur: usize,
            goal: usize,
            path: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if cur == goal {
                out.push(path.clone());
                return;
            }
            for next in 0..g.n() {
                let adjacent = g.has_edge(cur, next) || g.has_edge(next, cur);
                if adjacent && !path.contains(&next) {
                    path.push(next);
                    dfs(g, next, goal, path, out);
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        dfs(self, a, b, &mut vec![a], &mut out);
        out
    }

    pub fn all_descendants(&self) -> Vec<BTreeSet<usize>> {
        (0..self.n()).map(|v| self.descendants(v)).collect()
    }

    /// A path is blocked by `z` if some interior non-collider is in `z`, or
    /// some interior collider has neither itself nor a descendant in `z`.
    pub fn blocked(&self, path: &[usize], z: &BTreeSet<usize>, desc: &[BTreeSet<usize>]) -> bool {
        for i in 1..path.len() - 1 {
            let (p, v, q) = (path[i - 1], path[i], path[i + 1]);
            let collider = self.has_edge(p, v) && self.has_edge(q, v);
            if collider {
                if desc[v].is_disjoint(z) {
                    return true;
                }
            } else if z.contains(&v) {
                return true;
            }
        }
        false
    }

    pub fn d_separated(
        &self,
        x: &BTreeSet<usize>,
        y: &BTreeSet<usize>,
        z: &BTreeSet<usize>,
    ) -> bool {
        let desc = self.all_descendants();
        x.iter().all(|&a| {
            y.iter()
                .all(|&b| self.paths(a, b).iter().all(|p| self.blocked(p, z, &desc)))
        })
    }

    /// All valid observed adjustment sets and the inclusion-minimal ones,
    /// checking the backdoor criterion from its path definition on the
    /// unmodified graph: no member descends from `t`, and every path from `t`
    /// to `y` that starts with an edge into `t` is blocked.
    pub fn backdoor_sets(&self, t: usize, y: usize) -> (Vec<NodeSet>, Vec<NodeSet>) {
        let desc = self.all_descendants();
        let into_t: Vec<Vec<usize>> = self
            .paths(t, y)
            .into_iter()
            .filter(|p| self.has_edge(p[1], t))
            .collect();
        let pool: Vec<usize> = (0..self.n())
            .filter(|&v| v != t && v != y && self.observed[v])
            .collect();
        let mut valid: Vec<BTreeSet<usize>> = Vec::new();
        for mask in 0u32..(1 << pool.len()) {
            let z: BTreeSet<usize> = pool
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &v)| v)
                .collect();
            let ok = desc[t].is_disjoint(&z) && into_t.iter().all(|p| self.blocked(p, &z, &desc));
            if ok {
                valid.push(z);
            }
        }
        let minimal: Vec<&BTreeSet<usize>> = valid
            .iter()
            .filter(|z| !valid.iter().any(|w| w != *z && w.is_subset(z)))
            .collect();
        let mut all: Vec<NodeSet> = valid.iter().map(|z| self.names_of(z)).collect();
        let mut min: Vec<NodeSet> = minimal.into_iter().map(|z| self.names_of(z)).collect();
        all.sort();
        min.sort();
        (all, min)
    }

    pub fn names_of(&self, s: &BTreeSet<usize>) -> NodeSet {
        s.iter().map(|&v| self.names[v].clone()).collect()
    }
}

/// Least squares through the normal equations `(X'X) b = X'y`, solved by
/// Gaussian elimination with partial pivoting. Intercept last.
pub fn normal_equations(columns: &[&[f64]], y: &[f64]) -> Vec<f64> {
    let n = y.len();
    let p = columns.len() + 1;
    let x = |i: usize, j: usize| {
        if j < columns.len() {
            columns[j][i]
        } else {
            1.0
        }
    };
    let mut a = vec![vec![0.0; p + 1]; p];
    for r in 0..p {
        for c in 0..p {
            a[r][c] = (0..n).map(|i| x(i, r) * x(i, c)).sum();
        }
        a[r][p] = (0..n).map(|i| x(i, r) * y[i]).sum();
    }
    for col in 0..p {
        let piv = (col..p)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, piv);
        for r in 0..p {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..=p {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    (0..p).map(|r| a[r][p] / a[r][r]).collect()
}

/// Planted bug: ignores the data.
#[derive(Debug)]
pub struct ConstantEstimator(pub f64);

impl Estimator for ConstantEstimator {
    fn name(&self) -> &str {
        "constant"
    }
    fn supports(&self, _kind: EstimandKind) -> bool {
        true
    }
    fn estimate(
        &self,
        data: &Dataset,
        estimand: &Estimand,
        _seed: RandomSeed,
    ) -> Result<EffectEstimate, EstimateError> {
        Ok(EffectEstimate {
            ate: self.0,
            std_error: 0.0,
            ci_low: self.0,
            ci_high: self.0,
            method: "constant".into(),
            estimand: estimand.clone(),
            n: data.row_count(),
            warnings: vec![],
        })
    }
}

/// Planted bug: reports the mean of all slope coefficients of the outcome
/// regression instead of the treatment coefficient.
#[derive(Debug)]
pub struct MeanOfCoefficients;

impl Estimator for MeanOfCoefficients {
    fn name(&self) -> &str {
        "mean_of_coefficients"
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
        let Strategy::Backdoor { adjustment_set } = &estimand.strategy else {
            unreachable!()
        };
        let mut cols = vec![data.column(&estimand.treatment)?];
        for c in adjustment_set {
            cols.push(data.column(c)?);
        }
        let fit = ols_fit(&cols, data.column(&estimand.outcome)?)
            .map_err(|e| EstimateError::Invalid(e.to_string()))?;
        let k = cols.len();
        let ate = fit.coefficients[..k].iter().sum::<f64>() / k as f64;
        Ok(EffectEstimate {
            ate,
            std_error: 0.0,
            ci_low: ate,
            ci_high: ate,
            method: "mean_of_coefficients".into(),
            estimand: estimand.clone(),
            n: data.row_count(),
            warnings: vec![],
        })
    }
}

pub fn graph(dot: &str) -> CausalGraph {
    causal_core::parse_graph(dot).unwrap()
}

pub fn backdoor_pipeline(dot: &str, estimator: Arc<dyn Estimator>) -> Pipeline {
    Pipeline::new(
        graph(dot),
        "t",
        "y",
        EstimandChoice::new(EstimandKind::Backdoor, 0),
        estimator,
    )
    .unwrap()
}

pub fn regression_pipeline(dot: &str) -> Pipeline {
    backdoor_pipeline(dot, Arc::new(LinearRegression))
}

/// Example 1 graph with `z` wrongly drawn as a confounder.
pub const EXAMPLE1_FAULTY_GRAPH: &str = "digraph { w -> t; w -> y; z -> t; z -> y; t -> y; }";
/// Example 2 graph with the mediator wrongly drawn as a confounder.
pub const EXAMPLE2_FAULTY_GRAPH: &str = "digraph { m -> t; m -> y; t -> y; }";
