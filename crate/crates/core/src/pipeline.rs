//! Graph, estimand choice and estimator bundled into one rerunnable analysis.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{Dataset, RandomSeed};
use crate::estimate::{EffectEstimate, EstimateError, Estimator};
use crate::graph::CausalGraph;
use crate::identify::{identify_effect, Estimand, EstimandKind, IdentifyError};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Identify(#[from] IdentifyError),
    #[error("no {kind} estimand #{index} (identified: {available})")]
    NotIdentified {
        kind: EstimandKind,
        index: usize,
        available: String,
    },
    #[error("estimator `{estimator}` cannot handle {kind} estimands")]
    Incompatible {
        estimator: String,
        kind: EstimandKind,
    },
    #[error(transparent)]
    Estimate(#[from] EstimateError),
}

/// Which identified estimand to use: the `index`-th one of kind `kind`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimandChoice {
    pub kind: EstimandKind,
    #[serde(default)]
    pub index: usize,
}

impl EstimandChoice {
    pub fn new(kind: EstimandKind, index: usize) -> Self {
        EstimandChoice { kind, index }
    }
}

impl fmt::Display for EstimandChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.kind, self.index)
    }
}

/// Identify, select, estimate.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub graph: CausalGraph,
    pub treatment: String,
    pub outcome: String,
    pub choice: EstimandChoice,
    pub estimator: Arc<dyn Estimator>,
}

impl Pipeline {
    pub fn new(
        graph: CausalGraph,
        treatment: &str,
        outcome: &str,
        choice: EstimandChoice,
        estimator: Arc<dyn Estimator>,
    ) -> Result<Self, PipelineError> {
        if !estimator.supports(choice.kind) {
            return Err(PipelineError::Incompatible {
                estimator: estimator.name().to_string(),
                kind: choice.kind,
            });
        }
        Ok(Pipeline {
            graph,
            treatment: treatment.to_string(),
            outcome: outcome.to_string(),
            choice,
            estimator,
        })
    }

    /// Same analysis on a different graph.
    pub fn with_graph(&self, graph: CausalGraph) -> Pipeline {
        Pipeline {
            graph,
            ..self.clone()
        }
    }

    pub fn identify_all(&self) -> Result<Vec<Estimand>, PipelineError> {
        Ok(identify_effect(
            &self.graph,
            &self.treatment,
            &self.outcome,
        )?)
    }

    /// The estimand selected by [`Pipeline::choice`].
    pub fn estimand(&self) -> Result<Estimand, PipelineError> {
        let all = self.identify_all()?;
        select(&all, self.choice)
    }

    pub fn run(&self, data: &Dataset, seed: RandomSeed) -> Result<EffectEstimate, PipelineError> {
        let e = self.estimand()?;
        Ok(self.estimator.estimate(data, &e, seed)?)
    }

    /// Point estimate through the full pipeline, skipping any resampled
    /// uncertainty.
    pub fn run_point(&self, data: &Dataset, seed: RandomSeed) -> Result<f64, PipelineError> {
        let e = self.estimand()?;
        Ok(self.estimator.point(data, &e, seed)?)
    }
}

pub fn select(all: &[Estimand], choice: EstimandChoice) -> Result<Estimand, PipelineError> {
    all.iter()
        .filter(|e| e.kind() == choice.kind)
        .nth(choice.index)
        .cloned()
        .ok_or_else(|| PipelineError::NotIdentified {
            kind: choice.kind,
            index: choice.index,
            available: if all.is_empty() {
                "none".to_string()
            } else {
                all.iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join("; ")
            },
        })
}
