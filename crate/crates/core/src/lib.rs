//! Causal effect estimation with explicit, testable assumptions.
//!
//! The workflow has four steps:
//!
//! 1. **Model**: write the assumptions down as a [`graph::CausalGraph`].
//! 2. **Identify**: derive estimands from the graph ([`identify::identify_effect`]).
//! 3. **Estimate**: compute the average treatment effect ([`estimate`]).
//! 4. **Refute**: try to falsify the result ([`refute`]).
//!
//! [`simulate`] provides data-generating processes with known effects, and
//! [`cli`] drives the whole pipeline from files.

pub mod cli;
pub mod data;
pub mod estimate;
pub mod graph;
pub mod identify;
pub mod pipeline;
pub mod refute;
pub mod simulate;
pub mod stats;

pub use data::{Dataset, RandomSeed};
pub use estimate::{EffectEstimate, Estimator};
pub use graph::{parse_graph, CausalGraph, NodeSet};
pub use identify::{identify_effect, Estimand, EstimandKind};
pub use pipeline::{EstimandChoice, Pipeline};
pub use refute::{RefutationReport, RefuteSettings, RefuterSpec};
