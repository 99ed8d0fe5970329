//! Graphical identification of average treatment effects.
//!
//! Three strategies are implemented: backdoor adjustment, the frontdoor
//! criterion, and unconditional instrumental variables. An empty result from
//! [`identify_effect`] means none of these applies to the graph; it does not
//! prove the effect unidentifiable.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{CausalGraph, GraphError, NodeSet};

/// Candidate pools larger than this are refused by the subset searches.
pub const MAX_SEARCH_CANDIDATES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentifyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("treatment and outcome are the same variable `{0}`")]
    TreatmentIsOutcome(String),
    #[error("outcome `{outcome}` is an ancestor of treatment `{treatment}`")]
    OutcomeCausesTreatment { treatment: String, outcome: String },
    #[error("variable `{0}` is unobserved")]
    Unobserved(String),
    #[error("variable `{0}` must differ from treatment and outcome")]
    NotACovariate(String),
    #[error("search over {0} candidate variables exceeds the limit of {MAX_SEARCH_CANDIDATES}")]
    SearchTooLarge(usize),
}

/// Identification strategy and the variables that realize it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    Backdoor { adjustment_set: NodeSet },
    Frontdoor { mediator_set: NodeSet },
    Iv { instrument_set: NodeSet },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimandKind {
    Backdoor,
    Frontdoor,
    Iv,
}

impl EstimandKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EstimandKind::Backdoor => "backdoor",
            EstimandKind::Frontdoor => "frontdoor",
            EstimandKind::Iv => "iv",
        }
    }
}

impl fmt::Display for EstimandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for EstimandKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "backdoor" => Ok(EstimandKind::Backdoor),
            "frontdoor" => Ok(EstimandKind::Frontdoor),
            "iv" => Ok(EstimandKind::Iv),
            other => Err(format!(
                "unknown estimand kind `{other}` (expected backdoor, frontdoor or iv)"
            )),
        }
    }
}

/// An identified estimand for the effect of `treatment` on `outcome`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "EstimandRepr", try_from = "EstimandRepr")]
pub struct Estimand {
    pub treatment: String,
    pub outcome: String,
    pub strategy: Strategy,
}

impl Estimand {
    pub fn backdoor(treatment: &str, outcome: &str, adjustment_set: NodeSet) -> Self {
        Estimand {
            treatment: treatment.to_string(),
            outcome: outcome.to_string(),
            strategy: Strategy::Backdoor { adjustment_set },
        }
    }

    pub fn frontdoor(treatment: &str, outcome: &str, mediator_set: NodeSet) -> Self {
        Estimand {
            treatment: treatment.to_string(),
            outcome: outcome.to_string(),
            strategy: Strategy::Frontdoor { mediator_set },
        }
    }

    pub fn iv(treatment: &str, outcome: &str, instrument_set: NodeSet) -> Self {
        Estimand {
            treatment: treatment.to_string(),
            outcome: outcome.to_string(),
            strategy: Strategy::Iv { instrument_set },
        }
    }

    pub fn kind(&self) -> EstimandKind {
        match self.strategy {
            Strategy::Backdoor { .. } => EstimandKind::Backdoor,
            Strategy::Frontdoor { .. } => EstimandKind::Frontdoor,
            Strategy::Iv { .. } => EstimandKind::Iv,
        }
    }

    /// The adjustment, mediator or instrument set.
    pub fn variables(&self) -> &NodeSet {
        match &self.strategy {
            Strategy::Backdoor { adjustment_set } => adjustment_set,
            Strategy::Frontdoor { mediator_set } => mediator_set,
            Strategy::Iv { instrument_set } => instrument_set,
        }
    }

    /// Every column the estimand reads.
    pub fn columns(&self) -> BTreeSet<String> {
        let mut cols = self.variables().clone();
        cols.insert(self.treatment.clone());
        cols.insert(self.outcome.clone());
        cols
    }
}

impl fmt::Display for Estimand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set = self
            .variables()
            .iter()
            .cloned()
            .collect::<Vec<_>>()
            .join(", ");
        let label = match self.kind() {
            EstimandKind::Backdoor => "adjust for",
            EstimandKind::Frontdoor => "through",
            EstimandKind::Iv => "instruments",
        };
        write!(
            f,
            "{} effect of {} on {}, {} {{{}}}",
            self.kind(),
            self.treatment,
            self.outcome,
            label,
            set
        )
    }
}

#[derive(Serialize, Deserialize)]
struct EstimandRepr {
    kind: EstimandKind,
    treatment: String,
    outcome: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    adjustment_set: Option<NodeSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mediator_set: Option<NodeSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    instrument_set: Option<NodeSet>,
}

impl From<Estimand> for EstimandRepr {
    fn from(e: Estimand) -> Self {
        let kind = e.kind();
        let mut repr = EstimandRepr {
            kind,
            treatment: e.treatment,
            outcome: e.outcome,
            adjustment_set: None,
            mediator_set: None,
            instrument_set: None,
        };
        match e.strategy {
            Strategy::Backdoor { adjustment_set } => repr.adjustment_set = Some(adjustment_set),
            Strategy::Frontdoor { mediator_set } => repr.mediator_set = Some(mediator_set),
            Strategy::Iv { instrument_set } => repr.instrument_set = Some(instrument_set),
        }
        repr
    }
}

impl TryFrom<EstimandRepr> for Estimand {
    type Error = String;

    fn try_from(r: EstimandRepr) -> Result<Self, Self::Error> {
        let strategy = match (r.kind, r.adjustment_set, r.mediator_set, r.instrument_set) {
            (EstimandKind::Backdoor, a, None, None) => Strategy::Backdoor {
                adjustment_set: a.unwrap_or_default(),
            },
            (EstimandKind::Frontdoor, None, Some(m), None) => {
                Strategy::Frontdoor { mediator_set: m }
            }
            (EstimandKind::Iv, None, None, Some(i)) => Strategy::Iv { instrument_set: i },
            (kind, ..) => {
                return Err(format!(
                    "{kind} estimand must populate exactly its own variable set"
                ))
            }
        };
        Ok(Estimand {
            treatment: r.treatment,
            outcome: r.outcome,
            strategy,
        })
    }
}

/// Whether [`find_backdoor_sets`] stops at inclusion-minimal sets.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum AdjustmentSearch {
    #[default]
    Minimal,
    All,
}

/// Graphical role of a covariate relative to a treatment/outcome pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariableRole {
    Confounder,
    Instrument,
    Mediator,
    Collider,
    Other,
}

impl fmt::Display for VariableRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            VariableRole::Confounder => "confounder",
            VariableRole::Instrument => "instrument",
            VariableRole::Mediator => "mediator",
            VariableRole::Collider => "collider",
            VariableRole::Other => "other",
        };
        f.write_str(s)
    }
}

fn check_pair(g: &CausalGraph, t: &str, y: &str) -> Result<(), IdentifyError> {
    for v in [t, y] {
        if !g.is_observed(v)? {
            return Err(IdentifyError::Unobserved(v.to_string()));
        }
    }
    if t == y {
        return Err(IdentifyError::TreatmentIsOutcome(t.to_string()));
    }
    if g.ancestors(&single(t))?.contains(y) {
        return Err(IdentifyError::OutcomeCausesTreatment {
            treatment: t.to_string(),
            outcome: y.to_string(),
        });
    }
    Ok(())
}

fn single(name: &str) -> NodeSet {
    std::iter::once(name.to_string()).collect()
}

/// Checks the backdoor criterion for one candidate set: no member descends
/// from `t`, and `t` is d-separated from `y` given the set once `t`'s
/// outgoing edges are removed.
pub fn satisfies_backdoor(
    g: &CausalGraph,
    t: &str,
    y: &str,
    adjustment: &NodeSet,
) -> Result<bool, IdentifyError> {
    let de = g.descendants(&single(t))?;
    if adjustment.iter().any(|v| de.contains(v)) || adjustment.contains(y) {
        return Ok(false);
    }
    let pruned = g.without_outgoing(&single(t))?;
    Ok(pruned.d_separated(&single(t), &single(y), adjustment)?)
}

/// Advances `combo` to the next k-combination of `0..n` in lexicographic
/// order. Returns false after the last one.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    for i in (0..k).rev() {
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Calls `visit` on subsets of `pool` by increasing size, lexicographically
/// within a size. Subsets for which `visit` returns true are collected; with
/// `prune_supersets`, supersets of a collected subset are skipped.
fn search_subsets(
    pool: &[String],
    prune_supersets: bool,
    mut visit: impl FnMut(&NodeSet) -> Result<bool, IdentifyError>,
) -> Result<Vec<NodeSet>, IdentifyError> {
    if pool.len() > MAX_SEARCH_CANDIDATES {
        return Err(IdentifyError::SearchTooLarge(pool.len()));
    }
    let mut found: Vec<NodeSet> = Vec::new();
    for size in 0..=pool.len() {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let set: NodeSet = combo.iter().map(|&i| pool[i].clone()).collect();
            let dominated = prune_supersets && found.iter().any(|f| f.is_subset(&set));
            if !dominated && visit(&set)? {
                found.push(set);
            }
            if !next_combination(&mut combo, pool.len()) {
                break;
            }
        }
    }
    Ok(found)
}

/// Observed adjustment sets satisfying the backdoor criterion.
///
/// With [`AdjustmentSearch::Minimal`] only inclusion-minimal sets are
/// returned; candidates are limited to observed non-descendants of `t` that
/// are ancestors of `t` or `y` in the graph with `t`'s outgoing edges removed,
/// since minimal separators never leave that ancestral set.
pub fn find_backdoor_sets(
    g: &CausalGraph,
    t: &str,
    y: &str,
    search: AdjustmentSearch,
) -> Result<Vec<NodeSet>, IdentifyError> {
    check_pair(g, t, y)?;
    let de_t = g.descendants(&single(t))?;
    let pruned = g.without_outgoing(&single(t))?;
    let relevant = match search {
        AdjustmentSearch::Minimal => {
            let mut ty = single(t);
            ty.insert(y.to_string());
            pruned.ancestors(&ty)?
        }
        AdjustmentSearch::All => g.node_names().map(str::to_string).collect(),
    };
    let observed = g.observed_nodes();
    let pool: Vec<String> = observed
        .iter()
        .filter(|v| v.as_str() != t && v.as_str() != y)
        .filter(|v| !de_t.contains(*v) && relevant.contains(*v))
        .cloned()
        .collect();
    let ts = single(t);
    let ys = single(y);
    let mut sets = search_subsets(&pool, search == AdjustmentSearch::Minimal, |z| {
        Ok(pruned.d_separated(&ts, &ys, z)?)
    })?;
    sets.sort();
    Ok(sets)
}

/// Observed unconditional instruments for `t`: non-descendants of `t` that are
/// d-connected to `t`, and d-separated from `y` once `t`'s outgoing edges are
/// removed.
pub fn find_instruments(g: &CausalGraph, t: &str, y: &str) -> Result<NodeSet, IdentifyError> {
    check_pair(g, t, y)?;
    let ts = single(t);
    let ys = single(y);
    let de_t = g.descendants(&ts)?;
    let pruned = g.without_outgoing(&ts)?;
    let empty = NodeSet::new();
    let mut out = NodeSet::new();
    for z in g.observed_nodes() {
        if z == t || z == y || de_t.contains(&z) {
            continue;
        }
        let zs = single(&z);
        if !g.d_separated(&zs, &ts, &empty)? && pruned.d_separated(&zs, &ys, &empty)? {
            out.insert(z);
        }
    }
    Ok(out)
}

/// Checks the three frontdoor conditions for a mediator set.
pub fn satisfies_frontdoor(
    g: &CausalGraph,
    t: &str,
    y: &str,
    mediators: &NodeSet,
) -> Result<bool, IdentifyError> {
    if mediators.is_empty() || mediators.contains(t) || mediators.contains(y) {
        return Ok(false);
    }
    // (i) every directed path t -> y passes through the set
    let avoid: Vec<usize> = mediators
        .iter()
        .map(|m| g.idx(m))
        .collect::<Result<_, _>>()?;
    if g.directed_path_avoiding(g.idx(t)?, g.idx(y)?, &avoid) {
        return Ok(false);
    }
    let ts = single(t);
    // (ii) no open backdoor path from t into the set
    let no_t_out = g.without_outgoing(&ts)?;
    if !no_t_out.d_separated(&ts, mediators, &NodeSet::new())? {
        return Ok(false);
    }
    // (iii) backdoor paths from the set to y are blocked by t
    let no_m_out = g.without_outgoing(mediators)?;
    Ok(no_m_out.d_separated(mediators, &single(y), &ts)?)
}

/// Smallest observed mediator set meeting the frontdoor criterion, if any.
/// Ties are broken lexicographically.
pub fn find_frontdoor_set(
    g: &CausalGraph,
    t: &str,
    y: &str,
) -> Result<Option<NodeSet>, IdentifyError> {
    check_pair(g, t, y)?;
    let de_t = g.descendants(&single(t))?;
    let an_y = g.ancestors(&single(y))?;
    let pool: Vec<String> = g
        .observed_nodes()
        .into_iter()
        .filter(|v| v != t && v != y && de_t.contains(v) && an_y.contains(v))
        .collect();
    let mut first = None;
    search_subsets(&pool, true, |m| {
        if first.is_none() && satisfies_frontdoor(g, t, y, m)? {
            first = Some(m.clone());
            return Ok(true);
        }
        Ok(false)
    })?;
    Ok(first)
}

/// Every estimand the implemented criteria can produce, in the order
/// backdoor (one per minimal adjustment set), frontdoor, iv.
pub fn identify_effect(g: &CausalGraph, t: &str, y: &str) -> Result<Vec<Estimand>, IdentifyError> {
    identify_effect_with(g, t, y, AdjustmentSearch::Minimal)
}

pub fn identify_effect_with(
    g: &CausalGraph,
    t: &str,
    y: &str,
    search: AdjustmentSearch,
) -> Result<Vec<Estimand>, IdentifyError> {
    let mut out: Vec<Estimand> = find_backdoor_sets(g, t, y, search)?
        .into_iter()
        .map(|s| Estimand::backdoor(t, y, s))
        .collect();
    if let Some(m) = find_frontdoor_set(g, t, y)? {
        out.push(Estimand::frontdoor(t, y, m));
    }
    let z = find_instruments(g, t, y)?;
    if !z.is_empty() {
        out.push(Estimand::iv(t, y, z));
    }
    Ok(out)
}

/// Role of `v` relative to the pair `(t, y)`. When several apply the
/// precedence is confounder, instrument, mediator, collider.
pub fn classify_variable(
    g: &CausalGraph,
    v: &str,
    t: &str,
    y: &str,
) -> Result<VariableRole, IdentifyError> {
    g.idx(v)?;
    if v == t || v == y {
        return Err(IdentifyError::NotACovariate(v.to_string()));
    }
    check_pair(g, t, y)?;
    let vs = single(v);
    let an_t = g.ancestors(&single(t))?;
    let without_t = {
        let nodes: Vec<(String, bool)> = g
            .nodes()
            .filter(|n| n.name != t)
            .map(|n| (n.name, n.observed))
            .collect();
        let edges: Vec<(String, String)> = g
            .edges()
            .into_iter()
            .filter(|(a, b)| a != t && b != t)
            .collect();
        CausalGraph::new(nodes, edges)?
    };
    if an_t.contains(v) && without_t.descendants(&vs)?.contains(y) {
        return Ok(VariableRole::Confounder);
    }
    if g.is_observed(v)? && find_instruments(g, t, y)?.contains(v) {
        return Ok(VariableRole::Instrument);
    }
    let de_t = g.descendants(&single(t))?;
    if de_t.contains(v) && g.ancestors(&single(y))?.contains(v) {
        return Ok(VariableRole::Mediator);
    }
    if de_t.contains(v) && g.descendants(&single(y))?.contains(v) {
        return Ok(VariableRole::Collider);
    }
    Ok(VariableRole::Other)
}

/// Roles of every node other than `t` and `y`, keyed by name.
pub fn classify_all(
    g: &CausalGraph,
    t: &str,
    y: &str,
) -> Result<std::collections::BTreeMap<String, VariableRole>, IdentifyError> {
    g.node_names()
        .filter(|v| *v != t && *v != y)
        .map(|v| Ok((v.to_string(), classify_variable(g, v, t, y)?)))
        .collect()
}
