//! Causal DAGs over named variables.
//!
//! A [`CausalGraph`] is immutable once built. Every query takes and returns
//! node names; sets are [`NodeSet`]s, so results come out in lexicographic
//! order.

mod dot;

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

pub use dot::parse_graph;

/// Order-insensitive set of node names, iterated lexicographically.
pub type NodeSet = BTreeSet<String>;

/// Simple-path enumeration refuses graphs above this many nodes.
pub const MAX_ENUMERATION_NODES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("graph contains a directed cycle: {}", .0.join(" -> "))]
    Cycle(Vec<String>),
    #[error("node `{0}` is declared more than once")]
    DuplicateNode(String),
    #[error("invalid node name `{0}` (expected [A-Za-z_][A-Za-z0-9_]*)")]
    InvalidName(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("self-loop on node `{0}`")]
    SelfLoop(String),
    #[error("edge {0} -> {1} is declared more than once")]
    MultiEdge(String, String),
    #[error("node sets overlap on `{0}`")]
    OverlappingSets(String),
    #[error("path enumeration supports at most {MAX_ENUMERATION_NODES} nodes, graph has {0}")]
    TooLargeForEnumeration(usize),
}

pub(crate) fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A variable in the graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub name: String,
    pub observed: bool,
}

/// A directed acyclic graph whose nodes are causal variables.
#[derive(Debug, Clone)]
pub struct CausalGraph {
    names: Vec<String>,
    observed: Vec<bool>,
    index: HashMap<String, usize>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
}

impl PartialEq for CausalGraph {
    fn eq(&self, other: &Self) -> bool {
        self.nodes().collect::<Vec<_>>() == other.nodes().collect::<Vec<_>>()
            && self.edges() == other.edges()
    }
}

impl CausalGraph {
    /// Builds and validates a graph. Node order is kept as given.
    pub fn new<S: Into<String>>(
        nodes: impl IntoIterator<Item = (S, bool)>,
        edges: impl IntoIterator<Item = (S, S)>,
    ) -> Result<Self, GraphError> {
        let mut names = Vec::new();
        let mut observed = Vec::new();
        let mut index = HashMap::new();
        for (name, obs) in nodes {
            let name = name.into();
            if !is_valid_name(&name) {
                return Err(GraphError::InvalidName(name));
            }
            if index.contains_key(&name) {
                return Err(GraphError::DuplicateNode(name));
            }
            index.insert(name.clone(), names.len());
            names.push(name);
            observed.push(obs);
        }
        let n = names.len();
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        let mut seen = HashSet::new();
        for (from, to) in edges {
            let (from, to) = (from.into(), to.into());
            let a = *index
                .get(&from)
                .ok_or_else(|| GraphError::UnknownNode(from.clone()))?;
            let b = *index
                .get(&to)
                .ok_or_else(|| GraphError::UnknownNode(to.clone()))?;
            if a == b {
                return Err(GraphError::SelfLoop(from));
            }
            if !seen.insert((a, b)) {
                return Err(GraphError::MultiEdge(from, to));
            }
            children[a].push(b);
            parents[b].push(a);
        }
        let graph = CausalGraph {
            names,
            observed,
            index,
            parents,
            children,
        };
        if let Some(cycle) = graph.find_cycle() {
            return Err(GraphError::Cycle(cycle));
        }
        Ok(graph)
    }

    fn find_cycle(&self) -> Option<Vec<String>> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let n = self.names.len();
        let mut state = vec![0u8; n];
        let mut stack: Vec<(usize, usize)> = Vec::new();
        for root in 0..n {
            if state[root] != 0 {
                continue;
            }
            state[root] = 1;
            stack.push((root, 0));
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if *next < self.children[v].len() {
                    let c = self.children[v][*next];
                    *next += 1;
                    match state[c] {
                        0 => {
                            state[c] = 1;
                            stack.push((c, 0));
                        }
                        1 => {
                            let start = stack.iter().position(|&(u, _)| u == c).unwrap();
                            let mut cycle: Vec<String> = stack[start..]
                                .iter()
                                .map(|&(u, _)| self.names[u].clone())
                                .collect();
                            cycle.push(self.names[c].clone());
                            return Some(cycle);
                        }
                        _ => {}
                    }
                } else {
                    state[v] = 2;
                    stack.pop();
                }
            }
        }
        None
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.children.iter().map(Vec::len).sum()
    }

    /// Nodes in declaration order.
    pub fn nodes(&self) -> impl Iterator<Item = Node> + '_ {
        self.names.iter().zip(&self.observed).map(|(n, &o)| Node {
            name: n.clone(),
            observed: o,
        })
    }

    pub fn node_names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }

    pub fn observed_nodes(&self) -> NodeSet {
        self.names
            .iter()
            .zip(&self.observed)
            .filter(|(_, &o)| o)
            .map(|(n, _)| n.clone())
            .collect()
    }

    /// Edges as `(cause, effect)` pairs, sorted.
    pub fn edges(&self) -> Vec<(String, String)> {
        let mut out: Vec<_> = self
            .children
            .iter()
            .enumerate()
            .flat_map(|(a, cs)| {
                cs.iter()
                    .map(move |&b| (self.names[a].clone(), self.names[b].clone()))
            })
            .collect();
        out.sort();
        out
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn has_edge(&self, from: &str, to: &str) -> bool {
        match (self.index.get(from), self.index.get(to)) {
            (Some(&a), Some(&b)) => self.children[a].contains(&b),
            _ => false,
        }
    }

    pub fn is_observed(&self, name: &str) -> Result<bool, GraphError> {
        Ok(self.observed[self.idx(name)?])
    }

    pub fn parents(&self, name: &str) -> Result<NodeSet, GraphError> {
        let v = self.idx(name)?;
        Ok(self.name_set(self.parents[v].iter().copied()))
    }

    pub fn children(&self, name: &str) -> Result<NodeSet, GraphError> {
        let v = self.idx(name)?;
        Ok(self.name_set(self.children[v].iter().copied()))
    }

    pub(crate) fn idx(&self, name: &str) -> Result<usize, GraphError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownNode(name.to_string()))
    }

    fn idx_all<'a>(
        &self,
        names: impl IntoIterator<Item = &'a String>,
    ) -> Result<Vec<usize>, GraphError> {
        names.into_iter().map(|n| self.idx(n)).collect()
    }

    fn name_set(&self, idx: impl IntoIterator<Item = usize>) -> NodeSet {
        idx.into_iter().map(|i| self.names[i].clone()).collect()
    }

    /// Returns a copy with one extra edge. Fails if the edge would close a cycle.
    pub fn with_edge(&self, from: &str, to: &str) -> Result<Self, GraphError> {
        let mut edges = self.edges();
        edges.push((from.to_string(), to.to_string()));
        CausalGraph::new(self.nodes().map(|n| (n.name, n.observed)), edges)
    }

    /// Returns a copy with an extra node and edges from it to `targets`.
    pub fn with_common_cause(
        &self,
        name: &str,
        observed: bool,
        targets: &[&str],
    ) -> Result<Self, GraphError> {
        let mut nodes: Vec<(String, bool)> = self.nodes().map(|n| (n.name, n.observed)).collect();
        nodes.push((name.to_string(), observed));
        let mut edges = self.edges();
        edges.extend(targets.iter().map(|t| (name.to_string(), t.to_string())));
        CausalGraph::new(nodes, edges)
    }

    /// Returns a copy with every edge leaving a node of `sources` removed.
    pub fn without_outgoing(&self, sources: &NodeSet) -> Result<Self, GraphError> {
        let src = self.idx_all(sources)?;
        let mut g = self.clone();
        for &s in &src {
            for c in std::mem::take(&mut g.children[s]) {
                g.parents[c].retain(|&p| p != s);
            }
        }
        Ok(g)
    }

    /// Topological order; ties are broken lexicographically so the output is
    /// deterministic.
    pub fn topological_order(&self) -> Vec<String> {
        let n = self.names.len();
        let mut indegree: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut ready: BinaryHeap<Reverse<(&str, usize)>> = (0..n)
            .filter(|&v| indegree[v] == 0)
            .map(|v| Reverse((self.names[v].as_str(), v)))
            .collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse((_, v))) = ready.pop() {
            order.push(self.names[v].clone());
            for &c in &self.children[v] {
                indegree[c] -= 1;
                if indegree[c] == 0 {
                    ready.push(Reverse((self.names[c].as_str(), c)));
                }
            }
        }
        debug_assert_eq!(order.len(), n);
        order
    }

    pub(crate) fn closure_mask(&self, seeds: &[usize], forward: bool) -> Vec<bool> {
        let mut mask = vec![false; self.names.len()];
        let mut stack = seeds.to_vec();
        while let Some(v) = stack.pop() {
            if mask[v] {
                continue;
            }
            mask[v] = true;
            let next = if forward {
                &self.children[v]
            } else {
                &self.parents[v]
            };
            stack.extend(next.iter().copied().filter(|&u| !mask[u]));
        }
        mask
    }

    /// Whether a directed path leads from `from` to `to` without entering
    /// any node of `avoid`.
    pub(crate) fn directed_path_avoiding(&self, from: usize, to: usize, avoid: &[usize]) -> bool {
        let mut seen = vec![false; self.names.len()];
        for &a in avoid {
            seen[a] = true;
        }
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(v) = stack.pop() {
            if v == to {
                return true;
            }
            for &c in &self.children[v] {
                if !seen[c] {
                    seen[c] = true;
                    stack.push(c);
                }
            }
        }
        false
    }

    fn mask_to_set(&self, mask: &[bool]) -> NodeSet {
        self.name_set(mask.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i))
    }

    /// Ancestors of `set`, including `set` itself.
    pub fn ancestors(&self, set: &NodeSet) -> Result<NodeSet, GraphError> {
        let seeds = self.idx_all(set)?;
        Ok(self.mask_to_set(&self.closure_mask(&seeds, false)))
    }

    /// Descendants of `set`, including `set` itself.
    pub fn descendants(&self, set: &NodeSet) -> Result<NodeSet, GraphError> {
        let seeds = self.idx_all(set)?;
        Ok(self.mask_to_set(&self.closure_mask(&seeds, true)))
    }

    /// Tests whether `x` and `y` are d-separated given `z`.
    ///
    /// Uses the reachable-set ("Bayes ball") traversal, linear in the number
    /// of edges. Empty `x` or `y` is trivially separated.
    pub fn d_separated(&self, x: &NodeSet, y: &NodeSet, z: &NodeSet) -> Result<bool, GraphError> {
        for (a, b) in [(x, y), (x, z), (y, z)] {
            if let Some(common) = a.intersection(b).next() {
                return Err(GraphError::OverlappingSets(common.clone()));
            }
        }
        let xs = self.idx_all(x)?;
        let ys = self.idx_all(y)?;
        let zs = self.idx_all(z)?;
        Ok(self.d_separated_idx(&xs, &ys, &zs))
    }

    pub(crate) fn d_separated_idx(&self, xs: &[usize], ys: &[usize], zs: &[usize]) -> bool {
        if xs.is_empty() || ys.is_empty() {
            return true;
        }
        let reach = self.reachable_from(xs, zs);
        !ys.iter().any(|&y| reach[y])
    }

    /// Nodes d-connected to `xs` given `zs`.
    fn reachable_from(&self, xs: &[usize], zs: &[usize]) -> Vec<bool> {
        let n = self.names.len();
        let mut in_z = vec![false; n];
        for &z in zs {
            in_z[z] = true;
        }
        // Colliders are open when they or a descendant are conditioned on.
        let z_ancestor = self.closure_mask(zs, false);

        // visited[v][0]: arrived from a child (moving up)
        // visited[v][1]: arrived from a parent (moving down)
        let mut visited = vec![[false; 2]; n];
        let mut reachable = vec![false; n];
        let mut queue: VecDeque<(usize, usize)> = xs.iter().map(|&x| (x, 0)).collect();
        while let Some((v, dir)) = queue.pop_front() {
            if visited[v][dir] {
                continue;
            }
            visited[v][dir] = true;
            if !in_z[v] {
                reachable[v] = true;
            }
            if dir == 0 {
                if !in_z[v] {
                    queue.extend(self.parents[v].iter().map(|&p| (p, 0)));
                    queue.extend(self.children[v].iter().map(|&c| (c, 1)));
                }
            } else {
                if !in_z[v] {
                    queue.extend(self.children[v].iter().map(|&c| (c, 1)));
                }
                if z_ancestor[v] {
                    queue.extend(self.parents[v].iter().map(|&p| (p, 0)));
                }
            }
        }
        reachable
    }

    /// All simple paths from `t` to `y` whose first edge points into `t`.
    pub fn backdoor_paths(&self, t: &str, y: &str) -> Result<Vec<Path>, GraphError> {
        let (ti, yi) = (self.idx(t)?, self.idx(y)?);
        if ti == yi {
            return Err(GraphError::OverlappingSets(t.to_string()));
        }
        self.simple_paths(ti, yi, true)
    }

    /// All simple paths between `a` and `b` in the skeleton.
    pub fn simple_paths_between(&self, a: &str, b: &str) -> Result<Vec<Path>, GraphError> {
        let (ai, bi) = (self.idx(a)?, self.idx(b)?);
        if ai == bi {
            return Err(GraphError::OverlappingSets(a.to_string()));
        }
        self.simple_paths(ai, bi, false)
    }

    fn simple_paths(
        &self,
        from: usize,
        to: usize,
        into_start: bool,
    ) -> Result<Vec<Path>, GraphError> {
        if self.names.len() > MAX_ENUMERATION_NODES {
            return Err(GraphError::TooLargeForEnumeration(self.names.len()));
        }
        let mut out = Vec::new();
        let mut on_path = vec![false; self.names.len()];
        let mut nodes = vec![from];
        let mut forward = Vec::new();
        on_path[from] = true;
        self.extend_paths(
            to,
            into_start,
            &mut on_path,
            &mut nodes,
            &mut forward,
            &mut out,
        );
        out.sort_by(|a, b| a.nodes.cmp(&b.nodes));
        Ok(out)
    }

    fn extend_paths(
        &self,
        to: usize,
        into_start: bool,
        on_path: &mut [bool],
        nodes: &mut Vec<usize>,
        forward: &mut Vec<bool>,
        out: &mut Vec<Path>,
    ) {
        let v = *nodes.last().unwrap();
        if v == to {
            out.push(Path {
                nodes: nodes.iter().map(|&i| self.names[i].clone()).collect(),
                forward: forward.clone(),
            });
            return;
        }
        let first_step = nodes.len() == 1;
        let steps = self.parents[v]
            .iter()
            .map(|&p| (p, false))
            .chain(self.children[v].iter().map(|&c| (c, true)));
        for (u, fwd) in steps {
            if on_path[u] || (first_step && into_start && fwd) {
                continue;
            }
            on_path[u] = true;
            nodes.push(u);
            forward.push(fwd);
            self.extend_paths(to, into_start, on_path, nodes, forward, out);
            forward.pop();
            nodes.pop();
            on_path[u] = false;
        }
    }

    /// Renders the graph in the DOT subset accepted by [`parse_graph`].
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph {\n");
        for (name, &obs) in self.names.iter().zip(&self.observed) {
            if obs {
                s.push_str(&format!("    {name};\n"));
            } else {
                s.push_str(&format!("    {name} [observed=\"no\"];\n"));
            }
        }
        for (a, cs) in self.children.iter().enumerate() {
            for &b in cs {
                s.push_str(&format!("    {} -> {};\n", self.names[a], self.names[b]));
            }
        }
        s.push_str("}\n");
        s
    }
}

impl fmt::Display for CausalGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_dot())
    }
}

/// A simple path in the skeleton of a graph.
///
/// `forward[i]` is true when the edge between `nodes[i]` and `nodes[i + 1]`
/// points from `nodes[i]` to `nodes[i + 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub nodes: Vec<String>,
    pub forward: Vec<bool>,
}

impl Path {
    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    /// Interior nodes where both adjacent edges point in.
    pub fn colliders(&self) -> Vec<&str> {
        (1..self.nodes.len().saturating_sub(1))
            .filter(|&i| self.forward[i - 1] && !self.forward[i])
            .map(|i| self.nodes[i].as_str())
            .collect()
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.nodes[0])?;
        for (node, &fwd) in self.nodes[1..].iter().zip(&self.forward) {
            write!(f, " {} {}", if fwd { "->" } else { "<-" }, node)?;
        }
        Ok(())
    }
}

/// Builds a [`NodeSet`] from string literals.
pub fn node_set<'a>(names: impl IntoIterator<Item = &'a str>) -> NodeSet {
    names.into_iter().map(str::to_string).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn instrument_graph() -> CausalGraph {
        parse_graph("digraph { w -> t; w -> y; z -> t; t -> y; }").unwrap()
    }

    fn mediator_graph() -> CausalGraph {
        parse_graph("digraph { t -> m; m -> y; }").unwrap()
    }

    #[test]
    fn topological_order_of_chain() {
        assert_eq!(mediator_graph().topological_order(), ["t", "m", "y"]);
        let single = parse_graph("digraph { a; }").unwrap();
        assert_eq!(single.topological_order(), ["a"]);
    }

    #[test]
    fn topological_order_respects_edges() {
        let g = instrument_graph();
        let order = g.topological_order();
        let pos = |n: &str| order.iter().position(|o| o == n).unwrap();
        for (a, b) in g.edges() {
            assert!(pos(&a) < pos(&b));
        }
        assert_eq!(order.len(), 4);
    }

    #[test]
    fn closures() {
        assert_eq!(
            mediator_graph().descendants(&node_set(["t"])).unwrap(),
            node_set(["m", "t", "y"])
        );
        assert_eq!(
            instrument_graph().ancestors(&node_set(["y"])).unwrap(),
            node_set(["t", "w", "y", "z"])
        );
        assert!(instrument_graph()
            .descendants(&NodeSet::new())
            .unwrap()
            .is_empty());
        assert_eq!(
            instrument_graph().ancestors(&node_set(["q"])),
            Err(GraphError::UnknownNode("q".into()))
        );
    }

    #[test]
    fn d_separation_basics() {
        let chain = parse_graph("digraph { a -> b -> c; }").unwrap();
        let (a, b, c) = (node_set(["a"]), node_set(["b"]), node_set(["c"]));
        assert!(chain.d_separated(&a, &c, &b).unwrap());
        assert!(!chain.d_separated(&a, &c, &NodeSet::new()).unwrap());

        let collider = parse_graph("digraph { a -> b; c -> b; }").unwrap();
        assert!(!collider.d_separated(&a, &c, &b).unwrap());
        assert!(collider.d_separated(&a, &c, &NodeSet::new()).unwrap());

        let g = instrument_graph();
        assert!(g
            .d_separated(&node_set(["z"]), &node_set(["y"]), &node_set(["t", "w"]))
            .unwrap());
        assert!(!g
            .d_separated(&node_set(["z"]), &node_set(["y"]), &node_set(["w"]))
            .unwrap());
    }

    #[test]
    fn d_separation_collider_descendant_opens() {
        let g = parse_graph("digraph { a -> b; c -> b; b -> d; }").unwrap();
        assert!(!g
            .d_separated(&node_set(["a"]), &node_set(["c"]), &node_set(["d"]))
            .unwrap());
    }

    #[test]
    fn d_separation_rejects_overlap() {
        let g = instrument_graph();
        assert_eq!(
            g.d_separated(&node_set(["t"]), &node_set(["y"]), &node_set(["t"])),
            Err(GraphError::OverlappingSets("t".into()))
        );
    }

    #[test]
    fn backdoor_paths_examples() {
        let paths = instrument_graph().backdoor_paths("t", "y").unwrap();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].nodes, ["t", "w", "y"]);
        assert_eq!(paths[0].forward, [false, true]);
        assert_eq!(paths[0].to_string(), "t <- w -> y");

        assert!(mediator_graph()
            .backdoor_paths("t", "y")
            .unwrap()
            .is_empty());

        let hidden = parse_graph(r#"digraph { u [observed="no"]; u -> t; u -> y; }"#).unwrap();
        let paths = hidden.backdoor_paths("t", "y").unwrap();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].nodes, ["t", "u", "y"]);
    }

    #[test]
    fn path_colliders() {
        let g = parse_graph("digraph { a -> b; c -> b; }").unwrap();
        let paths = g.simple_paths_between("a", "c").unwrap();
        assert_eq!(paths[0].colliders(), ["b"]);
    }

    #[test]
    fn enumeration_refuses_large_graphs() {
        let nodes: Vec<(String, bool)> = (0..65).map(|i| (format!("v{i}"), true)).collect();
        let edges: Vec<(String, String)> = (0..64)
            .map(|i| (format!("v{i}"), format!("v{}", i + 1)))
            .collect();
        let g = CausalGraph::new(nodes, edges).unwrap();
        assert_eq!(
            g.simple_paths_between("v0", "v64"),
            Err(GraphError::TooLargeForEnumeration(65))
        );
        // reachability has no cap
        assert!(!g
            .d_separated(&node_set(["v0"]), &node_set(["v64"]), &NodeSet::new())
            .unwrap());
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            CausalGraph::new([("a", true), ("a", true)], []),
            Err(GraphError::DuplicateNode(_))
        ));
        assert!(matches!(
            CausalGraph::new([("a", true)], [("a", "a")]),
            Err(GraphError::SelfLoop(_))
        ));
        assert!(matches!(
            CausalGraph::new([("a", true), ("b", true)], [("a", "b"), ("a", "b")]),
            Err(GraphError::MultiEdge(..))
        ));
        assert!(matches!(
            CausalGraph::new([("1a", true)], []),
            Err(GraphError::InvalidName(_))
        ));
        assert!(matches!(
            CausalGraph::new([("a", true)], [("a", "b")]),
            Err(GraphError::UnknownNode(_))
        ));
        assert!(matches!(
            instrument_graph().with_edge("y", "w"),
            Err(GraphError::Cycle(_))
        ));
    }

    #[test]
    fn pruning_outgoing_edges() {
        let g = instrument_graph()
            .without_outgoing(&node_set(["t"]))
            .unwrap();
        assert!(!g.has_edge("t", "y"));
        assert!(g.has_edge("w", "t"));
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn dot_round_trip() {
        let g = parse_graph(r#"digraph { u [observed="no"]; u -> t; u -> y; t -> y; }"#).unwrap();
        assert_eq!(parse_graph(&g.to_dot()).unwrap(), g);
    }
}
