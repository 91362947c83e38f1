//! Weighted undirected graphs with dense, first-appearance node indexing.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// One undirected edge, stored once with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: u32,
    pub v: u32,
    pub w: f64,
}

/// A weighted undirected graph.
///
/// Invariants enforced by every constructor:
/// - node indices are dense `0..n`, assigned in first-appearance order;
/// - each edge is stored once with `u < v` and weight `w > 0`;
/// - no self-loops; duplicate edges (either orientation) merge by summing
///   their weights.
///
/// Isolated nodes are allowed: they have degree zero and contribute nothing
/// to modularity.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    labels: Vec<String>,
}

/// Validation failures while assembling a [`Graph`].
#[derive(Debug, Clone, PartialEq)]
pub enum GraphError {
    /// An edge connected a node to itself.
    SelfLoop { node: String },
    /// An edge weight was zero or negative.
    NonPositiveWeight { u: String, v: String, w: f64 },
    /// An endpoint index was `>= n`.
    NodeOutOfRange { index: u32, n: usize },
    /// Two nodes carried the same label string.
    DuplicateLabel { label: String },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::SelfLoop { node } => write!(f, "self-loop on node `{node}` is not allowed"),
            GraphError::NonPositiveWeight { u, v, w } => {
                write!(f, "edge ({u}, {v}) has non-positive weight {w}")
            }
            GraphError::NodeOutOfRange { index, n } => {
                write!(f, "node index {index} out of range for graph with {n} nodes")
            }
            GraphError::DuplicateLabel { label } => {
                write!(f, "duplicate node label `{label}`")
            }
        }
    }
}

impl core::error::Error for GraphError {}

impl Graph {
    /// Builds a graph from `(name, name, weight)` triples. Node indices are
    /// assigned by first appearance; duplicate pairs merge by summing.
    pub fn from_named_edges<S, I>(triples: I) -> Result<Graph, GraphError>
    where
        S: AsRef<str>,
        I: IntoIterator<Item = (S, S, f64)>,
    {
        let mut index: BTreeMap<String, u32> = BTreeMap::new();
        let mut labels: Vec<String> = Vec::new();
        let mut raw: Vec<(u32, u32, f64)> = Vec::new();
        for (a, b, w) in triples {
            let a = a.as_ref();
            let b = b.as_ref();
            if a == b {
                return Err(GraphError::SelfLoop { node: a.to_string() });
            }
            if w <= 0.0 {
                return Err(GraphError::NonPositiveWeight {
                    u: a.to_string(),
                    v: b.to_string(),
                    w,
                });
            }
            let mut id_of = |name: &str| -> u32 {
                if let Some(&i) = index.get(name) {
                    i
                } else {
                    let i = labels.len() as u32;
                    index.insert(name.to_string(), i);
                    labels.push(name.to_string());
                    i
                }
            };
            let ia = id_of(a);
            let ib = id_of(b);
            raw.push((ia, ib, w));
        }
        Self::from_parts(labels, &raw)
    }

    /// Builds a graph over nodes `0..n` (labels are the index strings).
    pub fn from_indexed_edges(n: usize, edges: &[(u32, u32, f64)]) -> Result<Graph, GraphError> {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::from_parts(labels, edges)
    }

    /// Builds a graph from an explicit label list plus indexed edges. Nodes
    /// not mentioned by any edge stay in the graph as isolated nodes.
    pub fn from_parts(labels: Vec<String>, edges: &[(u32, u32, f64)]) -> Result<Graph, GraphError> {
        let n = labels.len();
        let mut seen: BTreeMap<&str, ()> = BTreeMap::new();
        for label in &labels {
            if seen.insert(label.as_str(), ()).is_some() {
                return Err(GraphError::DuplicateLabel { label: label.clone() });
            }
        }
        let mut merged: BTreeMap<(u32, u32), f64> = BTreeMap::new();
        for &(a, b, w) in edges {
            if a as usize >= n {
                return Err(GraphError::NodeOutOfRange { index: a, n });
            }
            if b as usize >= n {
                return Err(GraphError::NodeOutOfRange { index: b, n });
            }
            if a == b {
                return Err(GraphError::SelfLoop { node: labels[a as usize].clone() });
            }
            if w <= 0.0 {
                return Err(GraphError::NonPositiveWeight {
                    u: labels[a as usize].clone(),
                    v: labels[b as usize].clone(),
                    w,
                });
            }
            let key = if a < b { (a, b) } else { (b, a) };
            *merged.entry(key).or_insert(0.0) += w;
        }
        let edges = merged
            .into_iter()
            .map(|((u, v), w)| Edge { u, v, w })
            .collect();
        Ok(Graph { n, edges, labels })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges sorted by `(u, v)`, each pair stored once with `u < v`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// Weighted degree vector `g` with `g_i = sum_j A_ij`.
    pub fn degree_vector(&self) -> Vec<f64> {
        let mut g = alloc::vec![0.0; self.n];
        for e in &self.edges {
            g[e.u as usize] += e.w;
            g[e.v as usize] += e.w;
        }
        g
    }

    /// Total degree `2m = sum_i g_i`, twice the total edge weight.
    pub fn two_m(&self) -> f64 {
        self.degree_vector().iter().sum()
    }

    /// A copy of the graph with every edge weight replaced by 1.
    pub fn unweighted(&self) -> Graph {
        Graph {
            n: self.n,
            edges: self.edges.iter().map(|e| Edge { w: 1.0, ..*e }).collect(),
            labels: self.labels.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_from_names() {
        let g = Graph::from_named_edges([("a", "b", 1.0), ("b", "c", 1.0), ("c", "a", 1.0)])
            .unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.labels(), &["a", "b", "c"]);
        let e: Vec<(u32, u32, f64)> = g.edges().iter().map(|e| (e.u, e.v, e.w)).collect();
        assert_eq!(e, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]);
    }

    #[test]
    fn duplicate_orientations_merge() {
        let g = Graph::from_named_edges([("a", "b", 2.5), ("b", "a", 1.5)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edges()[0].w, 4.0);
    }

    #[test]
    fn degree_vector_triangle() {
        let g = Graph::from_indexed_edges(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        assert_eq!(g.degree_vector(), [2.0, 2.0, 2.0]);
        assert_eq!(g.two_m(), 6.0);
    }

    #[test]
    fn degree_vector_single_weighted_edge() {
        let g = Graph::from_indexed_edges(2, &[(0, 1, 4.0)]).unwrap();
        assert_eq!(g.degree_vector(), [4.0, 4.0]);
        assert_eq!(g.two_m(), 8.0);
    }

    #[test]
    fn self_loop_rejected() {
        let err = Graph::from_named_edges([("a", "a", 1.0)]).unwrap_err();
        assert_eq!(err, GraphError::SelfLoop { node: "a".into() });
    }

    #[test]
    fn negative_weight_rejected() {
        let err = Graph::from_named_edges([("a", "b", -1.0)]).unwrap_err();
        assert!(matches!(err, GraphError::NonPositiveWeight { .. }));
    }

    #[test]
    fn isolated_nodes_retained() {
        let g = Graph::from_parts(
            alloc::vec!["a".into(), "b".into(), "c".into()],
            &[(0, 1, 1.0)],
        )
        .unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.degree_vector()[2], 0.0);
    }

    #[test]
    fn empty_graph_zero_degrees() {
        let g = Graph::from_parts(Vec::new(), &[]).unwrap();
        assert_eq!(g.node_count(), 0);
        assert!(g.degree_vector().is_empty());
        assert_eq!(g.two_m(), 0.0);
    }

    #[test]
    fn degree_sum_matches_twice_edge_weight() {
        let g = Graph::from_indexed_edges(4, &[(0, 1, 0.5), (1, 2, 2.0), (2, 3, 3.25)]).unwrap();
        let total: f64 = g.edges().iter().map(|e| e.w).sum();
        assert!((g.two_m() - 2.0 * total).abs() <= 1e-12 * g.two_m());
    }
}
