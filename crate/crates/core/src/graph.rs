//! Simple undirected graphs with vertex provenance.
//!
//! Vertices are dense integers `0..n`. Edges are stored once, as sorted pairs
//! `(u, v)` with `u < v`, in lexicographic order; an [`EdgeId`] is an index
//! into that list. Planarizations mark crossing vertices as
//! [`VertexKind::Dummy`] so they describe themselves without a side table.

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexKind {
    Original,
    /// A crossing of two edges of the graph that was planarized.
    Dummy {
        edge_a: EdgeId,
        edge_b: EdgeId,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("missing or malformed header line (expected `n m`)")]
    MalformedHeader,
    #[error("line {line}: expected `u v`, found {text:?}")]
    MalformedLine { line: usize, text: String },
    #[error("header announces {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("{}edge ({u}, {v}) has an endpoint >= n = {n}", at(*.line))]
    EndpointOutOfRange {
        line: Option<usize>,
        u: usize,
        v: usize,
        n: usize,
    },
    #[error("{}duplicate edge ({u}, {v})", at(*.line))]
    DuplicateEdge {
        line: Option<usize>,
        u: usize,
        v: usize,
    },
    #[error("{}self-loop at vertex {v}", at(*.line))]
    SelfLoop { line: Option<usize>, v: usize },
    #[error("vertex kind list has length {found}, graph has {n} vertices")]
    KindCount { found: usize, n: usize },
}

fn at(line: Option<usize>) -> String {
    line.map(|l| format!("line {l}: ")).unwrap_or_default()
}

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    kinds: Vec<VertexKind>,
    adj: Vec<Vec<VertexId>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}

impl Graph {
    /// Builds a graph with all vertices original.
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, ParseError> {
        Self::build(n, edges.into_iter().map(|e| (e, None)))
    }

    pub fn with_kinds(mut self, kinds: Vec<VertexKind>) -> Result<Self, ParseError> {
        if kinds.len() != self.n {
            return Err(ParseError::KindCount {
                found: kinds.len(),
                n: self.n,
            });
        }
        self.kinds = kinds;
        Ok(self)
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
            kinds: vec![VertexKind::Original; n],
            adj: vec![Vec::new(); n],
        }
    }

    fn build(
        n: usize,
        edges: impl Iterator<Item = ((VertexId, VertexId), Option<usize>)>,
    ) -> Result<Self, ParseError> {
        let mut list = Vec::new();
        for ((u, v), line) in edges {
            if u >= n || v >= n {
                return Err(ParseError::EndpointOutOfRange { line, u, v, n });
            }
            if u == v {
                return Err(ParseError::SelfLoop { line, v });
            }
            list.push(((u.min(v), u.max(v)), line));
        }
        list.sort();
        for w in list.windows(2) {
            if w[0].0 == w[1].0 {
                let (u, v) = w[1].0;
                let line = w[0].1.max(w[1].1);
                return Err(ParseError::DuplicateEdge { line, u, v });
            }
        }
        let edges: Vec<_> = list.into_iter().map(|(e, _)| e).collect();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Self {
            n,
            edges,
            kinds: vec![VertexKind::Original; n],
            adj,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn kinds(&self) -> &[VertexKind] {
        &self.kinds
    }

    pub fn kind(&self, v: VertexId) -> VertexKind {
        self.kinds[v]
    }

    pub fn dummy_count(&self) -> usize {
        self.kinds
            .iter()
            .filter(|k| matches!(k, VertexKind::Dummy { .. }))
            .count()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edge_id(u, v).is_some()
    }

    pub fn edge_id(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    /// Neighborhood bitmasks; only meaningful for `n <= 64`.
    pub fn neighbor_masks(&self) -> Vec<u64> {
        debug_assert!(self.n <= 64);
        self.adj
            .iter()
            .map(|a| a.iter().fold(0u64, |m, &w| m | 1 << w))
            .collect()
    }

    /// Subgraph induced by `vertices` (in the given order), plus the map from
    /// new ids back to old ids.
    pub fn induced(&self, vertices: &[VertexId]) -> (Graph, Vec<VertexId>) {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]));
        let g = Graph::new(vertices.len(), edges).expect("induced subgraph of a simple graph");
        (g, vertices.to_vec())
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// `m / C(n, 2)`.
    pub fn density(&self) -> Result<BigRational> {
        if self.n < 2 {
            return Err(Error::invalid("density needs at least two vertices"));
        }
        let pairs = self.n * (self.n - 1) / 2;
        Ok(BigRational::new(
            BigInt::from(self.m()),
            BigInt::from(pairs),
        ))
    }

    /// A component maximizing edges per vertex. Ties go to the component with
    /// the smallest member. Its ratio is never below the whole graph's `m / n`.
    pub fn densest_component(&self) -> Result<Vec<VertexId>> {
        if self.m() == 0 {
            return Err(Error::invalid("densest component of an edgeless graph"));
        }
        let mut best: Option<(Vec<VertexId>, usize)> = None;
        for comp in self.components() {
            let edges = comp.iter().map(|&v| self.degree(v)).sum::<usize>() / 2;
            let better = match &best {
                None => true,
                // edges / |comp| > best_edges / |best|
                Some((b, be)) => edges * b.len() > be * comp.len(),
            };
            if better {
                best = Some((comp, edges));
            }
        }
        Ok(best.map(|(c, _)| c).unwrap_or_default())
    }

    /// Edge-list text: header `n m`, then one sorted edge per line.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.m());
        for &(u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("graph serializes")
    }
}

/// Parses the edge-list document: a header `n m` followed by `m` lines `u v`.
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (_, header) = lines.next().ok_or(ParseError::MalformedHeader)?;
    let (n, m) = pair(header).ok_or(ParseError::MalformedHeader)?;
    let mut edges = Vec::with_capacity(m);
    for (line, text) in lines {
        let e = pair(text).ok_or_else(|| ParseError::MalformedLine {
            line,
            text: text.to_string(),
        })?;
        edges.push((e, Some(line)));
    }
    if edges.len() != m {
        return Err(ParseError::EdgeCount {
            expected: m,
            found: edges.len(),
        });
    }
    Graph::build(n, edges.into_iter())
}

fn pair(text: &str) -> Option<(usize, usize)> {
    let mut it = text.split_whitespace();
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    it.next().is_none().then_some((a, b))
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    #[serde(default)]
    kinds: Option<Vec<VertexKind>>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson {
            n: self.n,
            edges: self.edges.clone(),
            kinds: Some(self.kinds.clone()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = GraphJson::deserialize(d)?;
        let g = Graph::new(raw.n, raw.edges).map_err(serde::de::Error::custom)?;
        match raw.kinds {
            Some(k) => g.with_kinds(k).map_err(serde::de::Error::custom),
            None => Ok(g),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::*;

    #[test]
    fn parse_examples() {
        let g = parse_graph("2 1\n0 1").unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));
        let g = parse_graph("3 0").unwrap();
        assert_eq!((g.n(), g.m()), (3, 0));
        assert!(matches!(
            parse_graph("2 1\n0 0"),
            Err(ParseError::SelfLoop {
                v: 0,
                line: Some(2)
            })
        ));
    }

    #[test]
    fn parse_errors_are_distinct() {
        assert_eq!(parse_graph(""), Err(ParseError::MalformedHeader));
        assert!(matches!(
            parse_graph("3 1\n0 x"),
            Err(ParseError::MalformedLine { line: 2, .. })
        ));
        assert!(matches!(
            parse_graph("3 1\n0 3"),
            Err(ParseError::EndpointOutOfRange {
                u: 0,
                v: 3,
                n: 3,
                ..
            })
        ));
        assert!(matches!(
            parse_graph("3 2\n0 1\n1 0"),
            Err(ParseError::DuplicateEdge {
                u: 0,
                v: 1,
                line: Some(3)
            })
        ));
        assert!(matches!(
            parse_graph("3 2\n0 1"),
            Err(ParseError::EdgeCount {
                expected: 2,
                found: 1
            })
        ));
    }

    #[test]
    fn edge_list_round_trip() {
        let g = complete_bipartite(3, 5).unwrap();
        assert_eq!(parse_graph(&g.to_edge_list()).unwrap(), g);
        let back: Graph = serde_json::from_value(g.to_json()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn density_examples() {
        assert_eq!(
            complete(4).unwrap().density().unwrap(),
            BigRational::from_integer(1.into())
        );
        assert_eq!(
            Graph::empty(5).density().unwrap(),
            BigRational::from_integer(0.into())
        );
        assert!(Graph::empty(1).density().is_err());
    }

    #[test]
    fn densest_component_examples() {
        // K3 plus a disjoint edge
        let g = Graph::new(5, [(0, 1), (1, 2), (0, 2), (3, 4)]).unwrap();
        assert_eq!(g.densest_component().unwrap(), vec![0, 1, 2]);
        let path = path(4).unwrap();
        assert_eq!(path.densest_component().unwrap(), vec![0, 1, 2, 3]);
        assert!(Graph::empty(3).densest_component().is_err());

        // two K4s, one missing an edge: 6/4 beats 5/4
        let cliques = disjoint_cliques(2, 4).unwrap();
        let edges = cliques.edges().iter().copied().filter(|&e| e != (0, 1));
        let g = Graph::new(8, edges).unwrap();
        assert_eq!(g.densest_component().unwrap(), vec![4, 5, 6, 7]);
    }

    #[test]
    fn components_and_degree() {
        assert_eq!(max_degree_of(&complete_bipartite(3, 5).unwrap()), 5);
        assert_eq!(disjoint_cliques(3, 2).unwrap().components().len(), 3);
    }

    fn max_degree_of(g: &Graph) -> usize {
        g.max_degree()
    }
}
