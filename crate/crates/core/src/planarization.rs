//! Planar graphs obtained by subdividing crossing edges.

use rustworkx_core::petgraph::graph::UnGraph;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId, VertexKind};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Planarization {
    pub planar: Graph,
    /// `(dummy, edge_a, edge_b)` for every dummy vertex, in id order.
    pub dummy_of: Vec<(VertexId, EdgeId, EdgeId)>,
    /// For each original edge `(u, v)`, the path `u, ..., v` replacing it.
    pub chains: Vec<Vec<VertexId>>,
}

impl Planarization {
    /// Builds the planar graph as the union of the chains. `kinds` covers
    /// every vertex, originals first.
    pub fn from_chains(
        original_n: usize,
        kinds: Vec<VertexKind>,
        chains: Vec<Vec<VertexId>>,
    ) -> Result<Self> {
        let edges: Vec<_> = chains
            .iter()
            .flat_map(|c| c.windows(2).map(|w| (w[0], w[1])))
            .collect();
        let planar = Graph::new(kinds.len(), edges)?.with_kinds(kinds)?;
        let dummy_of = (original_n..planar.n())
            .map(|v| match planar.kind(v) {
                VertexKind::Dummy { edge_a, edge_b } => Ok((v, edge_a, edge_b)),
                VertexKind::Original => Err(Error::internal(format!(
                    "vertex {v} past the originals is not a dummy"
                ))),
            })
            .collect::<Result<_>>()?;
        let p = Self {
            planar,
            dummy_of,
            chains,
        };
        p.check()?;
        Ok(p)
    }

    /// The unsubdivided graph, with `planar` as a planarization of itself.
    pub fn trivial(g: &Graph) -> Self {
        Self {
            planar: g.clone(),
            dummy_of: Vec::new(),
            chains: g.edges().iter().map(|&(u, v)| vec![u, v]).collect(),
        }
    }

    pub fn original_n(&self) -> usize {
        self.planar.n() - self.dummy_of.len()
    }

    pub fn crossings(&self) -> usize {
        self.dummy_of.len()
    }

    /// Structural consistency: each dummy has degree 4 and sits on exactly
    /// the two chains it names; chains of crossing edges share only it.
    pub fn check(&self) -> Result<()> {
        let n0 = self.original_n();
        let mut seen_on: Vec<Vec<EdgeId>> = vec![Vec::new(); self.planar.n()];
        for (e, c) in self.chains.iter().enumerate() {
            if c.len() < 2 || c[0] >= n0 || c[c.len() - 1] >= n0 {
                return Err(Error::internal(format!("chain {e} has bad endpoints")));
            }
            for &v in &c[1..c.len() - 1] {
                if v < n0 {
                    return Err(Error::internal(format!("chain {e} passes original {v}")));
                }
                seen_on[v].push(e);
            }
        }
        for &(v, a, b) in &self.dummy_of {
            if a == b || self.planar.degree(v) != 4 {
                return Err(Error::internal(format!("dummy {v} is malformed")));
            }
            let mut on = seen_on[v].clone();
            on.sort_unstable();
            if on != [a.min(b), a.max(b)] {
                return Err(Error::internal(format!(
                    "dummy {v} lies on chains {on:?}, expected {a} and {b}"
                )));
            }
        }
        let chain_edges: usize = self.chains.iter().map(|c| c.len() - 1).sum();
        if chain_edges != self.planar.m() {
            return Err(Error::internal("chains share an edge"));
        }
        Ok(())
    }

    /// Contracts every chain back to a single edge.
    pub fn contract(&self) -> Result<Graph> {
        let edges = self.chains.iter().map(|c| (c[0], c[c.len() - 1]));
        Ok(Graph::new(self.original_n(), edges)?)
    }

    pub fn is_planar(&self) -> bool {
        is_planar(&self.planar)
    }
}

/// Full planarity test (left-right criterion).
pub fn is_planar(g: &Graph) -> bool {
    if g.n() >= 3 && g.m() > 3 * g.n() - 6 {
        return false;
    }
    let mut pg = UnGraph::<(), ()>::with_capacity(g.n(), g.m());
    let nodes: Vec<_> = (0..g.n()).map(|_| pg.add_node(())).collect();
    for &(u, v) in g.edges() {
        pg.add_edge(nodes[u], nodes[v], ());
    }
    rustworkx_core::planar::is_planar(&pg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::*;

    #[test]
    fn planarity_of_small_graphs() {
        assert!(is_planar(&complete(4).unwrap()));
        assert!(!is_planar(&complete(5).unwrap()));
        assert!(!is_planar(&complete_bipartite(3, 3).unwrap()));
        assert!(is_planar(&complete_bipartite(2, 7).unwrap()));
        assert!(!is_planar(&petersen()));
        assert!(is_planar(&hypercube(3).unwrap()));
        assert!(is_planar(&Graph::empty(0)));
    }

    #[test]
    fn trivial_contracts_to_itself() {
        let g = cycle(5).unwrap();
        let p = Planarization::trivial(&g);
        p.check().unwrap();
        assert_eq!(p.contract().unwrap(), g);
    }
}
