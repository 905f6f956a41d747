use serde::{Deserialize, Serialize};

use super::DecompositionError;
use crate::error::Result;
use crate::graph::{Graph, VertexId};
use crate::solver::Solver;
use crate::subset::bits;

/// A rooted forest on the graph's vertices, given by parent pointers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationForest {
    pub parent: Vec<Option<VertexId>>,
}

impl EliminationForest {
    fn depths(&self) -> std::result::Result<Vec<usize>, DecompositionError> {
        let n = self.parent.len();
        let mut depth = vec![0usize; n];
        for v in 0..n {
            let mut d = 1;
            let mut x = v;
            while let Some(p) = self.parent[x] {
                if p >= n || d > n {
                    return Err(DecompositionError::BadForest {
                        reason: format!("vertex {v} has a bad ancestor chain"),
                    });
                }
                x = p;
                d += 1;
            }
            depth[v] = d;
        }
        Ok(depth)
    }

    fn is_ancestor(&self, a: VertexId, mut v: VertexId) -> bool {
        while let Some(p) = self.parent[v] {
            if p == a {
                return true;
            }
            v = p;
        }
        false
    }

    /// Depth once every graph edge joins an ancestor and a descendant. Depth
    /// counts edges on the longest root-to-leaf path, so a single vertex has
    /// depth 0.
    pub fn validate(&self, g: &Graph) -> std::result::Result<usize, DecompositionError> {
        if self.parent.len() != g.n() {
            return Err(DecompositionError::BadForest {
                reason: format!("{} parents for {} vertices", self.parent.len(), g.n()),
            });
        }
        let depth = self.depths()?;
        for &(u, v) in g.edges() {
            if !self.is_ancestor(u, v) && !self.is_ancestor(v, u) {
                return Err(DecompositionError::NotAncestral { u, v });
            }
        }
        Ok(depth.into_iter().max().unwrap_or(1).saturating_sub(1))
    }
}

pub fn exact_treedepth(g: &Graph) -> Result<(usize, EliminationForest)> {
    Solver::default().treedepth(g)
}

struct Td<'a> {
    adj: &'a [u32],
    memo: Vec<u8>,
}

impl Td<'_> {
    fn components(&self, s: u32) -> Vec<u32> {
        let mut rest = s;
        let mut out = Vec::new();
        while rest != 0 {
            let mut comp = rest & rest.wrapping_neg();
            let mut frontier = comp;
            while frontier != 0 {
                let nb = bits(frontier).fold(0u32, |m, x| m | self.adj[x]);
                frontier = nb & rest & !comp;
                comp |= frontier;
            }
            rest &= !comp;
            out.push(comp);
        }
        out
    }

    fn depth(&mut self, s: u32) -> u8 {
        if s == 0 {
            return 0;
        }
        if s.count_ones() == 1 {
            return 1;
        }
        if self.memo[s as usize] != 0 {
            return self.memo[s as usize];
        }
        let comps = self.components(s);
        let d = if comps.len() > 1 {
            comps.into_iter().map(|c| self.depth(c)).max().unwrap_or(0)
        } else {
            1 + bits(s)
                .map(|v| self.depth(s & !(1 << v)))
                .min()
                .unwrap_or(0)
        };
        self.memo[s as usize] = d;
        d
    }

    fn build(&mut self, s: u32, parent: Option<VertexId>, out: &mut [Option<VertexId>]) {
        if s == 0 {
            return;
        }
        let comps = self.components(s);
        if comps.len() > 1 {
            for c in comps {
                self.build(c, parent, out);
            }
            return;
        }
        let target = self.depth(s);
        let root = bits(s)
            .find(|&v| 1 + self.depth(s & !(1 << v)) == target)
            .expect("optimal root exists");
        out[root] = parent;
        self.build(s & !(1 << root), Some(root), out);
    }
}

impl Solver {
    /// Minimum tree-depth, in edges of the longest root-to-leaf path. Counted
    /// in vertices, a connected set needs one root plus the best depth of
    /// what remains, and a disconnected set takes its deepest component.
    pub fn treedepth(&self, g: &Graph) -> Result<(usize, EliminationForest)> {
        self.check("treedepth", g.n(), self.limits.treedepth)?;
        let n = g.n();
        let adj: Vec<u32> = g.neighbor_masks().into_iter().map(|m| m as u32).collect();
        let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        let mut td = Td {
            adj: &adj,
            memo: vec![0; 1usize << n],
        };
        let depth = td.depth(full);
        let mut parent = vec![None; n];
        td.build(full, None, &mut parent);
        Ok((
            (depth as usize).saturating_sub(1),
            EliminationForest { parent },
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::*;
    use crate::oracle;

    #[test]
    fn k38_has_depth_three() {
        let g = k3n(8).unwrap();
        let (d, f) = exact_treedepth(&g).unwrap();
        assert_eq!(d, 3);
        assert_eq!(f.validate(&g).unwrap(), 3);
        // a, b, c on one root path, side B hanging below
        let roots: Vec<_> = (0..11).filter(|&v| f.parent[v].is_none()).collect();
        assert_eq!(roots.len(), 1);
    }

    #[test]
    fn small_values() {
        // depths in edges: three vertices on the longest root path of P4
        assert_eq!(exact_treedepth(&path(4).unwrap()).unwrap().0, 2);
        assert_eq!(oracle::treedepth(&path(4).unwrap()).unwrap(), 2);
        assert_eq!(exact_treedepth(&Graph::empty(1)).unwrap().0, 0);
        assert_eq!(exact_treedepth(&Graph::empty(0)).unwrap().0, 0);
        assert_eq!(exact_treedepth(&complete(5).unwrap()).unwrap().0, 4);
        assert_eq!(exact_treedepth(&path(7).unwrap()).unwrap().0, 2);
    }

    #[test]
    fn matches_oracle() {
        for seed in 0..8 {
            let g = random_connected(7, seed as usize % 5, seed).unwrap();
            let (d, f) = exact_treedepth(&g).unwrap();
            assert_eq!(d, oracle::treedepth(&g).unwrap());
            assert_eq!(f.validate(&g).unwrap(), d);
        }
    }

    #[test]
    fn non_ancestral_edge_rejected() {
        let g = path(3).unwrap();
        let f = EliminationForest {
            parent: vec![Some(1), None, Some(0)],
        };
        assert_eq!(f.validate(&g).unwrap(), 2);
        let f = EliminationForest {
            parent: vec![None, None, Some(1)],
        };
        assert_eq!(
            f.validate(&g),
            Err(DecompositionError::NotAncestral { u: 0, v: 1 })
        );
    }
}
